#include "moran/render.hpp"

#include <vector>

#include "moran/oracle.hpp"

namespace moran {

namespace {

int to_pixel(const Rational& t, int width) {
  const Rational scaled = t * width;
  return static_cast<int>(boost::multiprecision::numerator(scaled) /
                          boost::multiprecision::denominator(scaled));
}

}  // namespace

std::string render_ppm(const Construction& c, int level, int width, std::uint64_t guard) {
  if (width < 1 || width > 16384) throw Error(ErrorCode::domain_error, "width must be in [1, 16384]");
  if (level < 0) throw Error(ErrorCode::domain_error, "level must be >= 0");
  std::vector<std::uint8_t> black(static_cast<std::size_t>(width) * width, 0);
  oracle::for_each_rect(
      c, level,
      [&](const oracle::Rect& r) {
        const int x0 = to_pixel(r.x0, width);
        const int x1 = to_pixel(r.x0 + r.width, width);
        const int row0 = width - to_pixel(r.y0 + r.height, width);
        const int row1 = width - to_pixel(r.y0, width);
        for (int row = row0; row < row1; ++row) {
          for (int x = x0; x < x1; ++x) black[static_cast<std::size_t>(row) * width + x] = 1;
        }
      },
      guard);

  std::string out = "P3\n" + std::to_string(width) + " " + std::to_string(width) + "\n255\n";
  out.reserve(out.size() + black.size() * 12);
  for (int row = 0; row < width; ++row) {
    for (int x = 0; x < width; ++x) {
      if (x > 0) out += ' ';
      out += black[static_cast<std::size_t>(row) * width + x] ? "0 0 0" : "255 255 255";
    }
    out += '\n';
  }
  return out;
}

}  // namespace moran
