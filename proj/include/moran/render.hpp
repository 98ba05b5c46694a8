#pragma once

#include <cstdint>
#include <string>

#include "moran/construction.hpp"

namespace moran {

/// Plain PPM (P3) of the level-k prefractal on a width x width canvas:
/// white background, black rects, x = 0 on the left and y = 0 at the bottom.
/// A corner at coordinate t lands on pixel floor(t * width).
std::string render_ppm(const Construction& c, int level, int width,
                       std::uint64_t guard = 10'000'000);

}  // namespace moran
