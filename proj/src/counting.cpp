#include "moran/counting.hpp"

#include <algorithm>
#include <cmath>

namespace moran {

DigitStats digit_stats(const Level& level) {
  DigitStats st;
  st.r = static_cast<int>(level.digits.size());
  for (const Digit& d : level.digits) {
    ++st.rows[d.j];
    ++st.cols[d.i];
  }
  st.s = static_cast<int>(st.rows.size());
  st.shat = static_cast<int>(st.cols.size());
  auto [rmin, rmax] = std::minmax_element(
      st.rows.begin(), st.rows.end(),
      [](const auto& a, const auto& b) { return a.second < b.second; });
  st.r_minus = rmin->second;
  st.r_plus = rmax->second;
  auto [cmin, cmax] = std::minmax_element(
      st.cols.begin(), st.cols.end(),
      [](const auto& a, const auto& b) { return a.second < b.second; });
  st.rhat_minus = cmin->second;
  st.rhat_plus = cmax->second;
  return st;
}

int factor_value(const DigitStats& st, Factor f) {
  switch (f) {
    case Factor::r: return st.r;
    case Factor::s: return st.s;
    case Factor::shat: return st.shat;
    case Factor::r_minus: return st.r_minus;
    case Factor::r_plus: return st.r_plus;
    case Factor::rhat_minus: return st.rhat_minus;
    case Factor::rhat_plus: return st.rhat_plus;
  }
  return 1;
}

NestCase classify(int k, int k2, int l, int l2) {
  if (l <= k) {
    if (l2 <= k) return NestCase::wide_inside;
    if (l2 <= k2) return NestCase::wide_crossing;
    return NestCase::wide_to_tall;
  }
  if (l2 <= k2) return NestCase::tall_to_wide;
  if (l < k2) return NestCase::tall_crossing;
  return NestCase::tall_inside;
}

SegmentList nested_segments(int k, int k2, int l, int l2, Bound bound) {
  const Factor row = bound == Bound::minus ? Factor::r_minus : Factor::r_plus;
  const Factor col = bound == Bound::minus ? Factor::rhat_minus : Factor::rhat_plus;
  switch (classify(k, k2, l, l2)) {
    case NestCase::wide_inside:
      return {{row, l, l2}, {Factor::s, k, k2}};
    case NestCase::wide_crossing:
      return {{row, l, k}, {Factor::r, k, l2}, {Factor::s, l2, k2}};
    case NestCase::wide_to_tall:
      return {{row, l, k}, {Factor::r, k, k2}, {Factor::shat, k2, l2}};
    case NestCase::tall_to_wide:
      return {{col, k, l}, {Factor::r, l, l2}, {Factor::s, l2, k2}};
    case NestCase::tall_crossing:
      return {{col, k, l}, {Factor::r, l, k2}, {Factor::shat, k2, l2}};
    case NestCase::tall_inside:
      return {{col, k, k2}, {Factor::shat, l, l2}};
  }
  return {};
}

SegmentList total_segments(int k, int l) {
  if (l <= k) return {{Factor::r, 0, l}, {Factor::s, l, k}};
  return {{Factor::r, 0, k}, {Factor::shat, k, l}};
}

FactorTable::FactorTable(const Construction& c, int depth) : c_(&c), depth_(depth) {
  stored_stats_.reserve(static_cast<std::size_t>(c.stored_count()));
  for (int idx = 0; idx < c.stored_count(); ++idx) {
    stored_stats_.push_back(digit_stats(c.stored(idx)));
  }
  for (std::size_t f = 0; f < kFactorCount; ++f) {
    auto& pre = prefix_[f];
    pre.reserve(static_cast<std::size_t>(depth) + 1);
    pre.push_back(0.0);
    CompensatedSum acc;
    for (int h = 1; h <= depth; ++h) {
      acc.add(std::log(static_cast<double>(factor_value(stats(h), static_cast<Factor>(f)))));
      pre.push_back(acc.value());
    }
  }
}

const DigitStats& FactorTable::stats(int h) const {
  return stored_stats_[static_cast<std::size_t>(c_->stored_index(h))];
}

double FactorTable::log_sum(Factor f, int a, int b) const {
  if (b <= a) return 0.0;
  const auto& pre = prefix_[static_cast<std::size_t>(f)];
  return pre.at(static_cast<std::size_t>(b)) - pre.at(static_cast<std::size_t>(a));
}

double FactorTable::log_product(const SegmentList& segments) const {
  double total = 0.0;
  for (const Segment& seg : segments) total += log_sum(seg.factor, seg.a, seg.b);
  return total;
}

BigInt FactorTable::exact_product(const SegmentList& segments) const {
  BigInt prod = 1;
  for (const Segment& seg : segments) {
    for (int h = seg.a + 1; h <= seg.b; ++h) prod *= factor_value(stats(h), seg.factor);
  }
  return prod;
}

namespace {

int needed_depth(const ScaleTable& scales) {
  return std::max(scales.max_k(), scales.max_l());
}

constexpr int kExactSpan = 64;

LogCount evaluate(const Construction& c, int max_k, int lo, int hi,
                  const SegmentList& segments) {
  const ScaleTable scales(c, max_k);
  const FactorTable table(c, needed_depth(scales));
  LogCount out;
  out.log_value = table.log_product(segments);
  if (hi - lo <= kExactSpan) out.exact = table.exact_product(segments);
  return out;
}

}  // namespace

CountingTables::CountingTables(const Construction& c, int max_k)
    : scales_(c, max_k), factors_(c, needed_depth(scales_)) {}

double CountingTables::log_total(int k) const {
  return factors_.log_product(total_segments(k, scales_.l(k)));
}

double CountingTables::log_nested(int k, int k2, Bound bound) const {
  return factors_.log_product(nested_segments(k, k2, scales_.l(k), scales_.l(k2), bound));
}

LogCount count_approx_squares(const Construction& c, int k) {
  if (k < 1) throw Error(ErrorCode::domain_error, "k must be >= 1");
  const int l = ScaleTable(c, k).l(k);
  return evaluate(c, k, 0, std::max(k, l), total_segments(k, l));
}

LogCount nested_count(const Construction& c, int k, int k2, Bound bound) {
  if (k < 0 || k >= k2) {
    throw Error(ErrorCode::bad_range, "nested counts need 0 <= k < k2, got k=" +
                                          std::to_string(k) + " k2=" + std::to_string(k2));
  }
  const ScaleTable scales(c, k2);
  const int l = scales.l(k);
  const int l2 = scales.l(k2);
  return evaluate(c, k2, std::min(k, l), std::max(k2, l2),
                  nested_segments(k, k2, l, l2, bound));
}

LogCount n_minus(const Construction& c, int k, int k2) {
  return nested_count(c, k, k2, Bound::minus);
}

LogCount n_plus_count(const Construction& c, int k, int k2) {
  return nested_count(c, k, k2, Bound::plus);
}

}  // namespace moran
