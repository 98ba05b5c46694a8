#pragma once

#include <array>
#include <initializer_list>
#include <map>
#include <optional>
#include <vector>

#include "moran/construction.hpp"

namespace moran {

/// Per-level digit statistics. Minima are over nonzero rows/columns only.
struct DigitStats {
  int r = 0;                 // |D|
  std::map<int, int> rows;   // j -> r(j), occupied rows only
  std::map<int, int> cols;   // i -> rhat(i), occupied columns only
  int r_minus = 0;
  int r_plus = 0;
  int rhat_minus = 0;
  int rhat_plus = 0;
  int s = 0;                 // occupied rows
  int shat = 0;              // occupied columns
};

DigitStats digit_stats(const Level& level);

/// A positive integer count held by its natural log, plus the exact value
/// when the product spans at most 64 levels.
struct LogCount {
  double log_value = 0.0;
  std::optional<BigInt> exact;
};

/// The per-level factors appearing in the counting products.
enum class Factor { r, s, shat, r_minus, r_plus, rhat_minus, rhat_plus };
constexpr std::size_t kFactorCount = 7;

int factor_value(const DigitStats& stats, Factor f);

/// Product of `factor` over levels a < h <= b.
struct Segment {
  Factor factor;
  int a;
  int b;
};

/// At most three segments make up any of the counting products.
struct SegmentList {
  std::array<Segment, 3> items{};
  int size = 0;

  SegmentList() = default;
  SegmentList(std::initializer_list<Segment> segs) {
    for (const Segment& s : segs) items[static_cast<std::size_t>(size++)] = s;
  }
  const Segment* begin() const { return items.data(); }
  const Segment* end() const { return items.data() + size; }
};

enum class Bound { minus, plus };

/// The six orderings of (l, l', k, k') distinguishing the nested counts.
/// Boundary coincidences are resolved in order 1..6; empty index ranges
/// contribute a factor of 1, so any overlapping case gives the same product.
enum class NestCase {
  wide_inside = 1,    // l < l' <= k < k'
  wide_crossing = 2,  // l <= k < l' <= k'
  wide_to_tall = 3,   // l <= k < k' <= l'
  tall_to_wide = 4,   // k <= l < l' <= k'
  tall_crossing = 5,  // k <= l < k' <= l'
  tall_inside = 6,    // k < k' <= l < l'
};

NestCase classify(int k, int k2, int l, int l2);

SegmentList nested_segments(int k, int k2, int l, int l2, Bound bound);
SegmentList total_segments(int k, int l);

/// Prefix sums of log factors for levels 1..depth, plus exact per-level stats.
class FactorTable {
 public:
  FactorTable(const Construction& c, int depth);

  int depth() const { return depth_; }
  const DigitStats& stats(int h) const;
  /// sum over a < h <= b of log factor_h
  double log_sum(Factor f, int a, int b) const;
  double log_product(const SegmentList& segments) const;
  BigInt exact_product(const SegmentList& segments) const;

 private:
  const Construction* c_;
  int depth_;
  std::vector<DigitStats> stored_stats_;
  std::array<std::vector<double>, kFactorCount> prefix_;
};

/// Scale and factor tables built together for bulk count evaluation.
class CountingTables {
 public:
  /// Tables covering vertical depth up to max_k (and the matching l).
  CountingTables(const Construction& c, int max_k);

  const ScaleTable& scales() const { return scales_; }
  const FactorTable& factors() const { return factors_; }

  double log_total(int k) const;
  double log_nested(int k, int k2, Bound bound) const;

 private:
  ScaleTable scales_;
  FactorTable factors_;
};

/// N_{l,k}: number of depth-k approximate squares.
LogCount count_approx_squares(const Construction& c, int k);

/// Min (Bound::minus) or max (Bound::plus) number of depth-k2 approximate
/// squares inside one depth-k square. Requires 0 <= k < k2.
LogCount nested_count(const Construction& c, int k, int k2, Bound bound);
LogCount n_minus(const Construction& c, int k, int k2);
LogCount n_plus_count(const Construction& c, int k, int k2);

}  // namespace moran
