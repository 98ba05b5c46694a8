#pragma once

// Brute-force checks that share no code path with the counting, dimension
// and measure formulas: everything here enumerates words of the symbolic
// space directly and compares exact integers or rationals.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "moran/construction.hpp"
#include "moran/counting.hpp"
#include "moran/measure.hpp"

namespace moran::oracle {

constexpr std::uint64_t kDefaultGuard = 10'000'000;

/// A k-th level basic rectangle, in exact coordinates.
struct Rect {
  Rational x0, y0, width, height;
};

/// Calls fn(rect) for every word of length k, in lexicographic word order.
void for_each_rect(const Construction& c, int k, const std::function<void(const Rect&)>& fn,
                   std::uint64_t guard = kDefaultGuard);
std::vector<Rect> enumerate_rects(const Construction& c, int k, std::uint64_t guard = kDefaultGuard);

/// Number of delta-grid cells [a d,(a+1) d) x [b d,(b+1) d) meeting the
/// level-k_geom prefractal in positive area.
std::uint64_t box_count(const Construction& c, int k_geom, const Rational& delta,
                        std::uint64_t guard = kDefaultGuard);

/// Distinct (i_1..i_l, j_1..j_k) tuples realised by words.
BigInt census_approx_squares(const Construction& c, int k, std::uint64_t guard = kDefaultGuard);

struct GammaCensus {
  BigInt min;
  BigInt max;
};

/// Min and max over depth-k squares of the number of depth-k2 squares inside.
GammaCensus gamma_census(const Construction& c, int k, int k2, std::uint64_t guard = kDefaultGuard);

/// Sum of cylinder masses over all words consistent with the square.
Rational brute_measure(const Construction& c, const ProbAssignment& p, const ApproxSquare& sq,
                       std::uint64_t guard = kDefaultGuard);

/// Masses of every depth-k square by summing cylinders, in tuple order.
std::vector<std::pair<ApproxSquare, Rational>> brute_square_masses(
    const Construction& c, const ProbAssignment& p, int k, std::uint64_t guard = kDefaultGuard);

/// sum over depth-k squares of -mu(S) log mu(S).
double brute_entropy(const Construction& c, const ProbAssignment& p, int k,
                     std::uint64_t guard = kDefaultGuard);

struct DyadicEntropy {
  double entropy = 0.0;
  int k = 0;      // k(2^-n)
  int depth = 0;  // depth of the aggregated squares
  /// Mass of squares straddling a dyadic cell edge: at most this much mass
  /// can be misassigned.
  double straddle_mass = 0.0;
};

/// Entropy of the 2^-n grid partition, with cell masses aggregated from
/// approximate squares at depth k(2^-n) + 2 assigned by their centre.
DyadicEntropy dyadic_entropy(const Construction& c, const ProbAssignment& p, int n,
                             std::uint64_t guard = kDefaultGuard);

struct LocalDimSample {
  std::vector<Digit> word;
  std::vector<double> ratios;  // k = 1 .. k_max
};

/// Words drawn from the measure; sample `index` depends only on (seed, index).
std::vector<LocalDimSample> local_dim_samples(const Construction& c, const ProbAssignment& p,
                                              std::uint64_t seed, int count, int k_max);

// ---- verification harness -------------------------------------------------

using NestedCountFn = std::function<LogCount(const Construction&, int, int, Bound)>;

struct CheckResult {
  std::string name;
  bool passed = true;
  std::uint64_t comparisons = 0;
  std::string detail;  // first mismatch, empty when passed
};

struct VerifyOptions {
  int max_depth = 6;
  int pairs_depth = 5;
  std::uint64_t guard = kDefaultGuard;
  NestedCountFn nested = nested_count;
};

CheckResult check_census(const Construction& c, const VerifyOptions& opt);
CheckResult check_gamma(const Construction& c, const VerifyOptions& opt);
CheckResult check_measure(const Construction& c, const ProbAssignment& p, const VerifyOptions& opt);
CheckResult check_entropy(const Construction& c, const ProbAssignment& p, const VerifyOptions& opt);
CheckResult check_superadditivity(const Construction& c, const VerifyOptions& opt);

std::vector<CheckResult> verify(const Construction& c, const ProbAssignment& p,
                                const VerifyOptions& opt);

}  // namespace moran::oracle
