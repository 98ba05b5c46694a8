#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "moran/error.hpp"

namespace moran {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Grid position kept at one construction stage: column i, row j.
struct Digit {
  int i = 0;
  int j = 0;

  friend auto operator<=>(const Digit&, const Digit&) = default;
};

/// One construction stage: every rectangle is cut into an n x m grid and the
/// cells listed in `digits` are kept. Digits are stored sorted.
struct Level {
  int n = 0;
  int m = 0;
  std::vector<Digit> digits;

  friend bool operator==(const Level&, const Level&) = default;
};

/// Checks n, m >= 2, 0 <= i < n, 0 <= j < m, no duplicates and at least two
/// digits. Returns the level with its digits sorted.
Level validate(Level level);

/// Eventually periodic sequence of levels, indexed from 1.
///
/// level_at(k) is preperiod[k-1] for k <= |preperiod|, otherwise the period
/// repeats forever. Immutable after construction.
class Construction {
 public:
  Construction(std::vector<Level> preperiod, std::vector<Level> period);

  /// Shorthand for a construction that repeats a single level.
  static Construction constant(Level level);

  const Level& level_at(int k) const;

  std::span<const Level> preperiod() const { return preperiod_; }
  std::span<const Level> period() const { return period_; }

  /// Number of distinct stored levels (|preperiod| + |period|).
  int stored_count() const {
    return static_cast<int>(preperiod_.size() + period_.size());
  }
  /// Maps any k >= 1 onto the index of the stored level it repeats (0-based).
  int stored_index(int k) const;
  const Level& stored(int index) const;

 private:
  std::vector<Level> preperiod_;
  std::vector<Level> period_;
};

/// max over all stored levels of max(n, m).
int n_plus(const Construction& c);

/// k with 1/(m_1...m_k) <= delta < 1/(m_1...m_{k-1}). Exact comparison.
int k_of_delta(const Construction& c, double delta);
int k_of_delta(const Construction& c, const Rational& delta);

struct ScalePair {
  int k = 0;
  int l = 0;
  double log_r = 0.0;  // sum_{i<=k} log m_i
  double log_n = 0.0;  // sum_{i<=l} log n_i
};

/// Horizontal depth matching vertical depth k: the unique l with
/// 1/(n_1...n_l) <= 1/(m_1...m_k) < 1/(n_1...n_{l-1}).
ScalePair l_of_k(const Construction& c, int k);

/// Scale bookkeeping for k = 0..max_k, computed once.
///
/// Comparisons are exact while both depths are at most 64. Beyond that the
/// cumulative logs decide, falling back to exact products whenever the two
/// logs are within 1e-9 of each other.
class ScaleTable {
 public:
  ScaleTable(const Construction& c, int max_k);

  int max_k() const { return static_cast<int>(l_.size()) - 1; }
  int max_l() const { return static_cast<int>(log_n_.size()) - 1; }
  int l(int k) const { return l_.at(static_cast<std::size_t>(k)); }
  double log_r(int k) const { return log_r_.at(static_cast<std::size_t>(k)); }
  double log_n(int l) const { return log_n_.at(static_cast<std::size_t>(l)); }
  ScalePair pair(int k) const { return {k, l(k), log_r(k), log_n(l(k))}; }

 private:
  std::vector<int> l_;
  std::vector<double> log_r_;
  std::vector<double> log_n_;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Parameters for seeded random eventually periodic constructions.
struct RandomConstructionParams {
  int max_preperiod = 2;
  int max_period = 3;
  int min_base = 2;
  int max_base = 5;
};

/// Deterministic for a given seed on every platform.
Construction random_construction(std::uint64_t seed,
                                 const RandomConstructionParams& params = {});

}  // namespace moran
