#pragma once

#include <vector>

#include "moran/construction.hpp"
#include "moran/counting.hpp"
#include "moran/parallel.hpp"

namespace moran {

/// Which scale dominates along the periodic tail: `wide` when the period's
/// m-product is smaller than its n-product (so l(k) <= k eventually),
/// `tall` when larger, `balanced` when equal.
enum class Orientation { wide, tall, balanced };

/// Per-period log sums of the periodic tail.
struct PeriodProfile {
  Orientation orientation = Orientation::balanced;
  double log_m = 0.0;
  double log_n = 0.0;
  std::array<double, kFactorCount> log_factor{};

  double sum(Factor f) const { return log_factor[static_cast<std::size_t>(f)]; }
};

PeriodProfile period_profile(const Construction& c);

/// Limit of a ratio sequence a_k observed on a window.
///
/// `limit` is the exact limit implied by the periodic tail. When the tail
/// (window/2, window] lies past the preperiod, lower == upper == limit and
/// the tail extremes are diagnostics; otherwise the window has not reached
/// the periodic regime and lower/upper are the tail min/max.
struct TailEstimate {
  double lower = 0.0;
  double upper = 0.0;
  double limit = 0.0;
  double tail_min = 0.0;
  double tail_max = 0.0;
  double oscillation = 0.0;
  int window = 0;
  bool periodic_tail = true;
  std::vector<double> sequence;  // a_1 .. a_window
};

/// Shared tail protocol for box and entropy ratio sequences.
TailEstimate tail_estimate(const Construction& c, std::vector<double> sequence, double limit);

/// lim_m inf_k (or sup_k) of the nested-count ratios.
struct GapLimitEstimate {
  double value = 0.0;    // exact limit for the eventually periodic construction
  double numeric = 0.0;  // monotone estimate from period-multiple gaps
  double numeric_oscillation = 0.0;
  double zeta_last = 0.0;  // raw inf/sup over k at gap_limit
  double oscillation = 0.0;  // of the raw sequence over its last quarter
  double error_bar = 0.0;
  int gap_limit = 0;
  int k_scan = 0;
  bool stabilized = true;
  std::vector<double> zeta;  // raw values for m = 1 .. gap_limit
};

struct XiValue {
  int k = 0;
  int k2 = 0;
  double value = 0.0;
};

struct DimensionReport {
  double lower_box = 0.0;
  double upper_box = 0.0;  // equals the packing dimension
  double lower_dim = 0.0;
  double assouad = 0.0;
  int window = 0;
  TailEstimate box;
  GapLimitEstimate lower;
  GapLimitEstimate upper;
  bool chain_holds = true;
};

/// Box-counting ratio log N_{l,k} / log(m_1...m_k) for k = 1..window.
TailEstimate box_dimensions(const Construction& c, int window);

/// log N^-_{k,k2} / log(m_{k+1}...m_{k2}).
XiValue xi(const Construction& c, int k, int k2);
/// log N^+_{k,k2} / log(m_{k+1}...m_{k2}).
XiValue beta(const Construction& c, int k, int k2);

GapLimitEstimate lower_dimension(const Construction& c, int gap_limit, Parallelism par = {});
GapLimitEstimate assouad_dimension(const Construction& c, int gap_limit, Parallelism par = {});

DimensionReport dimension_report(const Construction& c, int window, int gap_limit,
                                 Parallelism par = {});

/// Upper bound on the k-scan used for the inf/sup over k.
constexpr int kMaxScan = 1 << 16;

}  // namespace moran
