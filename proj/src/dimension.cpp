#include "moran/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace moran {

PeriodProfile period_profile(const Construction& c) {
  PeriodProfile prof;
  CompensatedSum lm, ln;
  std::array<CompensatedSum, kFactorCount> acc;
  BigInt prod_m = 1, prod_n = 1;
  for (const Level& lv : c.period()) {
    lm.add(std::log(static_cast<double>(lv.m)));
    ln.add(std::log(static_cast<double>(lv.n)));
    prod_m *= lv.m;
    prod_n *= lv.n;
    const DigitStats st = digit_stats(lv);
    for (std::size_t f = 0; f < kFactorCount; ++f) {
      acc[f].add(std::log(static_cast<double>(factor_value(st, static_cast<Factor>(f)))));
    }
  }
  prof.log_m = lm.value();
  prof.log_n = ln.value();
  for (std::size_t f = 0; f < kFactorCount; ++f) prof.log_factor[f] = acc[f].value();
  if (prod_m < prod_n) {
    prof.orientation = Orientation::wide;
  } else if (prod_m > prod_n) {
    prof.orientation = Orientation::tall;
  } else {
    prof.orientation = Orientation::balanced;
  }
  return prof;
}

namespace {

// Limits of the ratio sequences along the periodic tail. Over a long stretch
// every index range averages to per-period sums, and l(k)/k tends to
// log_m/log_n.
double box_limit(const PeriodProfile& p) {
  switch (p.orientation) {
    case Orientation::wide:
      return p.sum(Factor::r) / p.log_n + p.sum(Factor::s) * (1.0 / p.log_m - 1.0 / p.log_n);
    case Orientation::tall:
      return p.sum(Factor::r) / p.log_m + p.sum(Factor::shat) * (1.0 / p.log_n - 1.0 / p.log_m);
    case Orientation::balanced:
      return p.sum(Factor::r) / p.log_m;
  }
  return 0.0;
}

double gap_limit_value(const PeriodProfile& p, Bound bound) {
  const Factor row = bound == Bound::minus ? Factor::r_minus : Factor::r_plus;
  const Factor col = bound == Bound::minus ? Factor::rhat_minus : Factor::rhat_plus;
  switch (p.orientation) {
    case Orientation::wide:
      return p.sum(row) / p.log_n + p.sum(Factor::s) / p.log_m;
    case Orientation::tall:
      return p.sum(col) / p.log_m + p.sum(Factor::shat) / p.log_n;
    case Orientation::balanced:
      return p.sum(Factor::r) / p.log_m;
  }
  return 0.0;
}

// Smallest k from which windows of length `gap` can sit entirely on one side
// of the l(k) = k diagonal.
double separation_depth(const PeriodProfile& p, int gap) {
  const double ratio = p.log_m / p.log_n;
  switch (p.orientation) {
    case Orientation::wide: return ratio * gap / (1.0 - ratio);
    case Orientation::tall: return gap / (ratio - 1.0);
    case Orientation::balanced: return 0.0;
  }
  return 0.0;
}

double spread(const std::vector<double>& v, std::size_t from) {
  if (from >= v.size()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin() + static_cast<std::ptrdiff_t>(from), v.end());
  return *hi - *lo;
}

}  // namespace

TailEstimate tail_estimate(const Construction& c, std::vector<double> sequence, double limit) {
  TailEstimate est;
  est.window = static_cast<int>(sequence.size());
  const auto start = sequence.size() / 2;
  const auto [lo, hi] = std::minmax_element(sequence.begin() + static_cast<std::ptrdiff_t>(start),
                                            sequence.end());
  est.tail_min = *lo;
  est.tail_max = *hi;
  est.oscillation = est.tail_max - est.tail_min;
  est.limit = limit;
  est.periodic_tail = static_cast<std::size_t>(c.preperiod().size()) <= start;
  if (est.periodic_tail) {
    est.lower = est.upper = limit;
  } else {
    est.lower = est.tail_min;
    est.upper = est.tail_max;
  }
  est.sequence = std::move(sequence);
  return est;
}

TailEstimate box_dimensions(const Construction& c, int window) {
  if (window < std::max(2, c.stored_count())) {
    throw Error(ErrorCode::window_too_small,
                "window must cover the preperiod and one period (>= " +
                    std::to_string(std::max(2, c.stored_count())) + ")");
  }
  const CountingTables tables(c, window);
  std::vector<double> seq;
  seq.reserve(static_cast<std::size_t>(window));
  for (int k = 1; k <= window; ++k) seq.push_back(tables.log_total(k) / tables.scales().log_r(k));
  return tail_estimate(c, std::move(seq), box_limit(period_profile(c)));
}

namespace {

XiValue ratio(const Construction& c, int k, int k2, Bound bound) {
  const LogCount count = nested_count(c, k, k2, bound);
  const ScaleTable scales(c, k2);
  return {k, k2, count.log_value / (scales.log_r(k2) - scales.log_r(k))};
}

GapLimitEstimate gap_estimate(const Construction& c, int gap_limit, Bound bound,
                              Parallelism par) {
  const int period = static_cast<int>(c.period().size());
  const int pre = static_cast<int>(c.preperiod().size());
  if (gap_limit < std::max(2, 2 * period)) {
    throw Error(ErrorCode::window_too_small,
                "gap_limit must be at least twice the period length (>= " +
                    std::to_string(std::max(2, 2 * period)) + ")");
  }
  const PeriodProfile prof = period_profile(c);
  const bool take_min = bound == Bound::minus;
  const double need = separation_depth(prof, gap_limit);

  GapLimitEstimate est;
  est.gap_limit = gap_limit;
  est.value = gap_limit_value(prof, bound);
  const double wanted = pre + std::ceil(1.25 * need) + 8.0 * period + 64.0;
  const bool capped = wanted > kMaxScan;
  est.k_scan = capped ? kMaxScan : static_cast<int>(wanted);

  const CountingTables tables(c, est.k_scan + gap_limit);
  const ScaleTable& sc = tables.scales();
  auto extreme_over_k = [&](int gap, int k_from, auto&& normalise) {
    double best = take_min ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
    for (int k = k_from; k <= est.k_scan; ++k) {
      const double v = normalise(k, tables.log_nested(k, k + gap, bound));
      best = take_min ? std::min(best, v) : std::max(best, v);
    }
    return best;
  };

  est.zeta.assign(static_cast<std::size_t>(gap_limit), 0.0);
  parallel_for(est.zeta.size(), par, [&](std::size_t idx) {
    const int gap = static_cast<int>(idx) + 1;
    est.zeta[idx] = extreme_over_k(gap, 0, [&](int k, double log_count) {
      return log_count / (sc.log_r(k + gap) - sc.log_r(k));
    });
  });
  est.zeta_last = est.zeta.back();
  est.oscillation = spread(est.zeta, est.zeta.size() * 3 / 4);

  // Windows of whole periods past the preperiod all have denominator
  // j * log_m, and the extreme log counts are super- (minus) or sub- (plus)
  // additive in j, so the running sup (resp. inf) converges monotonically.
  const auto periods = static_cast<std::size_t>(gap_limit / period);
  std::vector<double> per_gap(periods);
  parallel_for(periods, par, [&](std::size_t idx) {
    const int j = static_cast<int>(idx) + 1;
    per_gap[idx] = extreme_over_k(j * period, pre, [&](int, double log_count) {
      return log_count / (j * prof.log_m);
    });
  });
  std::vector<double> running(per_gap.size());
  for (std::size_t idx = 0; idx < per_gap.size(); ++idx) {
    running[idx] = idx == 0 ? per_gap[0]
                   : take_min ? std::max(running[idx - 1], per_gap[idx])
                              : std::min(running[idx - 1], per_gap[idx]);
  }
  est.numeric = running.back();
  est.numeric_oscillation = spread(running, running.size() * 3 / 4);
  est.error_bar = std::abs(est.numeric - est.value);
  est.stabilized = !capped && est.error_bar <= std::max(est.oscillation, 1e-6);
  return est;
}

}  // namespace

XiValue xi(const Construction& c, int k, int k2) { return ratio(c, k, k2, Bound::minus); }

XiValue beta(const Construction& c, int k, int k2) { return ratio(c, k, k2, Bound::plus); }

GapLimitEstimate lower_dimension(const Construction& c, int gap_limit, Parallelism par) {
  return gap_estimate(c, gap_limit, Bound::minus, par);
}

GapLimitEstimate assouad_dimension(const Construction& c, int gap_limit, Parallelism par) {
  return gap_estimate(c, gap_limit, Bound::plus, par);
}

DimensionReport dimension_report(const Construction& c, int window, int gap_limit,
                                 Parallelism par) {
  DimensionReport rep;
  rep.window = window;
  rep.box = box_dimensions(c, window);
  rep.lower = lower_dimension(c, gap_limit, par);
  rep.upper = assouad_dimension(c, gap_limit, par);
  rep.lower_box = rep.box.lower;
  rep.upper_box = rep.box.upper;
  rep.lower_dim = rep.lower.value;
  rep.assouad = rep.upper.value;
  constexpr double tol = 1e-9;
  rep.chain_holds = 0.0 <= rep.lower_dim + tol && rep.lower_dim <= rep.lower_box + tol &&
                    rep.lower_box <= rep.upper_box + tol && rep.upper_box <= rep.assouad + tol &&
                    rep.assouad <= 2.0 + tol;
  return rep;
}

}  // namespace moran
