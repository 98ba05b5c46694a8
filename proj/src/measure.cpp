#include "moran/measure.hpp"

#include <algorithm>
#include <cmath>

#include "moran/counting.hpp"

namespace moran {

namespace {

std::string level_name(int index) { return "level " + std::to_string(index + 1); }

double log_of(const Rational& x) {
  return std::log(static_cast<double>(boost::multiprecision::numerator(x))) -
         std::log(static_cast<double>(boost::multiprecision::denominator(x)));
}

// -x log x with 0 log 0 = 0
double entropy_term(const Rational& x) { return x == 0 ? 0.0 : -static_cast<double>(x) * log_of(x); }

struct LevelMeasure {
  Marginals marg;
  double h_p = 0.0;
  double h_q = 0.0;
  double h_qhat = 0.0;
};

LevelMeasure level_measure(std::span<const Rational> probs, const Level& level) {
  LevelMeasure lm;
  lm.marg = marginals(probs, level);
  for (const Rational& x : probs) lm.h_p += entropy_term(x);
  for (const auto& [j, x] : lm.marg.q) lm.h_q += entropy_term(x);
  for (const auto& [i, x] : lm.marg.qhat) lm.h_qhat += entropy_term(x);
  return lm;
}

std::vector<LevelMeasure> stored_measures(const Construction& c, const ProbAssignment& p) {
  std::vector<LevelMeasure> out;
  for (int idx = 0; idx < c.stored_count(); ++idx) {
    out.push_back(level_measure(p.stored(idx), c.stored(idx)));
  }
  return out;
}

std::ptrdiff_t digit_index(const Level& level, Digit d) {
  auto it = std::lower_bound(level.digits.begin(), level.digits.end(), d);
  if (it == level.digits.end() || *it != d) return -1;
  return it - level.digits.begin();
}

const Rational& lookup(const std::map<int, Rational>& m, int key) {
  static const Rational zero = 0;
  auto it = m.find(key);
  return it == m.end() ? zero : it->second;
}

}  // namespace

ProbAssignment::ProbAssignment(const Construction& c, std::vector<std::vector<Rational>> per_level)
    : probs_(std::move(per_level)) {
  if (static_cast<int>(probs_.size()) != c.stored_count()) {
    throw Error(ErrorCode::invalid_probability,
                "expected probabilities for " + std::to_string(c.stored_count()) +
                    " stored levels, got " + std::to_string(probs_.size()));
  }
  for (int idx = 0; idx < c.stored_count(); ++idx) {
    const auto& probs = probs_[static_cast<std::size_t>(idx)];
    if (probs.size() != c.stored(idx).digits.size()) {
      throw Error(ErrorCode::invalid_probability,
                  level_name(idx) + ": one probability per digit required");
    }
    Rational total = 0;
    for (const Rational& x : probs) {
      if (x < 0) throw Error(ErrorCode::invalid_probability, level_name(idx) + ": negative probability");
      total += x;
    }
    if (total != 1) {
      throw Error(ErrorCode::invalid_probability,
                  level_name(idx) + ": probabilities sum to " + total.str() + ", not 1");
    }
  }
}

ProbAssignment ProbAssignment::uniform(const Construction& c) {
  std::vector<std::vector<Rational>> per_level;
  for (int idx = 0; idx < c.stored_count(); ++idx) {
    const auto r = static_cast<long>(c.stored(idx).digits.size());
    per_level.emplace_back(static_cast<std::size_t>(r), Rational(1, r));
  }
  return ProbAssignment(c, std::move(per_level));
}

std::span<const Rational> ProbAssignment::at(const Construction& c, int k) const {
  return stored(c.stored_index(k));
}

std::span<const Rational> ProbAssignment::stored(int index) const {
  return probs_.at(static_cast<std::size_t>(index));
}

Marginals marginals(std::span<const Rational> probs, const Level& level) {
  Marginals out;
  for (std::size_t idx = 0; idx < level.digits.size(); ++idx) {
    const Digit d = level.digits[idx];
    out.q[d.j] += probs[idx];
    out.qhat[d.i] += probs[idx];
  }
  return out;
}

Rational cylinder_mass(const Construction& c, const ProbAssignment& p,
                       std::span<const Digit> word) {
  Rational mass = 1;
  for (std::size_t h = 0; h < word.size(); ++h) {
    const int level = static_cast<int>(h) + 1;
    const auto idx = digit_index(c.level_at(level), word[h]);
    if (idx < 0) {
      throw Error(ErrorCode::invalid_word, "digit (" + std::to_string(word[h].i) + "," +
                                               std::to_string(word[h].j) + ") not in D_" +
                                               std::to_string(level));
    }
    mass *= p.at(c, level)[static_cast<std::size_t>(idx)];
  }
  return mass;
}

Rational approx_square_mass(const Construction& c, const ProbAssignment& p,
                            const ApproxSquare& sq) {
  if (sq.k < 1) throw Error(ErrorCode::invalid_square, "square depth must be >= 1");
  const int l = ScaleTable(c, sq.k).l(sq.k);
  if (sq.l != l || static_cast<int>(sq.i_prefix.size()) != l ||
      static_cast<int>(sq.j_prefix.size()) != sq.k) {
    throw Error(ErrorCode::invalid_square, "depth-" + std::to_string(sq.k) + " squares fix " +
                                               std::to_string(l) + " column digits and " +
                                               std::to_string(sq.k) + " row digits");
  }
  const auto measures = stored_measures(c, p);
  Rational mass = 1;
  const int both = std::min(sq.k, l);
  for (int h = 1; h <= std::max(sq.k, l); ++h) {
    const Level& lv = c.level_at(h);
    const LevelMeasure& lm = measures[static_cast<std::size_t>(c.stored_index(h))];
    const auto at = static_cast<std::size_t>(h - 1);
    if (h <= both) {
      const auto idx = digit_index(lv, {sq.i_prefix[at], sq.j_prefix[at]});
      if (idx < 0) throw Error(ErrorCode::invalid_square, "pair not in D_" + std::to_string(h));
      mass *= p.at(c, h)[static_cast<std::size_t>(idx)];
    } else if (h <= sq.k) {
      if (!lm.marg.q.contains(sq.j_prefix[at])) {
        throw Error(ErrorCode::invalid_square, "row unoccupied at level " + std::to_string(h));
      }
      mass *= lm.marg.q.at(sq.j_prefix[at]);
    } else {
      if (!lm.marg.qhat.contains(sq.i_prefix[at])) {
        throw Error(ErrorCode::invalid_square, "column unoccupied at level " + std::to_string(h));
      }
      mass *= lm.marg.qhat.at(sq.i_prefix[at]);
    }
  }
  return mass;
}

std::vector<std::pair<ApproxSquare, Rational>> enumerate_squares(
    const Construction& c, const ProbAssignment& p, int k, std::uint64_t guard) {
  if (k < 1) throw Error(ErrorCode::domain_error, "k must be >= 1");
  const LogCount count = count_approx_squares(c, k);
  if (count.log_value > std::log(static_cast<double>(guard)) + 1e-9) {
    throw Error(ErrorCode::guard_exceeded, "depth " + std::to_string(k) + " has more than " +
                                               std::to_string(guard) + " approximate squares");
  }
  const int l = ScaleTable(c, k).l(k);
  const auto measures = stored_measures(c, p);
  const int both = std::min(k, l);
  const int depth = std::max(k, l);

  std::vector<std::pair<ApproxSquare, Rational>> out;
  ApproxSquare cur{k, l, {}, {}};
  auto recurse = [&](auto&& self, int h, const Rational& mass) -> void {
    if (h > depth) {
      out.emplace_back(cur, mass);
      return;
    }
    const Level& lv = c.level_at(h);
    const LevelMeasure& lm = measures[static_cast<std::size_t>(c.stored_index(h))];
    if (h <= both) {
      const auto probs = p.at(c, h);
      for (std::size_t idx = 0; idx < lv.digits.size(); ++idx) {
        cur.i_prefix.push_back(lv.digits[idx].i);
        cur.j_prefix.push_back(lv.digits[idx].j);
        self(self, h + 1, mass * probs[idx]);
        cur.i_prefix.pop_back();
        cur.j_prefix.pop_back();
      }
    } else if (h <= k) {
      for (const auto& [j, q] : lm.marg.q) {
        cur.j_prefix.push_back(j);
        self(self, h + 1, mass * q);
        cur.j_prefix.pop_back();
      }
    } else {
      for (const auto& [i, q] : lm.marg.qhat) {
        cur.i_prefix.push_back(i);
        self(self, h + 1, mass * q);
        cur.i_prefix.pop_back();
      }
    }
  };
  recurse(recurse, 1, Rational(1));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

namespace {

struct EntropyTables {
  std::vector<double> h_p, h_q, h_qhat;  // prefix sums over levels

  EntropyTables(const Construction& c, const ProbAssignment& p, int depth) {
    const auto measures = stored_measures(c, p);
    CompensatedSum a, b, d;
    h_p.push_back(0.0);
    h_q.push_back(0.0);
    h_qhat.push_back(0.0);
    for (int h = 1; h <= depth; ++h) {
      const LevelMeasure& lm = measures[static_cast<std::size_t>(c.stored_index(h))];
      a.add(lm.h_p);
      b.add(lm.h_q);
      d.add(lm.h_qhat);
      h_p.push_back(a.value());
      h_q.push_back(b.value());
      h_qhat.push_back(d.value());
    }
  }

  static double range(const std::vector<double>& v, int a, int b) {
    return b <= a ? 0.0 : v[static_cast<std::size_t>(b)] - v[static_cast<std::size_t>(a)];
  }

  double entropy(int k, int l) const {
    if (l <= k) return range(h_p, 0, l) + range(h_q, l, k);
    return range(h_p, 0, k) + range(h_qhat, k, l);
  }
};

}  // namespace

EntropyRecord entropy_k(const Construction& c, const ProbAssignment& p, int k) {
  if (k < 1) throw Error(ErrorCode::domain_error, "k must be >= 1");
  const ScaleTable scales(c, k);
  const int l = scales.l(k);
  const EntropyTables tables(c, p, std::max(k, l));
  EntropyRecord rec;
  rec.k = k;
  rec.entropy = tables.entropy(k, l);
  rec.ratio = rec.entropy / scales.log_r(k);
  return rec;
}

double entropy_limit(const Construction& c, const ProbAssignment& p) {
  const PeriodProfile prof = period_profile(c);
  CompensatedSum hp, hq, hqhat;
  const int pre = static_cast<int>(c.preperiod().size());
  for (int idx = pre; idx < c.stored_count(); ++idx) {
    const LevelMeasure lm = level_measure(p.stored(idx), c.stored(idx));
    hp.add(lm.h_p);
    hq.add(lm.h_q);
    hqhat.add(lm.h_qhat);
  }
  switch (prof.orientation) {
    case Orientation::wide:
      return hp.value() / prof.log_n + hq.value() * (1.0 / prof.log_m - 1.0 / prof.log_n);
    case Orientation::tall:
      return hp.value() / prof.log_m + hqhat.value() * (1.0 / prof.log_n - 1.0 / prof.log_m);
    case Orientation::balanced:
      return hp.value() / prof.log_m;
  }
  return 0.0;
}

TailEstimate entropy_dimensions(const Construction& c, const ProbAssignment& p, int window) {
  // a window inside the preperiod is allowed: the tail extremes are reported
  if (window < 2) throw Error(ErrorCode::window_too_small, "window must be at least 2");
  const ScaleTable scales(c, window);
  const EntropyTables tables(c, p, std::max(window, scales.max_l()));
  std::vector<double> seq;
  seq.reserve(static_cast<std::size_t>(window));
  for (int k = 1; k <= window; ++k) {
    seq.push_back(tables.entropy(k, scales.l(k)) / scales.log_r(k));
  }
  return tail_estimate(c, std::move(seq), entropy_limit(c, p));
}

FscResult check_fsc(const Construction& c) {
  long centred = 0;
  for (const Level& lv : c.period()) {
    const bool inside = std::all_of(lv.digits.begin(), lv.digits.end(), [&](Digit d) {
      return d.i != 0 && d.i != lv.n - 1 && d.j != 0 && d.j != lv.m - 1;
    });
    centred += inside ? 1 : 0;
  }
  FscResult res;
  res.frequency = Rational(centred, static_cast<long>(c.period().size()));
  res.holds = res.frequency > 0;
  return res;
}

BscResult check_bsc(const Construction& c) {
  long left = 0, right = 0, bottom = 0, top = 0;
  for (const Level& lv : c.period()) {
    auto avoids = [&](auto&& pred) { return std::none_of(lv.digits.begin(), lv.digits.end(), pred); };
    left += avoids([](Digit d) { return d.i == 0; }) ? 1 : 0;
    right += avoids([&](Digit d) { return d.i == lv.n - 1; }) ? 1 : 0;
    bottom += avoids([](Digit d) { return d.j == 0; }) ? 1 : 0;
    top += avoids([&](Digit d) { return d.j == lv.m - 1; }) ? 1 : 0;
  }
  const auto per = static_cast<long>(c.period().size());
  BscResult res;
  res.left = Rational(left, per);
  res.right = Rational(right, per);
  res.bottom = Rational(bottom, per);
  res.top = Rational(top, per);
  res.holds = left > 0 && right > 0 && bottom > 0 && top > 0;
  return res;
}

MscResult check_msc(const Construction& c, const ProbAssignment& p) {
  MscResult res;
  res.max_boundary_marginal = 0;
  for (int idx = 0; idx < c.stored_count(); ++idx) {
    const Level& lv = c.stored(idx);
    const Marginals marg = marginals(p.stored(idx), lv);
    for (const Rational* x : {&lookup(marg.q, 0), &lookup(marg.q, lv.m - 1),
                              &lookup(marg.qhat, 0), &lookup(marg.qhat, lv.n - 1)}) {
      res.max_boundary_marginal = std::max(res.max_boundary_marginal, *x);
    }
  }
  res.holds = res.max_boundary_marginal < 1;
  return res;
}

ProbAssignment uniform_fiber_measure(const Construction& c) {
  for (int idx = 0; idx < c.stored_count(); ++idx) {
    const Level& lv = c.stored(idx);
    const DigitStats st = digit_stats(lv);
    if (st.r_minus != st.r_plus) {
      throw Error(ErrorCode::fiber_counts_not_constant,
                  level_name(idx) + ": occupied rows hold " + std::to_string(st.r_minus) +
                      " to " + std::to_string(st.r_plus) + " digits");
    }
    if (lv.n < lv.m) {
      throw Error(ErrorCode::aspect_order_violated,
                  level_name(idx) + ": n=" + std::to_string(lv.n) + " < m=" + std::to_string(lv.m));
    }
  }
  return ProbAssignment::uniform(c);
}

MeasureDimensions hausdorff_packing_dims(const Construction& c, const ProbAssignment& p,
                                         int window) {
  MeasureDimensions out;
  out.entropy = entropy_dimensions(c, p, window);
  out.hausdorff = out.entropy.lower;
  out.packing = out.entropy.upper;
  out.fsc = check_fsc(c);
  out.bsc = check_bsc(c);
  out.msc = check_msc(c, p);
  out.unconditional = out.fsc.holds || out.bsc.holds || out.msc.holds;
  try {
    out.set_dimension_path = uniform_fiber_measure(c) == p;
  } catch (const Error&) {
    out.set_dimension_path = false;
  }
  return out;
}

}  // namespace moran
