#include "moran/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "moran/random.hpp"

namespace moran::oracle {

namespace {

constexpr char kSep = '\xff';

void require_small_digits(const Construction& c) {
  for (int idx = 0; idx < c.stored_count(); ++idx) {
    const Level& lv = c.stored(idx);
    if (lv.n > 255 || lv.m > 255) {
      throw Error(ErrorCode::domain_error, "oracle enumeration supports bases up to 255");
    }
  }
}

// Independent of ScaleTable: plain exact products.
int exact_l(const Construction& c, int k) {
  BigInt r = 1;
  for (int h = 1; h <= k; ++h) r *= c.level_at(h).m;
  BigInt n = 1;
  int l = 0;
  while (n < r) {
    ++l;
    n *= c.level_at(l).n;
  }
  return l;
}

void guard_check(std::uint64_t work, std::uint64_t guard, const char* what) {
  if (work > guard) {
    throw Error(ErrorCode::guard_exceeded, std::string(what) + " needs " + std::to_string(work) +
                                               " steps, above the guard of " +
                                               std::to_string(guard));
  }
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

struct State {
  std::string is;
  std::string js;
  Rational mass;
};

std::string key_of(const State& s) { return s.is + kSep + s.js; }

// Distinct projections (i_1..i_l, j_1..j_k) of all words of length
// max(k, l), merging words level by level. Masses are summed cylinder
// masses when p is given.
std::vector<State> project_words(const Construction& c, int k, int l, const ProbAssignment* p,
                                 std::uint64_t guard) {
  require_small_digits(c);
  std::vector<State> states{{"", "", Rational(1)}};
  const int depth = std::max(k, l);
  for (int h = 1; h <= depth; ++h) {
    const Level& lv = c.level_at(h);
    guard_check(saturating_mul(states.size(), lv.digits.size()), guard, "approximate-square census");
    std::unordered_map<std::string, std::size_t> index;
    std::vector<State> next;
    for (const State& st : states) {
      for (std::size_t idx = 0; idx < lv.digits.size(); ++idx) {
        State child{st.is, st.js, Rational(0)};
        if (h <= l) child.is.push_back(static_cast<char>(lv.digits[idx].i));
        if (h <= k) child.js.push_back(static_cast<char>(lv.digits[idx].j));
        auto [it, fresh] = index.try_emplace(key_of(child), next.size());
        if (fresh) next.push_back(std::move(child));
        if (p != nullptr) next[it->second].mass += st.mass * p->at(c, h)[idx];
      }
    }
    states = std::move(next);
  }
  return states;
}

ApproxSquare to_square(const State& st, int k, int l) {
  ApproxSquare sq{k, l, {}, {}};
  for (char ch : st.is) sq.i_prefix.push_back(static_cast<unsigned char>(ch));
  for (char ch : st.js) sq.j_prefix.push_back(static_cast<unsigned char>(ch));
  return sq;
}

double neg_xlogx(const Rational& x) {
  if (x == 0) return 0.0;
  const double lx = std::log(static_cast<double>(boost::multiprecision::numerator(x))) -
                    std::log(static_cast<double>(boost::multiprecision::denominator(x)));
  return -static_cast<double>(x) * lx;
}

template <class Int>
Int mixed_radix(const std::vector<int>& digits, const Construction& c, bool horizontal) {
  Int v = 0;
  for (std::size_t h = 0; h < digits.size(); ++h) {
    const Level& lv = c.level_at(static_cast<int>(h) + 1);
    v = v * (horizontal ? lv.n : lv.m) + digits[h];
  }
  return v;
}

}  // namespace

void for_each_rect(const Construction& c, int k, const std::function<void(const Rect&)>& fn,
                   std::uint64_t guard) {
  if (k < 0) throw Error(ErrorCode::domain_error, "k must be >= 0");
  std::uint64_t words = 1;
  BigInt den_x = 1, den_y = 1;
  for (int h = 1; h <= k; ++h) {
    words = saturating_mul(words, c.level_at(h).digits.size());
    den_x *= c.level_at(h).n;
    den_y *= c.level_at(h).m;
  }
  guard_check(words, guard, "rectangle enumeration");
  const Rational width(BigInt(1), den_x);
  const Rational height(BigInt(1), den_y);
  auto recurse = [&](auto&& self, int h, const BigInt& x, const BigInt& y) -> void {
    if (h > k) {
      fn(Rect{Rational(x, den_x), Rational(y, den_y), width, height});
      return;
    }
    const Level& lv = c.level_at(h);
    for (const Digit& d : lv.digits) self(self, h + 1, x * lv.n + d.i, y * lv.m + d.j);
  };
  recurse(recurse, 1, BigInt(0), BigInt(0));
}

std::vector<Rect> enumerate_rects(const Construction& c, int k, std::uint64_t guard) {
  std::vector<Rect> out;
  for_each_rect(c, k, [&](const Rect& r) { out.push_back(r); }, guard);
  return out;
}

std::uint64_t box_count(const Construction& c, int k_geom, const Rational& delta,
                        std::uint64_t guard) {
  if (delta <= 0 || delta >= 1) throw Error(ErrorCode::domain_error, "delta must lie in (0,1)");
  if (k_geom < 0) throw Error(ErrorCode::domain_error, "k_geom must be >= 0");
  const BigInt dn = boost::multiprecision::numerator(delta);
  const BigInt dd = boost::multiprecision::denominator(delta);
  const BigInt cells_big = (dd + dn - 1) / dn;  // ceil(1/delta) cells per axis
  guard_check(cells_big > BigInt(guard) ? guard + 1 : static_cast<std::uint64_t>(cells_big), guard,
              "box grid");
  const auto cells = static_cast<std::uint64_t>(cells_big);

  std::uint64_t words = 1;
  BigInt den_x = 1, den_y = 1;
  for (int h = 1; h <= k_geom; ++h) {
    words = saturating_mul(words, c.level_at(h).digits.size());
    den_x *= c.level_at(h).n;
    den_y *= c.level_at(h).m;
  }
  guard_check(words, guard, "box count");
  const BigInt scale_x = den_x * dn;
  const BigInt scale_y = den_y * dn;

  const bool dense = cells <= 8192;
  std::vector<bool> grid(dense ? cells * cells : 0, false);
  std::unordered_set<std::uint64_t> sparse;
  std::uint64_t count = 0;
  auto mark = [&](std::uint64_t a, std::uint64_t b) {
    const std::uint64_t key = a * cells + b;
    if (dense) {
      if (!grid[key]) {
        grid[key] = true;
        ++count;
      }
    } else if (sparse.insert(key).second) {
      ++count;
    }
  };
  // cells a with a*delta < (x+1)/den and (a+1)*delta > x/den
  auto cell_range = [&](const BigInt& x, const BigInt& scale) {
    const BigInt lo = (x * dd) / scale;
    BigInt hi = ((x + 1) * dd + scale - 1) / scale - 1;
    if (hi > cells - 1) hi = cells - 1;
    return std::pair{static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi)};
  };
  auto recurse = [&](auto&& self, int h, const BigInt& x, const BigInt& y) -> void {
    if (h > k_geom) {
      const auto [a0, a1] = cell_range(x, scale_x);
      const auto [b0, b1] = cell_range(y, scale_y);
      for (auto a = a0; a <= a1; ++a) {
        for (auto b = b0; b <= b1; ++b) mark(a, b);
      }
      return;
    }
    const Level& lv = c.level_at(h);
    for (const Digit& d : lv.digits) self(self, h + 1, x * lv.n + d.i, y * lv.m + d.j);
  };
  recurse(recurse, 1, BigInt(0), BigInt(0));
  return count;
}

BigInt census_approx_squares(const Construction& c, int k, std::uint64_t guard) {
  if (k < 1) throw Error(ErrorCode::domain_error, "k must be >= 1");
  return BigInt(project_words(c, k, exact_l(c, k), nullptr, guard).size());
}

namespace {

GammaCensus gamma_from(const std::vector<State>& children, const std::vector<State>& parents,
                       int k, int l) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const State& p : parents) counts.emplace(key_of(p), 0);
  for (const State& ch : children) {
    const State prefix{ch.is.substr(0, static_cast<std::size_t>(l)),
                       ch.js.substr(0, static_cast<std::size_t>(k)), Rational(0)};
    ++counts[key_of(prefix)];
  }
  std::uint64_t lo = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t hi = 0;
  for (const auto& [key, n] : counts) {
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  return {BigInt(lo), BigInt(hi)};
}

}  // namespace

GammaCensus gamma_census(const Construction& c, int k, int k2, std::uint64_t guard) {
  if (k < 1 || k >= k2) throw Error(ErrorCode::bad_range, "gamma census needs 1 <= k < k2");
  const int l = exact_l(c, k);
  const auto children = project_words(c, k2, exact_l(c, k2), nullptr, guard);
  const auto parents = project_words(c, k, l, nullptr, guard);
  return gamma_from(children, parents, k, l);
}

Rational brute_measure(const Construction& c, const ProbAssignment& p, const ApproxSquare& sq,
                       std::uint64_t guard) {
  if (sq.k < 1) throw Error(ErrorCode::invalid_square, "square depth must be >= 1");
  const int l = exact_l(c, sq.k);
  if (sq.l != l || static_cast<int>(sq.i_prefix.size()) != l ||
      static_cast<int>(sq.j_prefix.size()) != sq.k) {
    throw Error(ErrorCode::invalid_square, "constraint tuple does not match depth");
  }
  const int depth = std::max(sq.k, l);
  std::uint64_t visited = 0;
  Rational total = 0;
  std::vector<Digit> word;
  auto recurse = [&](auto&& self, int h) -> void {
    if (h > depth) {
      total += cylinder_mass(c, p, word);
      return;
    }
    const Level& lv = c.level_at(h);
    for (const Digit& d : lv.digits) {
      const auto at = static_cast<std::size_t>(h - 1);
      if (h <= l && d.i != sq.i_prefix[at]) continue;
      if (h <= sq.k && d.j != sq.j_prefix[at]) continue;
      guard_check(++visited, guard, "brute measure");
      word.push_back(d);
      self(self, h + 1);
      word.pop_back();
    }
  };
  recurse(recurse, 1);
  return total;
}

std::vector<std::pair<ApproxSquare, Rational>> brute_square_masses(const Construction& c,
                                                                   const ProbAssignment& p, int k,
                                                                   std::uint64_t guard) {
  if (k < 1) throw Error(ErrorCode::domain_error, "k must be >= 1");
  const int l = exact_l(c, k);
  auto states = project_words(c, k, l, &p, guard);
  std::vector<std::pair<ApproxSquare, Rational>> out;
  out.reserve(states.size());
  for (State& st : states) out.emplace_back(to_square(st, k, l), std::move(st.mass));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

double brute_entropy(const Construction& c, const ProbAssignment& p, int k, std::uint64_t guard) {
  CompensatedSum acc;
  for (const auto& [sq, mass] : brute_square_masses(c, p, k, guard)) acc.add(neg_xlogx(mass));
  return acc.value();
}

DyadicEntropy dyadic_entropy(const Construction& c, const ProbAssignment& p, int n,
                             std::uint64_t guard) {
  if (n < 1 || n > 30) throw Error(ErrorCode::domain_error, "dyadic level must be in [1, 30]");
  DyadicEntropy out;
  BigInt two_n = 1;
  two_n <<= n;
  out.k = k_of_delta(c, Rational(BigInt(1), two_n));
  out.depth = out.k + 2;
  const auto squares = enumerate_squares(c, p, out.depth, guard);

  BigInt den_x = 1, den_y = 1;
  const int l = squares.empty() ? 0 : squares.front().first.l;
  for (int h = 1; h <= l; ++h) den_x *= c.level_at(h).n;
  for (int h = 1; h <= out.depth; ++h) den_y *= c.level_at(h).m;

  const auto side = static_cast<std::uint64_t>(1) << n;
  std::unordered_map<std::uint64_t, double> cells;
  CompensatedSum straddle;
  for (const auto& [sq, mass] : squares) {
    if (mass == 0) continue;
    const BigInt x = mixed_radix<BigInt>(sq.i_prefix, c, true);
    const BigInt y = mixed_radix<BigInt>(sq.j_prefix, c, false);
    const auto centre_x = static_cast<std::uint64_t>(((2 * x + 1) * two_n) / (2 * den_x));
    const auto centre_y = static_cast<std::uint64_t>(((2 * y + 1) * two_n) / (2 * den_y));
    const BigInt x_lo = (x * two_n) / den_x;
    const BigInt x_hi = ((x + 1) * two_n + den_x - 1) / den_x - 1;
    const BigInt y_lo = (y * two_n) / den_y;
    const BigInt y_hi = ((y + 1) * two_n + den_y - 1) / den_y - 1;
    const double m = static_cast<double>(mass);
    if (x_lo != x_hi || y_lo != y_hi) straddle.add(m);
    cells[centre_x * side + centre_y] += m;
  }
  std::vector<std::pair<std::uint64_t, double>> ordered(cells.begin(), cells.end());
  std::sort(ordered.begin(), ordered.end());
  CompensatedSum acc;
  for (const auto& [key, m] : ordered) {
    if (m > 0) acc.add(-m * std::log(m));
  }
  out.entropy = acc.value();
  out.straddle_mass = straddle.value();
  return out;
}

std::vector<LocalDimSample> local_dim_samples(const Construction& c, const ProbAssignment& p,
                                              std::uint64_t seed, int count, int k_max) {
  if (count < 0 || k_max < 1) throw Error(ErrorCode::domain_error, "need count >= 0, k_max >= 1");
  std::vector<int> ls(static_cast<std::size_t>(k_max) + 1, 0);
  std::vector<double> log_r(static_cast<std::size_t>(k_max) + 1, 0.0);
  {
    BigInt r = 1, nprod = 1;
    int l = 0;
    CompensatedSum acc;
    for (int k = 1; k <= k_max; ++k) {
      r *= c.level_at(k).m;
      acc.add(std::log(static_cast<double>(c.level_at(k).m)));
      log_r[static_cast<std::size_t>(k)] = acc.value();
      while (nprod < r) nprod *= c.level_at(++l).n;
      ls[static_cast<std::size_t>(k)] = l;
    }
  }
  const int depth = std::max(k_max, ls.back());

  // per stored level: cumulative probabilities and log p / log q / log qhat per digit
  struct LevelLogs {
    std::vector<double> cumulative;
    std::vector<double> log_p, log_q, log_qhat;
  };
  std::vector<LevelLogs> logs;
  for (int idx = 0; idx < c.stored_count(); ++idx) {
    const Level& lv = c.stored(idx);
    const auto probs = p.stored(idx);
    const Marginals marg = marginals(probs, lv);
    LevelLogs ll;
    double cum = 0.0;
    for (std::size_t d = 0; d < lv.digits.size(); ++d) {
      cum += static_cast<double>(probs[d]);
      ll.cumulative.push_back(cum);
      ll.log_p.push_back(std::log(static_cast<double>(probs[d])));
      ll.log_q.push_back(std::log(static_cast<double>(marg.q.at(lv.digits[d].j))));
      ll.log_qhat.push_back(std::log(static_cast<double>(marg.qhat.at(lv.digits[d].i))));
    }
    logs.push_back(std::move(ll));
  }

  std::vector<LocalDimSample> out;
  for (int s = 0; s < count; ++s) {
    SplitMix64 rng = SplitMix64::split(seed, static_cast<std::uint64_t>(s));
    LocalDimSample sample;
    std::vector<double> lp{0.0}, lq{0.0}, lqh{0.0};
    for (int h = 1; h <= depth; ++h) {
      const int idx = c.stored_index(h);
      const LevelLogs& ll = logs[static_cast<std::size_t>(idx)];
      const double u = rng.uniform01() * ll.cumulative.back();
      auto it = std::upper_bound(ll.cumulative.begin(), ll.cumulative.end(), u);
      if (it == ll.cumulative.end()) --it;
      const auto d = static_cast<std::size_t>(it - ll.cumulative.begin());
      sample.word.push_back(c.stored(idx).digits[d]);
      lp.push_back(lp.back() + ll.log_p[d]);
      lq.push_back(lq.back() + ll.log_q[d]);
      lqh.push_back(lqh.back() + ll.log_qhat[d]);
    }
    for (int k = 1; k <= k_max; ++k) {
      const int l = ls[static_cast<std::size_t>(k)];
      const auto K = static_cast<std::size_t>(k);
      const auto L = static_cast<std::size_t>(l);
      const double log_mass = l <= k ? lp[L] + (lq[K] - lq[L]) : lp[K] + (lqh[L] - lqh[K]);
      sample.ratios.push_back(log_mass == 0.0 ? 0.0 : -log_mass / log_r[K]);
    }
    out.push_back(std::move(sample));
  }
  return out;
}

// ---- verification harness -------------------------------------------------

namespace {

std::string describe(const BigInt& v) { return v.str(); }

}  // namespace

CheckResult check_census(const Construction& c, const VerifyOptions& opt) {
  CheckResult res{"census", true, 0, ""};
  for (int k = 1; k <= opt.max_depth; ++k) {
    const BigInt brute = census_approx_squares(c, k, opt.guard);
    const LogCount formula = count_approx_squares(c, k);
    ++res.comparisons;
    if (!formula.exact || *formula.exact != brute) {
      res.passed = false;
      res.detail = "k=" + std::to_string(k) + ": census " + describe(brute) + " vs formula " +
                   (formula.exact ? describe(*formula.exact) : std::string("inexact"));
      return res;
    }
  }
  return res;
}

CheckResult check_gamma(const Construction& c, const VerifyOptions& opt) {
  CheckResult res{"gamma", true, 0, ""};
  std::vector<std::vector<State>> by_depth(static_cast<std::size_t>(opt.pairs_depth) + 1);
  std::vector<int> ls(static_cast<std::size_t>(opt.pairs_depth) + 1, 0);
  for (int k = 1; k <= opt.pairs_depth; ++k) {
    ls[static_cast<std::size_t>(k)] = exact_l(c, k);
    by_depth[static_cast<std::size_t>(k)] =
        project_words(c, k, ls[static_cast<std::size_t>(k)], nullptr, opt.guard);
  }
  for (int k2 = 2; k2 <= opt.pairs_depth; ++k2) {
    for (int k = 1; k < k2; ++k) {
      const int l = ls[static_cast<std::size_t>(k)];
      const int l2 = ls[static_cast<std::size_t>(k2)];
      const GammaCensus census =
          gamma_from(by_depth[static_cast<std::size_t>(k2)], by_depth[static_cast<std::size_t>(k)], k, l);
      const LogCount lo = opt.nested(c, k, k2, Bound::minus);
      const LogCount hi = opt.nested(c, k, k2, Bound::plus);
      ++res.comparisons;
      if (!lo.exact || !hi.exact || *lo.exact != census.min || *hi.exact != census.max) {
        std::ostringstream msg;
        msg << "k=" << k << " k2=" << k2 << " case=" << static_cast<int>(classify(k, k2, l, l2))
            << ": census (" << census.min << "," << census.max << ") vs formula ("
            << (lo.exact ? describe(*lo.exact) : "?") << "," << (hi.exact ? describe(*hi.exact) : "?")
            << ")";
        res.passed = false;
        res.detail = msg.str();
        return res;
      }
    }
  }
  return res;
}

CheckResult check_measure(const Construction& c, const ProbAssignment& p, const VerifyOptions& opt) {
  CheckResult res{"measure", true, 0, ""};
  for (int k = 1; k <= opt.max_depth; ++k) {
    const auto brute = brute_square_masses(c, p, k, opt.guard);
    const auto formula = enumerate_squares(c, p, k, opt.guard);
    Rational total = 0;
    if (brute.size() != formula.size()) {
      res.passed = false;
      res.detail = "k=" + std::to_string(k) + ": " + std::to_string(brute.size()) +
                   " brute squares vs " + std::to_string(formula.size());
      return res;
    }
    for (std::size_t idx = 0; idx < brute.size(); ++idx) {
      ++res.comparisons;
      total += formula[idx].second;
      if (brute[idx].first != formula[idx].first || brute[idx].second != formula[idx].second) {
        res.passed = false;
        res.detail = "k=" + std::to_string(k) + " square " + std::to_string(idx) + ": brute " +
                     brute[idx].second.str() + " vs formula " + formula[idx].second.str();
        return res;
      }
    }
    if (total != 1) {
      res.passed = false;
      res.detail = "k=" + std::to_string(k) + ": masses sum to " + total.str();
      return res;
    }
  }
  return res;
}

CheckResult check_entropy(const Construction& c, const ProbAssignment& p, const VerifyOptions& opt) {
  CheckResult res{"entropy", true, 0, ""};
  for (int k = 1; k <= opt.max_depth; ++k) {
    const double brute = brute_entropy(c, p, k, opt.guard);
    const double formula = entropy_k(c, p, k).entropy;
    ++res.comparisons;
    if (std::abs(brute - formula) > 1e-12) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "k=" << k << ": brute " << brute << " vs formula " << formula;
      res.passed = false;
      res.detail = msg.str();
      return res;
    }
  }
  return res;
}

CheckResult check_superadditivity(const Construction& c, const VerifyOptions& opt) {
  CheckResult res{"superadditivity", true, 0, ""};
  const int top = std::max(opt.max_depth, opt.pairs_depth);
  for (int k = 1; k <= top; ++k) {
    for (int k1 = k + 1; k1 <= top; ++k1) {
      for (int k2 = k1 + 1; k2 <= top; ++k2) {
        const auto whole = opt.nested(c, k, k2, Bound::minus).exact;
        const auto left = opt.nested(c, k, k1, Bound::minus).exact;
        const auto right = opt.nested(c, k1, k2, Bound::minus).exact;
        ++res.comparisons;
        if (!whole || !left || !right || *whole < *left * *right) {
          res.passed = false;
          res.detail = "k=" + std::to_string(k) + " k'=" + std::to_string(k1) +
                       " k''=" + std::to_string(k2) + " violates N-(k,k'') >= N-(k,k') N-(k',k'')";
          return res;
        }
      }
    }
  }
  return res;
}

std::vector<CheckResult> verify(const Construction& c, const ProbAssignment& p,
                                const VerifyOptions& opt) {
  return {check_census(c, opt), check_gamma(c, opt), check_measure(c, p, opt),
          check_entropy(c, p, opt), check_superadditivity(c, opt)};
}

}  // namespace moran::oracle
