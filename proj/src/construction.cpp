#include "moran/construction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "moran/random.hpp"

namespace moran {

Level validate(Level level) {
  if (level.n < 2 || level.m < 2) {
    std::ostringstream msg;
    msg << "bases must be at least 2, got n=" << level.n << " m=" << level.m;
    throw Error(ErrorCode::bad_base, msg.str());
  }
  for (const Digit& d : level.digits) {
    if (d.i < 0 || d.i >= level.n || d.j < 0 || d.j >= level.m) {
      std::ostringstream msg;
      msg << "digit (" << d.i << "," << d.j << ") outside the " << level.n << "x"
          << level.m << " grid";
      throw Error(ErrorCode::out_of_range_digit, msg.str());
    }
  }
  std::sort(level.digits.begin(), level.digits.end());
  auto dup = std::adjacent_find(level.digits.begin(), level.digits.end());
  if (dup != level.digits.end()) {
    std::ostringstream msg;
    msg << "digit (" << dup->i << "," << dup->j << ") listed twice";
    throw Error(ErrorCode::duplicate_digit, msg.str());
  }
  if (level.digits.size() < 2) {
    throw Error(ErrorCode::too_few_digits,
                "a level needs at least 2 digits, got " +
                    std::to_string(level.digits.size()));
  }
  return level;
}

namespace {

std::vector<Level> validate_all(std::vector<Level> levels, const char* where) {
  for (std::size_t idx = 0; idx < levels.size(); ++idx) {
    try {
      levels[idx] = validate(std::move(levels[idx]));
    } catch (const Error& e) {
      throw Error(e.code(), std::string(where) + " level " +
                                std::to_string(idx + 1) + ": " + e.what());
    }
  }
  return levels;
}

}  // namespace

Construction::Construction(std::vector<Level> preperiod, std::vector<Level> period)
    : preperiod_(validate_all(std::move(preperiod), "preperiod")),
      period_(validate_all(std::move(period), "period")) {
  if (period_.empty()) {
    throw Error(ErrorCode::empty_period, "the period must contain at least one level");
  }
}

Construction Construction::constant(Level level) {
  return Construction({}, {std::move(level)});
}

int Construction::stored_index(int k) const {
  if (k < 1) {
    throw Error(ErrorCode::domain_error, "level index must be >= 1, got " + std::to_string(k));
  }
  const auto pre = static_cast<long long>(preperiod_.size());
  if (k <= pre) return k - 1;
  const auto per = static_cast<long long>(period_.size());
  return static_cast<int>(pre + (k - pre - 1) % per);
}

const Level& Construction::stored(int index) const {
  const auto pre = static_cast<int>(preperiod_.size());
  if (index < pre) return preperiod_.at(static_cast<std::size_t>(index));
  return period_.at(static_cast<std::size_t>(index - pre));
}

const Level& Construction::level_at(int k) const { return stored(stored_index(k)); }

int n_plus(const Construction& c) {
  int best = 0;
  for (int idx = 0; idx < c.stored_count(); ++idx) {
    const Level& lv = c.stored(idx);
    best = std::max({best, lv.n, lv.m});
  }
  return best;
}

int k_of_delta(const Construction& c, const Rational& delta) {
  if (delta <= 0 || delta >= 1) {
    throw Error(ErrorCode::domain_error, "delta must lie in (0,1)");
  }
  const BigInt num = boost::multiprecision::numerator(delta);
  const BigInt den = boost::multiprecision::denominator(delta);
  // smallest k with delta * m_1...m_k >= 1
  BigInt prod = 1;
  for (int k = 1;; ++k) {
    prod *= c.level_at(k).m;
    if (prod * num >= den) return k;
  }
}

int k_of_delta(const Construction& c, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::domain_error, "delta must lie in (0,1)");
  }
  int exponent = 0;
  const double mantissa = std::frexp(delta, &exponent);
  // delta = mantissa * 2^exponent with mantissa in [0.5, 1); scale to an integer
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  BigInt den = 1;
  den <<= (53 - exponent);
  return k_of_delta(c, Rational(BigInt(scaled), den));
}

ScalePair l_of_k(const Construction& c, int k) {
  if (k < 1) throw Error(ErrorCode::domain_error, "k must be >= 1");
  return ScaleTable(c, k).pair(k);
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

namespace {

constexpr int kExactDepth = 64;
constexpr double kEscalate = 1e-9;

class ExactProducts {
 public:
  explicit ExactProducts(const Construction& c, bool horizontal)
      : c_(c), horizontal_(horizontal) {}

  const BigInt& at(int depth) {
    while (static_cast<int>(prod_.size()) <= depth) {
      const int next = static_cast<int>(prod_.size());
      const Level& lv = c_.level_at(next);
      prod_.push_back(prod_.back() * (horizontal_ ? lv.n : lv.m));
    }
    return prod_[static_cast<std::size_t>(depth)];
  }

 private:
  const Construction& c_;
  bool horizontal_;
  std::vector<BigInt> prod_{BigInt(1)};
};

}  // namespace

ScaleTable::ScaleTable(const Construction& c, int max_k) {
  if (max_k < 0) throw Error(ErrorCode::domain_error, "max_k must be >= 0");
  log_r_.reserve(static_cast<std::size_t>(max_k) + 1);
  log_r_.push_back(0.0);
  CompensatedSum acc_r;
  for (int k = 1; k <= max_k; ++k) {
    acc_r.add(std::log(static_cast<double>(c.level_at(k).m)));
    log_r_.push_back(acc_r.value());
  }

  ExactProducts exact_n(c, true);
  ExactProducts exact_m(c, false);
  CompensatedSum acc_n;
  log_n_.push_back(0.0);
  auto extend_n = [&](int l) {
    while (static_cast<int>(log_n_.size()) <= l) {
      acc_n.add(std::log(static_cast<double>(c.level_at(static_cast<int>(log_n_.size())).n)));
      log_n_.push_back(acc_n.value());
    }
  };
  // sign of n_1...n_l - m_1...m_k
  auto compare = [&](int l, int k) -> int {
    extend_n(l);
    if (l > kExactDepth || k > kExactDepth) {
      const double diff = log_n_[static_cast<std::size_t>(l)] - log_r_[static_cast<std::size_t>(k)];
      if (diff > kEscalate) return 1;
      if (diff < -kEscalate) return -1;
    }
    const BigInt& a = exact_n.at(l);
    const BigInt& b = exact_m.at(k);
    return a < b ? -1 : (a > b ? 1 : 0);
  };

  l_.reserve(static_cast<std::size_t>(max_k) + 1);
  l_.push_back(0);
  int l = 0;
  for (int k = 1; k <= max_k; ++k) {
    while (compare(l, k) < 0) ++l;
    l_.push_back(l);
  }
}

Construction random_construction(std::uint64_t seed, const RandomConstructionParams& params) {
  SplitMix64 rng(seed);
  auto random_level = [&]() {
    Level lv;
    lv.n = static_cast<int>(rng.uniform_int(params.min_base, params.max_base));
    lv.m = static_cast<int>(rng.uniform_int(params.min_base, params.max_base));
    std::vector<Digit> cells;
    for (int i = 0; i < lv.n; ++i) {
      for (int j = 0; j < lv.m; ++j) cells.push_back({i, j});
    }
    for (std::size_t idx = cells.size() - 1; idx > 0; --idx) {
      const auto other = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(idx)));
      std::swap(cells[idx], cells[other]);
    }
    const auto count = static_cast<std::size_t>(
        rng.uniform_int(2, static_cast<std::int64_t>(cells.size())));
    lv.digits.assign(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(count));
    return lv;
  };
  const auto pre = rng.uniform_int(0, params.max_preperiod);
  const auto per = rng.uniform_int(1, params.max_period);
  std::vector<Level> preperiod;
  std::vector<Level> period;
  for (std::int64_t t = 0; t < pre; ++t) preperiod.push_back(random_level());
  for (std::int64_t t = 0; t < per; ++t) period.push_back(random_level());
  return Construction(std::move(preperiod), std::move(period));
}

}  // namespace moran
