#include <doctest.h>

#include <cmath>

#include "corpus.hpp"
#include "moran/construction.hpp"
#include "moran/random.hpp"

using namespace moran;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::domain_error;
}

BigInt prod_m(const Construction& c, int k) {
  BigInt p = 1;
  for (int h = 1; h <= k; ++h) p *= c.level_at(h).m;
  return p;
}

BigInt prod_n(const Construction& c, int l) {
  BigInt p = 1;
  for (int h = 1; h <= l; ++h) p *= c.level_at(h).n;
  return p;
}

}  // namespace

TEST_CASE("validate accepts and sorts a valid level") {
  const Level lv = validate({3, 2, {{2, 0}, {1, 1}, {0, 0}}});
  CHECK(lv.digits == std::vector<Digit>{{0, 0}, {1, 1}, {2, 0}});
}

TEST_CASE("validate rejects bad levels") {
  CHECK(code_of([] { validate({3, 2, {{3, 0}, {1, 1}}}); }) == ErrorCode::out_of_range_digit);
  CHECK(code_of([] { validate({3, 2, {{0, 0}}}); }) == ErrorCode::too_few_digits);
  CHECK(code_of([] { validate({1, 2, {{0, 0}, {0, 1}}}); }) == ErrorCode::bad_base);
  CHECK(code_of([] { validate({3, 2, {{0, 0}, {0, 0}}}); }) == ErrorCode::duplicate_digit);
  CHECK(code_of([] { validate({3, 2, {{0, -1}, {0, 0}}}); }) == ErrorCode::out_of_range_digit);
  CHECK(code_of([] { Construction({corpus::alt_a()}, {}); }) == ErrorCode::empty_period);
}

TEST_CASE("construction errors name the offending level and digit") {
  try {
    Construction({}, {corpus::alt_b(), {3, 2, {{3, 0}, {1, 1}}}});
    FAIL("expected an error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("period level 2") != std::string::npos);
    CHECK(msg.find("(3,0)") != std::string::npos);
  }
}

TEST_CASE("level_at extends the period") {
  const Construction c = corpus::alt2();
  CHECK(c.level_at(1) == corpus::alt_a());
  CHECK(c.level_at(2) == corpus::alt_b());
  CHECK(c.level_at(3) == corpus::alt_c());
  CHECK(c.level_at(4) == corpus::alt_b());
  CHECK(c.level_at(1001) == corpus::alt_c());
  CHECK(corpus::bm().level_at(1'000'000) == corpus::bm().level_at(1));
  CHECK(code_of([&] { c.level_at(0); }) == ErrorCode::domain_error);
  for (int k = 2; k < 200; ++k) CHECK(c.level_at(k) == c.level_at(k + 2));
}

TEST_CASE("n_plus") {
  CHECK(n_plus(corpus::bm()) == 3);
  CHECK(n_plus(corpus::alt2()) == 4);
}

TEST_CASE("k_of_delta examples") {
  const Construction c = corpus::bm();
  CHECK(k_of_delta(c, 0.3) == 2);
  CHECK(k_of_delta(c, 0.5) == 1);
  CHECK(k_of_delta(c, std::ldexp(1.0, -10)) == 10);
  CHECK(k_of_delta(c, 0.9) == 1);
  CHECK(code_of([&] { k_of_delta(c, 0.0); }) == ErrorCode::domain_error);
  CHECK(code_of([&] { k_of_delta(c, 1.0); }) == ErrorCode::domain_error);
}

TEST_CASE("k_of_delta is left-closed at every product, exactly") {
  for (const auto& [name, c] : corpus::all()) {
    CAPTURE(name);
    for (int k = 1; k <= 64; ++k) {
      const Rational at(BigInt(1), prod_m(c, k));
      CHECK(k_of_delta(c, at) == k);
      const Rational eps(BigInt(1), prod_m(c, k) * 1000);
      CHECK(k_of_delta(c, at + eps) == k);
      CHECK(k_of_delta(c, at - eps) == k + 1);
    }
  }
}

TEST_CASE("l_of_k examples") {
  CHECK(l_of_k(corpus::bm(), 2).l == 2);
  CHECK(l_of_k(corpus::bm(), 5).l == 4);
  CHECK(l_of_k(corpus::tall(), 2).l == 4);
  CHECK(l_of_k(corpus::full(), 7).l == 7);
}

TEST_CASE("l(k) brackets the vertical scale with exact products") {
  for (const auto& [name, c] : corpus::all()) {
    CAPTURE(name);
    const ScaleTable t(c, 64);
    for (int k = 1; k <= 64; ++k) {
      const int l = t.l(k);
      CHECK(prod_n(c, l) >= prod_m(c, k));
      if (l > 0) CHECK(prod_n(c, l - 1) < prod_m(c, k));
      CHECK(l_of_k(c, k).l == l);
      if (k < 64) {
        CHECK(t.log_r(k) < t.log_r(k + 1));
        CHECK(t.l(k) <= t.l(k + 1));
      }
    }
  }
}

TEST_CASE("deep scale tables agree with exact products at the boundaries") {
  // balanced periods make n- and m-products tie exactly at every period end
  const Construction c({corpus::alt_a()}, {{2, 3, {{0, 0}, {1, 1}}}, {3, 2, {{0, 0}, {2, 1}}}});
  const ScaleTable t(c, 600);
  for (int k : {99, 100, 101, 300, 301, 599, 600}) {
    CAPTURE(k);
    const int l = t.l(k);
    CHECK(prod_n(c, l) >= prod_m(c, k));
    CHECK(prod_n(c, l - 1) < prod_m(c, k));
  }
}

TEST_CASE("random constructions are valid and reproducible") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Construction a = random_construction(seed);
    const Construction b = random_construction(seed);
    CHECK(a.stored_count() == b.stored_count());
    for (int idx = 0; idx < a.stored_count(); ++idx) CHECK(a.stored(idx) == b.stored(idx));
    CHECK(a.period().size() >= 1);
    CHECK(a.period().size() <= 3);
    for (int idx = 0; idx < a.stored_count(); ++idx) {
      const Level& lv = a.stored(idx);
      CHECK(lv.n >= 2);
      CHECK(lv.n <= 5);
      CHECK(lv.m <= 5);
      CHECK(lv.digits.size() >= 2);
    }
  }
}

TEST_CASE("SplitMix64 streams depend only on seed and index") {
  auto a = SplitMix64::split(42, 7);
  auto b = SplitMix64::split(42, 7);
  auto other = SplitMix64::split(42, 8);
  const auto x = a.next();
  CHECK(x == b.next());
  CHECK(x != other.next());
  SplitMix64 g(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = g.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("compensated sum") {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 10; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-15).epsilon(1e-6));
}
