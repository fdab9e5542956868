#include <cmath>
#include <map>
#include <random>

#include "arboreal/heights.hpp"
#include "arboreal/integer_factor.hpp"
#include "doctest.h"

using namespace arboreal;

namespace {

Rational random_rational(std::mt19937_64& rng, long num_bound, long den_bound) {
  const long n = static_cast<long>(rng() % (2 * num_bound + 1)) - num_bound;
  const long d = static_cast<long>(rng() % den_bound) + 1;
  return make_rational(Integer(n), Integer(d));
}

std::map<long, long> trial_factor(long n) {
  std::map<long, long> out;
  n = std::labs(n);
  for (long p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  if (n > 1) ++out[n];
  return out;
}

const std::vector<std::string> kGrid = {"x^3 - 12*x + 2", "x^3 - 3*x + 3", "x^3 - 3*x + 1", "x^3 - 3/4*x + 1/5",
                                        "x^3 - 27*x + 1/9", "x^3 + 2", "x^2 - 2", "x^2 + 1/3", "2*x^3 - x + 7/2"};

}  // namespace

TEST_CASE("weil_height") {
  CHECK(weil_height(Rational(3, 2)) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
  CHECK(weil_height(-14) == doctest::Approx(std::log(14.0)).epsilon(1e-15));
  CHECK(weil_height(0) == 0.0);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const Rational x = random_rational(rng, 1000, 1000), y = random_rational(rng, 1000, 1000);
    CHECK(weil_height(x * y) <= weil_height(x) + weil_height(y) + 1e-12);
  }
}

TEST_CASE("transform_bound is sound on samples") {
  std::mt19937_64 rng(17);
  for (const char* m : {"x^3 - 12*x + 2", "x^2 - 2", "x^3", "x^3 - 3/4*x + 1/5", "2*x^3 - x + 7/2"}) {
    const PolyMap f(parse_poly(m));
    const TransformBound tb = transform_bound(f);
    CHECK(tb.C0 >= 0);
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
      const Rational x = random_rational(rng, 100000, 100000);
      worst = std::max(worst, std::fabs(weil_height(f(x)) - f.degree() * weil_height(x)));
    }
    INFO(m);
    CHECK(worst <= tb.C0);
  }
  CHECK(transform_bound(PolyMap(parse_poly("x^3 - 12*x + 2"))).C0 <= 10);
}

TEST_CASE("canonical_height examples") {
  auto h = canonical_height(CubicMap{1, 3}, 1, 1e-6);
  CHECK(h.preperiodic);
  CHECK(h.value == 0.0);
  auto p = canonical_height(PolyMap(parse_poly("x^3")), 2, 1e-9);
  CHECK(std::fabs(p.value - std::log(2.0)) <= 1e-9);
  const CubicMap f{2, 2};
  auto h2 = canonical_height(f, 2, 1e-6);
  auto h14 = canonical_height(f, -14, 1e-6);
  CHECK(h2.value > 0);
  CHECK(std::fabs(h14.value - 3 * h2.value) <= 8e-6);
  CHECK(h2.error_bound <= 1e-6);
}

TEST_CASE("canonical_height functional equation") {
  std::mt19937_64 rng(12345);
  for (const auto& m : kGrid) {
    const PolyMap f(parse_poly(m));
    const double eps = 1e-7;
    for (int i = 0; i < 100; ++i) {
      const Rational x = random_rational(rng, 40, 12);
      const HeightValue hx = canonical_height(f, x, eps);
      const HeightValue hf = canonical_height(f, f(x), eps);
      INFO(m, " at ", to_string(x));
      CHECK(hx.error_bound <= eps);
      CHECK(std::fabs(hf.value - f.degree() * hx.value) <= 2 * eps * f.degree() + 2 * eps);
    }
  }
}

TEST_CASE("canonical height vanishes exactly on preperiodic points") {
  int mismatches = 0;
  for (long a = -3; a <= 3; ++a) {
    for (long b = -3; b <= 3; ++b) {
      const CubicMap f{a, b};
      for (long x = -3; x <= 3; ++x) {
        const HeightValue h = canonical_height(f, x, 1e-6);
        const bool pre = orbit_status(f, x).preperiodic();
        if (pre != h.preperiodic || (pre && h.value != 0.0) || (!pre && h.lower() <= 0)) ++mismatches;
      }
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("gcd_height") {
  CHECK(std::fabs(gcd_height(12, 18).finite_part - std::log(6.0)) < 1e-12);
  CHECK(std::fabs(gcd_height(12, 12).finite_part - std::log(12.0)) < 1e-12);
  CHECK(gcd_height(-15, 17).finite_part == 0.0);
  CHECK_THROWS_AS(gcd_height(0, 3), Undefined);
  const GcdHeight g = gcd_height(Rational(50, 3), Rational(-20, 7));
  CHECK(g.finite_part == doctest::Approx(std::log(10.0)));
  CHECK(g.full >= g.finite_part);
}

TEST_CASE("gcd_height finite part matches merged factorization") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 100; ++i) {
    const long x = static_cast<long>(rng() % 999999) + 1, y = static_cast<long>(rng() % 999999) + 1;
    const auto fx = trial_factor(x), fy = trial_factor(y);
    double oracle = 0;
    for (const auto& [p, e] : fx) {
      auto it = fy.find(p);
      if (it != fy.end()) oracle += static_cast<double>(std::min(e, it->second)) * std::log(static_cast<double>(p));
    }
    CHECK(gcd_height(x, y).finite_part == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("gcd_height_series") {
  auto s = gcd_height_series(CubicMap{2, 2}, 1, 1, 1);
  REQUIRE(s.entries.size() == 1);
  CHECK(s.entries[0].n == 1);
  REQUIRE(s.entries[0].sum);
  CHECK(*s.entries[0].sum == 0.0);
  CHECK(*s.entries[0].ratio == 0.0);
  auto odd = gcd_height_series(CubicMap{1, 0}, 1, -1, 2);
  CHECK(odd.odd);
  auto col = gcd_height_series(CubicMap{1, 1}, 5, 7, 2);
  CHECK(col.collision_regime);
}

TEST_CASE("prime_support_sum") {
  auto p = prime_support_sum(CubicMap{2, 2}, 2, 1, 2);
  CHECK(std::fabs(p.sum - std::log(5.0)) < 1e-12);
  REQUIRE(p.primes.size() == 1);
  CHECK(p.primes[0] == 5);
  CHECK(prime_support_sum(CubicMap{2, 2}, 2, 1, 1).sum == 0.0);
  // x^3 - 3x + 1 from gamma = 1, beta = 0: orbit -1, 3, 19 share no primes.
  auto q = prime_support_sum(CubicMap{1, 1}, 1, 0, 3);
  CHECK_THROWS_AS(prime_support_sum(CubicMap{2, 2}, 2, -14, 2), Undefined);
  // oracle: primes dividing both f^m - beta and f^3 - beta numerators
  const CubicMap f{1, 1};
  std::vector<long> vals;
  Rational v = 1;
  for (int k = 1; k <= 3; ++k) {
    v = f(v);
    vals.push_back(v.get_num().get_si());
  }
  double oracle = 0;
  std::map<long, bool> hit;
  for (int m = 0; m < 2; ++m) {
    for (const auto& [pr, e] : trial_factor(vals[m])) {
      if (vals[2] % pr == 0) hit[pr] = true;
    }
  }
  for (const auto& [pr, b] : hit) oracle += std::log(static_cast<double>(pr));
  CHECK(q.sum == doctest::Approx(oracle));
}
