#include <random>

#include "arboreal/modp_poly.hpp"
#include "arboreal/poly_factor.hpp"
#include "arboreal/ramification.hpp"
#include "doctest.h"

using namespace arboreal;

namespace {

const CubicMap kF{Rational(2), Rational(2)};  // x^3 - 12x + 2

// Valuation by repeated division; independent of the library's routine.
long naive_val(const Integer& z, long p) {
  if (z == 0) return 1L << 40;
  Integer m = abs(z);
  long v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}
long naive_val(const Rational& q, long p) {
  if (q == 0) return 1L << 40;
  return naive_val(Integer(q.get_num()), p) - naive_val(Integer(q.get_den()), p);
}

Rational random_rational(std::mt19937_64& rng, long num_bound, long den_bound) {
  const long n = static_cast<long>(rng() % (2 * num_bound + 1)) - num_bound;
  const long d = static_cast<long>(rng() % den_bound) + 1;
  return make_rational(Integer(n), Integer(d));
}

const ClauseValuation& find(const ConditionReport& r, const std::string& q) {
  for (const auto& c : r.clauses) {
    for (const auto& v : c.valuations) {
      if (v.quantity == q) return v;
    }
  }
  FAIL("missing quantity " << q);
  throw 0;
}

}  // namespace

TEST_CASE("good_separable_reduction") {
  CHECK(good_separable_reduction(kF, 5));
  CHECK(good_separable_reduction(kF, 2));
  CHECK_FALSE(good_separable_reduction(kF, 3));
  CHECK_FALSE(good_separable_reduction(CubicMap{make_rational(1, 5), Rational(1)}, 5));
  CHECK_THROWS_AS(good_separable_reduction(kF, 6), NotPrime);
}

TEST_CASE("Condition R examples with hand valuations") {
  const auto r = check_condition_R(kF, 1, 5, 1);
  CHECK(r.satisfied);
  CHECK(find(r, "-a - beta").value == -3);
  CHECK(find(r, "f^1(-a) - beta").value == 17);
  CHECK(find(r, "a - beta").value == 1);
  CHECK(find(r, "f^1(a) - beta").value == -15);
  CHECK(find(r, "f^1(a) - beta").valuation == Valuation(1));
  CHECK(find(r, "beta").valuation == Valuation(0));
  for (const auto& c : r.clauses) {
    for (const auto& v : c.valuations) CHECK(v.valuation == Valuation(naive_val(v.value, 5)));
  }
  CHECK(check_condition_R(kF, 1, 3, 1).first_failure() == 'a');
  const auto zero = check_condition_R(kF, 0, 5, 1);
  CHECK_FALSE(zero.satisfied);
  CHECK_FALSE(zero.clauses.back().pass);
  CHECK(zero.clauses.back().label == 'e');

  const auto r2 = check_condition_R(kF, 1, 103, 2);
  CHECK(r2.satisfied);
  CHECK(find(r2, "f^2(a) - beta").value == -2575);
  CHECK(find(r2, "f^2(a) - beta").valuation == Valuation(1));
  CHECK(check_condition_R(kF, 1, 5, 2).first_failure() != 0);
}

TEST_CASE("Condition U examples") {
  CHECK(check_condition_U(kF, 1, 11, 1).satisfied);
  CHECK_FALSE(check_condition_U(kF, 1, 5, 1).satisfied);
  CHECK(check_condition_U(kF, 1, 3, 2).first_failure() == 'a');
}

TEST_CASE("find_condition_R_primes") {
  const auto s1 = find_condition_R_primes(kF, 1, 1);
  REQUIRE(s1.witnesses.size() == 1);
  CHECK(s1.witnesses[0].prime == 5);
  CHECK(s1.target == -15);
  const auto s2 = find_condition_R_primes(kF, 1, 2);
  REQUIRE(s2.witnesses.size() == 1);
  CHECK(s2.witnesses[0].prime == 103);
  bool five_rejected_for_d = false;
  for (const auto& rej : s2.rejected) {
    if (rej.prime != 5) continue;
    for (const auto& c : rej.clauses) {
      if (c.label == 'd' && !c.pass && c.valuations[0].valuation == Valuation(2)) five_rejected_for_d = true;
    }
  }
  CHECK(five_rejected_for_d);
  CHECK(find_condition_R_primes(kF, 0, 1).witnesses.empty());
  CHECK(find_condition_R_primes(kF, 0, 2).witnesses.empty());
}

TEST_CASE("cross_condition_witnesses") {
  const auto one = cross_condition_witnesses(kF, {Rational(1)}, 1);
  REQUIRE(one.witnesses.size() == 1);
  REQUIRE(one.witnesses[0].prime);
  CHECK(*one.witnesses[0].prime == 5);

  const auto two = cross_condition_witnesses(kF, {Rational(1), Rational(-1)}, 1);
  CHECK(two.preconditions_hold);
  REQUIRE(two.witnesses[0].prime);
  CHECK(*two.witnesses[0].prime == 5);
  REQUIRE(two.witnesses[0].u_reports.size() == 1);
  CHECK(two.witnesses[0].u_reports[0].satisfied);

  const Rational beta = 1;
  const auto related = cross_condition_witnesses(kF, {beta, kF(beta)}, 1);
  CHECK_FALSE(related.preconditions_hold);
}

TEST_CASE("R implies U one level down, and U witnesses give squarefree reductions") {
  std::mt19937_64 rng(71);
  int checked = 0, violations = 0;
  auto audit = [&](const CubicMap& f, const Rational& beta, const PrimeWitness& w) {
    ++checked;
    if (w.n >= 2) {
      if (!check_condition_U(f, beta, w.prime, w.n - 1).satisfied) ++violations;
    } else {
      const auto u0 = check_condition_U(f, beta, w.prime, 0);
      for (const auto& c : u0.clauses) {
        if ((c.label == 'b' || c.label == 'c') && !c.pass) ++violations;
      }
    }
  };
  for (int n : {1, 2}) {
    for (const auto& w : find_condition_R_primes(kF, 1, n).witnesses) audit(kF, 1, w);
  }
  for (int i = 0; i < 100; ++i) {
    const CubicMap f{random_rational(rng, 9, 3), random_rational(rng, 20, 3)};
    if (f.a == 0) continue;
    const Rational beta = random_rational(rng, 20, 2);
    for (int n : {1, 2}) {
      for (const auto& w : find_condition_R_primes(f, beta, n).witnesses) audit(f, beta, w);
    }
  }
  CHECK(checked > 50);
  CHECK(violations == 0);

  // Squarefree reduction mod every U witness among small primes.
  int sq_checked = 0, sq_violations = 0;
  for (int i = 0; i < 40; ++i) {
    const CubicMap f{Rational(static_cast<long>(rng() % 7) + 1), Rational(static_cast<long>(rng() % 21) - 10)};
    const Rational beta = static_cast<long>(rng() % 21) - 10;
    for (int n : {1, 2}) {
      const UniPoly g = compose_poly(PolyMap(f), n) - UniPoly::constant(beta);
      const auto c = to_primitive(g).primitive;
      for (long p : {2L, 5L, 7L, 11L, 13L, 17L, 19L, 23L}) {
        if (!check_condition_U(f, beta, p, n).satisfied) continue;
        ++sq_checked;
        const modp::Field F(static_cast<std::uint64_t>(p));
        if (!modp::is_squarefree(F, modp::make_monic(F, reduce_mod(c, static_cast<std::uint64_t>(p))))) {
          ++sq_violations;
        }
      }
    }
  }
  CHECK(sq_checked > 20);
  CHECK(sq_violations == 0);
}
