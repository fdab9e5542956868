#include <chrono>
#include <random>

#include "arboreal/galois.hpp"
#include "doctest.h"

using namespace arboreal;
using Kind = IrreducibilityCertificate::Kind;

namespace {

const CubicMap kF{Rational(2), Rational(2)};  // x^3 - 12x + 2

bool is_rational_square(const Rational& q) {
  return q >= 0 && mpz_perfect_square_p(q.get_num_mpz_t()) && mpz_perfect_square_p(q.get_den_mpz_t());
}

Rational random_rational(std::mt19937_64& rng, long num_bound, long den_bound) {
  const long n = static_cast<long>(rng() % (2 * num_bound + 1)) - num_bound;
  const long d = static_cast<long>(rng() % den_bound) + 1;
  return make_rational(Integer(n), Integer(d));
}

}  // namespace

TEST_CASE("cubic_discriminant") {
  CHECK(cubic_discriminant(-12, 1) == 6885);
  CHECK(cubic_discriminant(0, -1) == -27);
  CHECK(cubic_discriminant(-3, 1) == 81);
}

TEST_CASE("prove_irreducible examples") {
  const auto c1 = prove_irreducible(parse_poly("x^3 - 12*x + 1"));
  CHECK(c1.irreducible);
  CHECK(c1.kind == Kind::ModP);
  CHECK(c1.prime == 7);

  const auto c2 = prove_irreducible(parse_poly("x^3 - 3*x"));
  CHECK_FALSE(c2.irreducible);
  REQUIRE(c2.factors);
  REQUIRE(c2.factors->factors.size() == 2);
  CHECK(c2.factors->factors[0].factor == parse_poly("x"));
  CHECK(c2.factors->factors[1].factor == parse_poly("x^2 - 3"));

  const auto c3 = prove_irreducible(parse_poly("x^4 - 4*x^2 + 2"));
  CHECK(c3.kind == Kind::Eisenstein);
  CHECK(c3.prime == 2);
  CHECK(c3.shift == 0);

  // Reducible mod every prime, irreducible over Q.
  const auto c4 = prove_irreducible(parse_poly("x^4 + 1"));
  CHECK(c4.irreducible);
  CHECK(c4.kind != Kind::ModP);

  // x^2 + x + 1 at x -> x + 1 becomes x^2 + 3x + 3.
  const auto c5 = prove_irreducible(parse_poly("x^2 + x + 1"));
  CHECK(c5.irreducible);
}

TEST_CASE("certificates agree with factorization") {
  std::mt19937_64 rng(5);
  int disagreements = 0, reducible_seen = 0;
  for (int i = 0; i < 500; ++i) {
    std::vector<Rational> c;
    for (int k = 0; k < 3; ++k) c.push_back(static_cast<long>(rng() % 21) - 10);
    c.push_back(static_cast<long>(rng() % 3) + 1);
    const UniPoly g(c);
    for (const UniPoly& h : {g, compose(g, g)}) {
      const auto cert = prove_irreducible(h);
      const auto fz = factor_polynomial(h);
      const bool irreducible = fz.factors.size() == 1 && fz.factors[0].multiplicity == 1;
      if (!irreducible) ++reducible_seen;
      if (cert.irreducible != irreducible) ++disagreements;
      if (!cert.irreducible && (!cert.factors || cert.factors->reconstruct() != h)) ++disagreements;
    }
  }
  CHECK(reducible_seen > 10);
  CHECK(disagreements == 0);
}

TEST_CASE("eventual_stability_evidence") {
  const auto e1 = eventual_stability_evidence(PolyMap(kF), 1, 2, TreeMode::Full);
  REQUIRE(e1.rows.size() == 2);
  CHECK(e1.rows[0].factor_count == 1);
  CHECK(e1.rows[1].factor_count == 1);
  CHECK(e1.stabilized);

  const auto e2 = eventual_stability_evidence(PolyMap(CubicMap{Rational(1), Rational(3)}), 1, 2, TreeMode::Full);
  CHECK(e2.beta_periodic);
  for (const auto& row : e2.rows) {
    CHECK(row.factor_count >= 2);
    CHECK(row.factor_degrees[0] == 1);
  }

  const auto e3 = eventual_stability_evidence(PolyMap(parse_poly("x^2 - 2")), 2, 3, TreeMode::Stunted);
  REQUIRE(e3.rows.size() == 3);
  for (const auto& row : e3.rows) CHECK(row.factor_count == 1);

  const auto e4 = eventual_stability_evidence(PolyMap(kF), 1, 6, TreeMode::Full);
  CHECK(e4.truncated);
  CHECK(e4.rows.size() == 5);
}

TEST_CASE("level_certificate examples") {
  const auto l1 = level_certificate(kF, 1, 1);
  REQUIRE(l1.certified());
  CHECK(l1.prime_witness->prime == 5);
  CHECK(l1.irreducibility->kind == Kind::ModP);
  CHECK(l1.irreducibility->prime == 7);
  CHECK(l1.group_order == 6);

  const auto l2 = level_certificate(kF, 1, 2);
  REQUIRE(l2.certified());
  CHECK(l2.prime_witness->prime == 103);
  CHECK(l2.group_order == 216);  // 6^(3^1)

  const Rational r = 3;
  const auto l3 = level_certificate(kF, kF(r), 1);
  CHECK(l3.outcome == LevelCertificate::Outcome::NotIrreducible);
  REQUIRE(l3.irreducibility->factors);
  bool has_root = false;
  for (const auto& pf : l3.irreducibility->factors->factors) has_root |= pf.factor == parse_poly("x - 3");
  CHECK(has_root);

  const auto l4 = level_certificate(kF, 0, 1);
  CHECK(l4.outcome == LevelCertificate::Outcome::NoRPrime);
}

TEST_CASE("level-1 certificates imply a nonsquare discriminant") {
  std::mt19937_64 rng(1234);
  int certified = 0, violations = 0;
  for (int i = 0; i < 200; ++i) {
    const Rational a = static_cast<long>(rng() % 41) - 20;
    const Rational b = static_cast<long>(rng() % 41) - 20;
    const Rational beta = static_cast<long>(rng() % 41) - 20;
    if (a == 0) continue;
    const CubicMap f{a, b};
    if (!level_certificate(f, beta, 1).certified()) continue;
    ++certified;
    if (is_rational_square(cubic_discriminant(-3 * a * a, b - beta))) ++violations;
  }
  CHECK(certified > 20);
  CHECK(violations == 0);
}

TEST_CASE("finite_index_report") {
  const auto r = finite_index_report(kF, 1, 2);
  CHECK(r.obstructions.present.empty());
  CHECK(r.all_certified);
  CHECK(r.certified_order == 1296);
  CHECK(r.aut_order == complete_aut_order(3, 2));
  CHECK(r.certified_exponent == 4);

  const auto pcf = finite_index_report(CubicMap{Rational(1), Rational(0)}, 1, 1);
  CHECK(std::find(pcf.obstructions.present.begin(), pcf.obstructions.present.end(), "PCF") !=
        pcf.obstructions.present.end());

  const auto flat = finite_index_report(CubicMap{Rational(0), Rational(2)}, 1, 1);
  CHECK(flat.obstructions.a_zero);
  CHECK_FALSE(flat.obstructions.present.empty());
}

TEST_CASE("reference_cycle_distribution") {
  const auto s3 = reference_cycle_distribution(3, 1);
  CHECK(s3.total == 6);
  CHECK(s3.counts.at({1, 1, 1}) == 1);
  CHECK(s3.counts.at({1, 2}) == 3);
  CHECK(s3.counts.at({3}) == 2);
  const auto w22 = reference_cycle_distribution(2, 2);
  CHECK(w22.total == 8);
  // x^2 wr x^2 on 4 leaves: identity, two single swaps, the double swap twice, two 4-cycles.
  CHECK(w22.counts.at({1, 1, 1, 1}) == 1);
  CHECK(w22.counts.at({1, 1, 2}) == 2);
  CHECK(w22.counts.at({2, 2}) == 3);
  CHECK(w22.counts.at({4}) == 2);
  const auto s2 = reference_cycle_distribution(2, 1);
  CHECK(s2.counts.at({1, 1}) == 1);
  CHECK(s2.counts.at({2}) == 1);
  CHECK(reference_cycle_distribution(3, 2).total == 1296);
  CHECK(reference_cycle_distribution(2, 3).total == 128);
  CHECK_THROWS_AS(reference_cycle_distribution(3, 3), TooLarge);
}

TEST_CASE("frobenius_sample") {
  const auto s = frobenius_sample(PolyMap(kF), 1, 1, 1000, 100000);
  CHECK(s.total > 9000);
  std::uint64_t sum = 0;
  for (const auto& [k, v] : s.counts) sum += v;
  CHECK(sum == s.total);
  CHECK(s.frequency({1, 1, 1}) == doctest::Approx(1.0 / 6).epsilon(0.12));
  const auto single = frobenius_sample(PolyMap(kF), 1, 1, 1000, 100000, 1);
  CHECK(single.counts == s.counts);
  CHECK(single.skipped == s.skipped);

  const auto cube = frobenius_sample(PolyMap(parse_poly("x^3")), 1, 1, 5, 3000);
  for (const auto& [seq, k] : cube.counts) CHECK(seq.front() == 1);

  const auto a3 = frobenius_sample(PolyMap(CubicMap{Rational(1), Rational(1)}), 0, 1, 5, 20000);
  CHECK(a3.frequency({1, 2}) == 0.0);
  CHECK(a3.total > 1000);
}

TEST_CASE("Frobenius statistics converge to the wreath distribution when all levels certify") {
  REQUIRE(level_certificate(kF, 1, 1).certified());
  REQUIRE(level_certificate(kF, 1, 2).certified());
  const auto ref = reference_cycle_distribution(3, 2);
  const auto s = frobenius_sample(PolyMap(kF), 1, 2, 1000, 130000);
  CHECK(s.total >= 10000);
  CHECK(total_variation(s, ref) <= 0.03);
}

TEST_CASE("stacked certificates reproduce the complete order") {
  Integer product = 1;
  for (int n = 1; n <= 2; ++n) product *= level_certificate(kF, 1, n).group_order;
  CHECK(product == complete_aut_order(3, 2));
}
