#include <random>

#include "arboreal/integer_factor.hpp"
#include "arboreal/poly.hpp"
#include "arboreal/poly_factor.hpp"
#include "doctest.h"

using namespace arboreal;

TEST_CASE("factor_integer small values") {
  auto f = factor_integer(12);
  CHECK(f.sign == 1);
  REQUIRE(f.factors.size() == 2);
  CHECK(f.factors[0] == PrimePower{2, 2});
  CHECK(f.factors[1] == PrimePower{3, 1});

  auto g = factor_integer(-2575);
  CHECK(g.sign == -1);
  REQUIRE(g.factors.size() == 2);
  CHECK(g.factors[0] == PrimePower{5, 2});
  CHECK(g.factors[1] == PrimePower{103, 1});

  auto one = factor_integer(1);
  CHECK(one.sign == 1);
  CHECK(one.factors.empty());
}

TEST_CASE("factor_integer round trip with rho-sized factors") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 40; ++i) {
    Integer n = 1;
    for (int k = 0; k < 3; ++k) {
      Integer p(static_cast<unsigned long>(rng() >> 34));
      mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
      n *= p;
    }
    if (i % 2) n = -n;
    auto f = factor_integer(n);
    CHECK(f.complete());
    CHECK(f.reconstruct() == n);
    for (const auto& pp : f.factors) CHECK(is_probable_prime(pp.prime));
  }
}

TEST_CASE("valuation") {
  CHECK(valuation(Rational(12), 2) == 2);
  CHECK(valuation(Rational(3, 14), 7) == -1);
  CHECK(valuation(Rational(0), 5).is_infinite());
  CHECK_THROWS_AS(valuation(Rational(5), 4), NotPrime);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    Rational q = make_rational(Integer(static_cast<long>(rng() % 2000) + 1), Integer(static_cast<long>(rng() % 500) + 1));
    Rational r = make_rational(Integer(-static_cast<long>(rng() % 700) - 1), Integer(static_cast<long>(rng() % 900) + 1));
    for (long p : {2L, 3L, 5L, 7L}) {
      CHECK(valuation(q * r, p).value() == valuation(q, p).value() + valuation(r, p).value());
    }
  }
}

TEST_CASE("parse and print polynomials") {
  UniPoly f = parse_poly("x^3 - 12*x + 2");
  CHECK(f == UniPoly({2, -12, 0, 1}));
  CHECK(to_string(f) == "x^3 - 12*x + 2");
  CHECK(to_string(parse_poly("(x-1)^2*(x+2)")) == "x^3 - 3*x + 2");
  CHECK(to_string(parse_poly("x^2/2 - 3/4")) == "1/2*x^2 - 3/4");
  CHECK(to_string(parse_poly("-x")) == "-x");
  CHECK(to_string(UniPoly{}) == "0");
  try {
    parse_poly("x^3 - 12*y + 2");
    FAIL("expected parse failure");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("'y'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_poly("x^"), InvalidInput);
  CHECK_THROWS_AS(parse_poly(""), InvalidInput);
  CHECK_THROWS_AS(parse_poly("x/(x+1)"), InvalidInput);
}

TEST_CASE("factor_polynomial examples") {
  auto f = factor_polynomial(parse_poly("x^3 - 3*x"));
  CHECK(f.content == 1);
  REQUIRE(f.factors.size() == 2);
  CHECK(to_string(f.factors[0].factor) == "x");
  CHECK(to_string(f.factors[1].factor) == "x^2 - 3");

  auto g = factor_polynomial(parse_poly("x^3 - 12*x + 1"));
  REQUIRE(g.factors.size() == 1);
  CHECK(to_string(g.factors[0].factor) == "x^3 - 12*x + 1");

  auto h = factor_polynomial(parse_poly("(x-1)^2"));
  REQUIRE(h.factors.size() == 1);
  CHECK(to_string(h.factors[0].factor) == "x - 1");
  CHECK(h.factors[0].multiplicity == 2);
}

TEST_CASE("factor_polynomial splits products that are irreducible-looking mod many primes") {
  // x^4 + 1 splits mod every prime; check recombination keeps it whole.
  auto f = factor_polynomial(parse_poly("x^4 + 1"));
  REQUIRE(f.factors.size() == 1);
  auto g = factor_polynomial(parse_poly("(x^4+1)*(x^4-10*x^2+1)*(3*x^2-7)"));
  CHECK(g.content == 3);
  REQUIRE(g.factors.size() == 3);
  CHECK(g.reconstruct() == parse_poly("(x^4+1)*(x^4-10*x^2+1)*(3*x^2-7)"));
}

TEST_CASE("factor_polynomial round trip on random products") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> coef(-9, 9);
  for (int trial = 0; trial < 60; ++trial) {
    UniPoly prod = UniPoly::constant(Rational(static_cast<long>(trial % 5) + 1, 3));
    const int parts = 1 + trial % 3;
    for (int k = 0; k < parts; ++k) {
      std::vector<Rational> c;
      const int deg = 1 + static_cast<int>(rng() % 4);
      for (int i = 0; i < deg; ++i) c.emplace_back(coef(rng));
      c.emplace_back(1 + static_cast<long>(rng() % 3));
      UniPoly part(c);
      prod = prod * part;
      if (rng() % 4 == 0) prod = prod * part;
    }
    auto fact = factor_polynomial(prod);
    CHECK(fact.reconstruct() == prod);
    for (const auto& pf : fact.factors) {
      CHECK(pf.factor.leading() == 1);
      // each factor stays whole under a second factorization
      auto again = factor_polynomial(pf.factor);
      CHECK(again.factors.size() == 1);
    }
  }
}

TEST_CASE("squarefree_part") {
  CHECK(squarefree_part(parse_poly("(x-1)^2*(x+2)")) == parse_poly("(x-1)*(x+2)"));
  CHECK(squarefree_part(parse_poly("x^3 - 12*x + 2")) == parse_poly("x^3 - 12*x + 2"));
  CHECK(squarefree_part(parse_poly("x^2")) == parse_poly("x"));
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    UniPoly g = UniPoly::constant(Rational(1));
    for (int k = 0; k < 3; ++k) {
      UniPoly lin({static_cast<long>(rng() % 7) - 3, 1});
      g = g * pow(lin, 1 + static_cast<unsigned>(rng() % 3));
    }
    UniPoly s = squarefree_part(g);
    CHECK(divrem(g, s).second.is_zero());
    CHECK(gcd(s, derivative(s)).degree() == 0);
  }
}

TEST_CASE("gcd and resultant") {
  CHECK(gcd(parse_poly("(x-1)*(x+2)^2"), parse_poly("(x+2)*(x-5)")) == parse_poly("x+2"));
  CHECK(gcd(parse_poly("x^2+1"), parse_poly("x-3")) == UniPoly{1});
  CHECK(discriminant(parse_poly("x^3 - 12*x + 1")) == 6885);
  CHECK(discriminant(parse_poly("x^2 - 2")) == 8);
}
