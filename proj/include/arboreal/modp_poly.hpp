#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "arboreal/rational.hpp"

namespace arboreal::modp {

/// Prime field F_p with p < 2^32 so that products fit in 64 bits.
class Field {
 public:
  explicit Field(std::uint64_t p);
  std::uint64_t prime() const { return p_; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p_ - b; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return (a * b) % p_; }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
  std::uint64_t inv(std::uint64_t a) const;
  std::uint64_t from_integer(const Integer& z) const;
  /// Reduction of a rational; nullopt when p divides the denominator.
  std::optional<std::uint64_t> from_rational(const Rational& q) const;

 private:
  std::uint64_t p_;
};

/// Dense, low-to-high, no trailing zeros; the zero polynomial is empty.
using Poly = std::vector<std::uint64_t>;

void trim(Poly& f);
inline int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }
inline bool is_zero(const Poly& f) { return f.empty(); }

Poly add(const Field& F, const Poly& a, const Poly& b);
Poly sub(const Field& F, const Poly& a, const Poly& b);
Poly mul(const Field& F, const Poly& a, const Poly& b);
Poly scale(const Field& F, const Poly& a, std::uint64_t c);
/// Quotient and remainder; b must be nonzero.
std::pair<Poly, Poly> divrem(const Field& F, const Poly& a, const Poly& b);
Poly rem(const Field& F, const Poly& a, const Poly& b);
Poly make_monic(const Field& F, const Poly& a);
Poly gcd(const Field& F, Poly a, Poly b);
/// s*a + t*b = g (monic gcd).
struct Bezout {
  Poly g, s, t;
};
Bezout extended_gcd(const Field& F, const Poly& a, const Poly& b);
Poly derivative(const Field& F, const Poly& a);
Poly powmod(const Field& F, const Poly& base, const Integer& exponent, const Poly& modulus);
std::uint64_t evaluate(const Field& F, const Poly& f, std::uint64_t x);

bool is_squarefree(const Field& F, const Poly& f);

/// Precomputed Frobenius h -> h^p on F_p[x]/(f).
class Frobenius {
 public:
  Frobenius(const Field& F, const Poly& modulus);
  Poly apply(const Poly& h) const;
  const Poly& x_to_p() const { return xp_; }

 private:
  const Field& F_;
  Poly modulus_;
  std::vector<Poly> rows_;  // x^{ip} mod f
  Poly xp_;
};

struct DegreeBlock {
  Poly product;  // product of all irreducible factors of this degree
  int degree;
};

/// Distinct-degree factorization of a monic squarefree polynomial.
std::vector<DegreeBlock> distinct_degree_factorization(const Field& F, const Poly& f);

/// Sorted multiset of irreducible-factor degrees of a monic squarefree polynomial.
std::vector<int> degree_pattern(const Field& F, const Poly& f);

/// Rabin's irreducibility test for monic f.
bool is_irreducible(const Field& F, const Poly& f);

/// Complete factorization of a monic squarefree polynomial into monic irreducibles (p odd).
std::vector<Poly> factor_squarefree(const Field& F, const Poly& f, std::mt19937_64& rng);

}  // namespace arboreal::modp
