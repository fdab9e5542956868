#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace arboreal {

using Integer = mpz_class;
/// Always canonical: gcd(|num|, den) = 1, den >= 1, zero is 0/1.
using Rational = mpq_class;

Rational parse_rational(std::string_view text);
std::string to_string(const Integer& z);
std::string to_string(const Rational& q);

inline Rational make_rational(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Natural log of |z|; z must be nonzero. Accurate to double precision for any size.
double log_abs(const Integer& z);

/// A p-adic valuation; +infinity is the valuation of zero.
class Valuation {
 public:
  constexpr Valuation() = default;
  constexpr explicit Valuation(long v) : value_(v), infinite_(false) {}
  static constexpr Valuation infinity() {
    Valuation v;
    v.infinite_ = true;
    return v;
  }
  constexpr bool is_infinite() const { return infinite_; }
  constexpr long value() const { return value_; }

  friend constexpr bool operator==(const Valuation& a, const Valuation& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
  }
  friend constexpr bool operator==(const Valuation& a, long b) { return a == Valuation(b); }
  friend constexpr std::strong_ordering operator<=>(const Valuation& a, long b) {
    return a <=> Valuation(b);
  }

  std::string to_string() const { return infinite_ ? "inf" : std::to_string(value_); }

 private:
  long value_ = 0;
  bool infinite_ = false;
};

/// v_p(z) for an integer; p is assumed prime (no check).
long integer_valuation(const Integer& z, const Integer& p);

/// Exact p-adic valuation of q. Throws NotPrime when p fails a primality test.
Valuation valuation(const Rational& q, const Integer& p);

/// Same as valuation() but trusts the caller that p is prime.
Valuation valuation_unchecked(const Rational& q, const Integer& p);

}  // namespace arboreal
