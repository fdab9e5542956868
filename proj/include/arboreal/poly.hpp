#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "arboreal/rational.hpp"

namespace arboreal {

/// Dense univariate polynomial over Q, coefficients low to high, never a trailing zero.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coefficients);
  UniPoly(std::initializer_list<long> coefficients);

  static UniPoly constant(const Rational& c);
  static UniPoly monomial(const Rational& c, int degree);
  static UniPoly identity() { return monomial(Rational(1), 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coefficients() const { return c_; }
  Rational coeff(int i) const;
  const Rational& leading() const { return c_.back(); }

  Rational operator()(const Rational& x) const;

  UniPoly& operator+=(const UniPoly& o);
  UniPoly& operator-=(const UniPoly& o);
  UniPoly& operator*=(const Rational& c);
  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(UniPoly a, const Rational& c) { return a *= c; }
  friend UniPoly operator*(const Rational& c, UniPoly a) { return a *= c; }
  UniPoly operator-() const;
  friend bool operator==(const UniPoly&, const UniPoly&) = default;

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Degree first, then coefficients lexicographically from the constant term up.
bool poly_less(const UniPoly& a, const UniPoly& b);

std::pair<UniPoly, UniPoly> divrem(const UniPoly& a, const UniPoly& b);
bool divides(const UniPoly& d, const UniPoly& a);
UniPoly derivative(const UniPoly& f);
/// f(g(x)).
UniPoly compose(const UniPoly& f, const UniPoly& g);
UniPoly pow(const UniPoly& f, unsigned k);
UniPoly monic(const UniPoly& f);
/// Monic gcd; gcd(0, 0) = 0.
UniPoly gcd(const UniPoly& a, const UniPoly& b);
Rational resultant(const UniPoly& a, const UniPoly& b);
Rational discriminant(const UniPoly& f);

/// f = content * primitive, primitive has integer coprime coefficients and positive leading term.
struct IntegerPoly {
  Rational content;
  std::vector<Integer> primitive;
};
IntegerPoly to_primitive(const UniPoly& f);
UniPoly from_integers(const std::vector<Integer>& coefficients);

/// Parses text such as "x^3 - 12*x + 2" or "(x-1)^2*(x+2)/3". Throws InvalidInput naming the bad token.
UniPoly parse_poly(std::string_view text);
std::string to_string(const UniPoly& f);

}  // namespace arboreal
