#include "arboreal/rational.hpp"

#include <cctype>
#include <cmath>

#include "arboreal/errors.hpp"
#include "arboreal/integer_factor.hpp"

namespace arboreal {

namespace {

bool valid_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  if (!valid_integer_literal(s)) {
    throw InvalidInput("malformed rational '" + std::string(whole) + "'");
  }
  std::string digits(s[0] == '+' ? s.substr(1) : s);
  return Integer(digits, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view t = text;
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
  const auto slash = t.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(t, text));
  Integer num = parse_integer(t.substr(0, slash), text);
  Integer den = parse_integer(t.substr(slash + 1), text);
  if (den == 0) throw InvalidInput("zero denominator in '" + std::string(text) + "'");
  return make_rational(num, den);
}

std::string to_string(const Integer& z) { return z.get_str(10); }

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str(10);
  return q.get_num().get_str(10) + "/" + q.get_den().get_str(10);
}

double log_abs(const Integer& z) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

long integer_valuation(const Integer& z, const Integer& p) {
  if (z == 0) return std::numeric_limits<long>::max();
  Integer rest = z;
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), z.get_mpz_t(), p.get_mpz_t()));
}

Valuation valuation_unchecked(const Rational& q, const Integer& p) {
  if (q == 0) return Valuation::infinity();
  return Valuation(integer_valuation(q.get_num(), p) - integer_valuation(q.get_den(), p));
}

Valuation valuation(const Rational& q, const Integer& p) {
  if (!is_probable_prime(p)) throw NotPrime(to_string(p) + " is not prime");
  return valuation_unchecked(q, p);
}

}  // namespace arboreal
