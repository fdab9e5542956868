#include "arboreal/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "arboreal/errors.hpp"
#include "arboreal/integer_factor.hpp"
#include "arboreal/modp_poly.hpp"

namespace arboreal {

UniPoly::UniPoly(std::vector<Rational> coefficients) : c_(std::move(coefficients)) {
  for (auto& c : c_) c.canonicalize();
  trim();
}

UniPoly::UniPoly(std::initializer_list<long> coefficients) {
  c_.reserve(coefficients.size());
  for (long v : coefficients) c_.emplace_back(v);
  trim();
}

UniPoly UniPoly::constant(const Rational& c) { return UniPoly(std::vector<Rational>{c}); }

UniPoly UniPoly::monomial(const Rational& c, int degree) {
  std::vector<Rational> v(static_cast<size_t>(degree) + 1, Rational(0));
  v.back() = c;
  return UniPoly(std::move(v));
}

void UniPoly::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

Rational UniPoly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return Rational(0);
  return c_[i];
}

Rational UniPoly::operator()(const Rational& x) const {
  Rational acc(0);
  for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

UniPoly& UniPoly::operator+=(const UniPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

UniPoly& UniPoly::operator-=(const UniPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

UniPoly& UniPoly::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    c_.clear();
    return *this;
  }
  for (auto& v : c_) v *= c;
  return *this;
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const auto& x = a.coefficients();
  const auto& y = b.coefficients();
  std::vector<Rational> out(x.size() + y.size() - 1, Rational(0));
  Rational t;
  for (size_t i = 0; i < x.size(); ++i) {
    if (sgn(x[i]) == 0) continue;
    for (size_t j = 0; j < y.size(); ++j) {
      mpq_mul(t.get_mpq_t(), x[i].get_mpq_t(), y[j].get_mpq_t());
      out[i + j] += t;
    }
  }
  return UniPoly(std::move(out));
}

UniPoly UniPoly::operator-() const {
  UniPoly r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

bool poly_less(const UniPoly& a, const UniPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  const auto& x = a.coefficients();
  const auto& y = b.coefficients();
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] != y[i]) return x[i] < y[i];
  }
  return false;
}

std::pair<UniPoly, UniPoly> divrem(const UniPoly& a, const UniPoly& b) {
  if (b.is_zero()) throw Undefined("polynomial division by zero");
  if (a.degree() < b.degree()) return {{}, a};
  std::vector<Rational> r = a.coefficients();
  const auto& d = b.coefficients();
  const int db = b.degree();
  std::vector<Rational> q(static_cast<size_t>(a.degree() - db) + 1, Rational(0));
  const Rational inv_lead = 1 / b.leading();
  for (int k = a.degree(); k >= db; --k) {
    if (sgn(r[k]) == 0) continue;
    const Rational c = r[k] * inv_lead;
    q[k - db] = c;
    for (int j = 0; j <= db; ++j) r[k - db + j] -= c * d[j];
  }
  r.resize(static_cast<size_t>(db));
  return {UniPoly(std::move(q)), UniPoly(std::move(r))};
}

bool divides(const UniPoly& d, const UniPoly& a) { return divrem(a, d).second.is_zero(); }

UniPoly derivative(const UniPoly& f) {
  if (f.degree() < 1) return {};
  std::vector<Rational> out(static_cast<size_t>(f.degree()));
  for (int i = 1; i <= f.degree(); ++i) out[i - 1] = f.coeff(i) * i;
  return UniPoly(std::move(out));
}

UniPoly compose(const UniPoly& f, const UniPoly& g) {
  UniPoly acc;
  for (int i = f.degree(); i >= 0; --i) acc = acc * g + UniPoly::constant(f.coeff(i));
  return acc;
}

UniPoly pow(const UniPoly& f, unsigned k) {
  UniPoly result = UniPoly::constant(Rational(1));
  UniPoly base = f;
  while (k) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

UniPoly monic(const UniPoly& f) {
  if (f.is_zero()) return f;
  return f * (1 / f.leading());
}

IntegerPoly to_primitive(const UniPoly& f) {
  IntegerPoly out;
  if (f.is_zero()) {
    out.content = 0;
    return out;
  }
  Integer den_lcm = 1, num_gcd = 0;
  for (const auto& c : f.coefficients()) {
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
  }
  Rational content = make_rational(num_gcd, den_lcm);
  if (sgn(f.leading()) < 0) content = -content;
  out.content = content;
  out.primitive.reserve(f.coefficients().size());
  for (const auto& c : f.coefficients()) {
    Rational v = c / content;
    out.primitive.push_back(v.get_num());
  }
  return out;
}

UniPoly from_integers(const std::vector<Integer>& coefficients) {
  std::vector<Rational> v;
  v.reserve(coefficients.size());
  for (const auto& z : coefficients) v.emplace_back(z);
  return UniPoly(std::move(v));
}

namespace {

using ZPoly = std::vector<Integer>;

void ztrim(ZPoly& f) {
  while (!f.empty() && sgn(f.back()) == 0) f.pop_back();
}

void make_primitive(ZPoly& f) {
  Integer g = 0;
  for (const auto& c : f) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g == 0) return;
  if (sgn(f.back()) < 0) g = -g;
  for (auto& c : f) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

// lc(b)^(deg a - deg b + 1) * a mod b, one leading term at a time.
ZPoly pseudo_remainder(ZPoly r, const ZPoly& b) {
  const size_t db = b.size() - 1;
  const Integer& lb = b.back();
  while (!r.empty() && r.size() > db) {
    const Integer lr = r.back();
    const size_t shift = r.size() - 1 - db;
    for (auto& c : r) c *= lb;
    for (size_t j = 0; j <= db; ++j) r[shift + j] -= lr * b[j];
    ztrim(r);
  }
  return r;
}

// Coprimality shortcut: a gcd of degree 0 modulo a prime that keeps both degrees proves gcd 1.
bool coprime_mod_small_prime(const ZPoly& a, const ZPoly& b) {
  for (std::uint64_t p : first_primes(12)) {
    if (p < 5) continue;
    modp::Field F(p);
    if (F.from_integer(a.back()) == 0 || F.from_integer(b.back()) == 0) continue;
    modp::Poly x(a.size()), y(b.size());
    for (size_t i = 0; i < a.size(); ++i) x[i] = F.from_integer(a[i]);
    for (size_t i = 0; i < b.size(); ++i) y[i] = F.from_integer(b[i]);
    return modp::degree(modp::gcd(F, x, y)) == 0;
  }
  return false;
}

}  // namespace

UniPoly gcd(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.degree() == 0 || b.degree() == 0) return UniPoly::constant(Rational(1));
  ZPoly x = to_primitive(a).primitive;
  ZPoly y = to_primitive(b).primitive;
  if (coprime_mod_small_prime(x, y)) return UniPoly::constant(Rational(1));
  if (x.size() < y.size()) std::swap(x, y);
  while (!y.empty()) {
    ZPoly r = pseudo_remainder(x, y);
    make_primitive(r);
    x = std::move(y);
    y = std::move(r);
  }
  return monic(from_integers(x));
}

Rational resultant(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return Rational(0);
  const int m = a.degree(), n = b.degree();
  if (n == 0) {
    Rational r(1);
    for (int i = 0; i < m; ++i) r *= b.leading();
    return r;
  }
  if (m < n) {
    const Rational r = resultant(b, a);
    return ((m * n) % 2) ? -r : r;
  }
  const UniPoly rem = divrem(a, b).second;
  if (rem.is_zero()) return Rational(0);
  const int k = rem.degree();
  Rational scale(1);
  for (int i = 0; i < m - k; ++i) scale *= b.leading();
  Rational r = scale * resultant(b, rem);
  return ((m * n) % 2) ? -r : r;
}

Rational discriminant(const UniPoly& f) {
  const int n = f.degree();
  if (n < 1) throw Undefined("discriminant of a constant");
  Rational r = resultant(f, derivative(f)) / f.leading();
  return ((n * (n - 1) / 2) % 2) ? -r : r;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  UniPoly parse() {
    skip();
    if (pos_ >= s_.size()) throw InvalidInput("empty polynomial");
    UniPoly r = expr();
    skip();
    if (pos_ < s_.size()) fail();
    return r;
  }

 private:
  [[noreturn]] void fail() const {
    if (pos_ >= s_.size()) throw InvalidInput("polynomial parse error: unexpected end of input in \"" + std::string(s_) + "\"");
    size_t end = pos_ + 1;
    if (std::isalnum(static_cast<unsigned char>(s_[pos_]))) {
      while (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) ++end;
    }
    throw InvalidInput("polynomial parse error: unexpected token '" + std::string(s_.substr(pos_, end - pos_)) +
                       "' at position " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  UniPoly expr() {
    UniPoly acc = term();
    for (;;) {
      if (eat('+')) acc += term();
      else if (eat('-')) acc -= term();
      else return acc;
    }
  }
  UniPoly term() {
    UniPoly acc = unary();
    for (;;) {
      if (eat('*')) {
        acc = acc * unary();
      } else if (eat('/')) {
        const size_t at = pos_;
        UniPoly d = unary();
        if (d.degree() != 0) {
          pos_ = at;
          skip();
          throw InvalidInput("polynomial parse error: division by non-constant at position " + std::to_string(pos_));
        }
        acc *= 1 / d.leading();
      } else {
        return acc;
      }
    }
  }
  UniPoly unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  UniPoly power() {
    UniPoly base = primary();
    if (eat('^')) {
      skip();
      const size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_ || pos_ - start > 6) {
        pos_ = start;
        fail();
      }
      base = pow(base, static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start)))));
    }
    return base;
  }
  UniPoly primary() {
    skip();
    if (pos_ >= s_.size()) fail();
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      UniPoly r = expr();
      if (!eat(')')) fail();
      return r;
    }
    if (c == 'x' || c == 'X') {
      ++pos_;
      if (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) {
        --pos_;
        fail();
      }
      return UniPoly::identity();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != 'x') fail();
      return UniPoly::constant(Rational(Integer(std::string(s_.substr(start, pos_ - start)))));
    }
    fail();
  }

  std::string_view s_;
  size_t pos_ = 0;
};

}  // namespace

UniPoly parse_poly(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const UniPoly& f) {
  if (f.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int i = f.degree(); i >= 0; --i) {
    const Rational& c = f.coefficients()[i];
    if (sgn(c) == 0) continue;
    const Rational mag = abs(c);
    if (first) {
      if (sgn(c) < 0) out << "-";
    } else {
      out << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    const bool unit = mag == 1;
    if (i == 0) {
      out << to_string(mag);
      continue;
    }
    if (!unit) out << to_string(mag) << "*";
    out << "x";
    if (i > 1) out << "^" << i;
  }
  return out.str();
}

}  // namespace arboreal
