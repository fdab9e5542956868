#include "arboreal/modp_poly.hpp"

#include <algorithm>
#include <stdexcept>

#include "arboreal/errors.hpp"

namespace arboreal::modp {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

Field::Field(u64 p) : p_(p) {
  if (p < 2 || p >= (1ULL << 32)) throw InvalidInput("modp::Field needs a prime below 2^32");
}

u64 Field::pow(u64 a, u64 e) const {
  u64 r = 1 % p_;
  a %= p_;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

u64 Field::inv(u64 a) const {
  if (a % p_ == 0) throw std::domain_error("modp: inverse of zero");
  return pow(a, p_ - 2);
}

u64 Field::from_integer(const Integer& z) const {
  return mpz_fdiv_ui(z.get_mpz_t(), static_cast<unsigned long>(p_));
}

std::optional<u64> Field::from_rational(const Rational& q) const {
  const u64 den = from_integer(q.get_den());
  if (den == 0) return std::nullopt;
  return mul(from_integer(q.get_num()), inv(den));
}

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly add(const Field& F, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    r[i] = F.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  }
  trim(r);
  return r;
}

Poly sub(const Field& F, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    r[i] = F.sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  }
  trim(r);
  return r;
}

Poly mul(const Field& F, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  const u64 p = F.prime();
  std::vector<u128> acc(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    const u128 ai = a[i];
    for (size_t j = 0; j < b.size(); ++j) acc[i + j] += ai * b[j];
  }
  Poly r(acc.size());
  for (size_t k = 0; k < acc.size(); ++k) r[k] = static_cast<u64>(acc[k] % p);
  trim(r);
  return r;
}

Poly scale(const Field& F, const Poly& a, u64 c) {
  Poly r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = F.mul(a[i], c);
  trim(r);
  return r;
}

std::pair<Poly, Poly> divrem(const Field& F, const Poly& a, const Poly& b) {
  if (b.empty()) throw std::domain_error("modp: division by zero polynomial");
  if (a.size() < b.size()) return {{}, a};
  Poly r = a;
  const size_t db = b.size() - 1;
  Poly q(a.size() - db, 0);
  const u64 inv_lead = F.inv(b.back());
  for (size_t k = a.size(); k-- > db;) {
    const u64 c = F.mul(r[k], inv_lead);
    q[k - db] = c;
    if (c == 0) continue;
    const u64 nc = F.neg(c);
    for (size_t j = 0; j <= db; ++j) {
      r[k - db + j] = F.add(r[k - db + j], F.mul(nc, b[j]));
    }
  }
  r.resize(db);
  trim(r);
  trim(q);
  return {q, r};
}

Poly rem(const Field& F, const Poly& a, const Poly& b) {
  if (a.size() < b.size()) return a;
  return divrem(F, a, b).second;
}

Poly make_monic(const Field& F, const Poly& a) {
  if (a.empty()) return a;
  return scale(F, a, F.inv(a.back()));
}

Poly gcd(const Field& F, Poly a, Poly b) {
  while (!b.empty()) {
    Poly r = rem(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(F, a);
}

Bezout extended_gcd(const Field& F, const Poly& a, const Poly& b) {
  Poly r0 = a, r1 = b, s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
  while (!r1.empty()) {
    auto [q, r] = divrem(F, r0, r1);
    Poly s2 = sub(F, s0, mul(F, q, s1));
    Poly t2 = sub(F, t0, mul(F, q, t1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.empty()) return {{}, {}, {}};
  const u64 c = F.inv(r0.back());
  return {scale(F, r0, c), scale(F, s0, c), scale(F, t0, c)};
}

Poly derivative(const Field& F, const Poly& a) {
  if (a.size() <= 1) return {};
  Poly r(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) r[i - 1] = F.mul(a[i], i % F.prime());
  trim(r);
  return r;
}

Poly powmod(const Field& F, const Poly& base, const Integer& exponent, const Poly& modulus) {
  Poly result = rem(F, Poly{1}, modulus);
  Poly b = rem(F, base, modulus);
  const size_t bits = mpz_sizeinbase(exponent.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    result = rem(F, mul(F, result, result), modulus);
    if (mpz_tstbit(exponent.get_mpz_t(), i)) result = rem(F, mul(F, result, b), modulus);
  }
  return result;
}

u64 evaluate(const Field& F, const Poly& f, u64 x) {
  u64 acc = 0;
  for (size_t i = f.size(); i-- > 0;) acc = F.add(F.mul(acc, x), f[i]);
  return acc;
}

bool is_squarefree(const Field& F, const Poly& f) {
  if (degree(f) <= 0) return true;
  const Poly d = derivative(F, f);
  if (d.empty()) return false;
  return degree(gcd(F, f, d)) == 0;
}

Frobenius::Frobenius(const Field& F, const Poly& modulus) : F_(F), modulus_(modulus) {
  const int n = degree(modulus_);
  xp_ = powmod(F_, Poly{0, 1}, Integer(static_cast<unsigned long>(F_.prime())), modulus_);
  rows_.reserve(n);
  Poly cur = rem(F_, Poly{1}, modulus_);
  for (int i = 0; i < n; ++i) {
    rows_.push_back(cur);
    cur = rem(F_, mul(F_, cur, xp_), modulus_);
  }
}

Poly Frobenius::apply(const Poly& h) const {
  const Poly hr = rem(F_, h, modulus_);
  const size_t n = rows_.size();
  std::vector<u128> acc(n, 0);
  for (size_t i = 0; i < hr.size(); ++i) {
    if (hr[i] == 0) continue;
    const u128 c = hr[i];
    const Poly& row = rows_[i];
    for (size_t j = 0; j < row.size(); ++j) acc[j] += c * row[j];
  }
  Poly out(n);
  for (size_t j = 0; j < n; ++j) out[j] = static_cast<u64>(acc[j] % F_.prime());
  trim(out);
  return out;
}

std::vector<DegreeBlock> distinct_degree_factorization(const Field& F, const Poly& f) {
  std::vector<DegreeBlock> out;
  if (degree(f) <= 0) return out;
  if (degree(f) == 1) {
    out.push_back({f, 1});
    return out;
  }
  const Frobenius frob(F, f);
  const Poly x = Poly{0, 1};
  Poly w = rem(F, x, f);
  Poly cur = f;
  for (int d = 1; 2 * d <= degree(cur); ++d) {
    w = frob.apply(w);
    Poly g = gcd(F, cur, sub(F, w, x));
    if (degree(g) > 0) {
      out.push_back({g, d});
      cur = divrem(F, cur, g).first;
    }
  }
  if (degree(cur) > 0) out.push_back({make_monic(F, cur), degree(cur)});
  return out;
}

std::vector<int> degree_pattern(const Field& F, const Poly& f) {
  std::vector<int> pattern;
  for (const auto& block : distinct_degree_factorization(F, f)) {
    const int count = degree(block.product) / block.degree;
    pattern.insert(pattern.end(), count, block.degree);
  }
  std::sort(pattern.begin(), pattern.end());
  return pattern;
}

bool is_irreducible(const Field& F, const Poly& monic) {
  const int n = degree(monic);
  if (n <= 0) return false;
  if (n == 1) return true;
  std::vector<int> prime_divisors;
  for (int q = 2, m = n; q <= m; ++q) {
    if (m % q == 0) {
      prime_divisors.push_back(q);
      while (m % q == 0) m /= q;
    }
  }
  const Frobenius frob(F, monic);
  const Poly x = Poly{0, 1};
  Poly w = rem(F, x, monic);
  std::vector<Poly> powers(n + 1);
  powers[0] = w;
  for (int k = 1; k <= n; ++k) {
    w = frob.apply(w);
    powers[k] = w;
  }
  if (sub(F, powers[n], rem(F, x, monic)).size() != 0) return false;
  for (int q : prime_divisors) {
    if (degree(gcd(F, monic, sub(F, powers[n / q], x))) != 0) return false;
  }
  return true;
}

namespace {

void split_equal_degree(const Field& F, const Poly& g, int d, std::mt19937_64& rng,
                        std::vector<Poly>& out) {
  const int n = degree(g);
  if (n == d) {
    out.push_back(g);
    return;
  }
  const Frobenius frob(F, g);
  std::uniform_int_distribution<u64> coef(0, F.prime() - 1);
  const Integer half((static_cast<unsigned long>(F.prime()) - 1) / 2);
  for (;;) {
    Poly a(n);
    for (auto& c : a) c = coef(rng);
    trim(a);
    if (degree(a) <= 0) continue;
    Poly t = a, norm = a;
    for (int i = 1; i < d; ++i) {
      t = frob.apply(t);
      norm = rem(F, mul(F, norm, t), g);
    }
    Poly s = powmod(F, norm, half, g);
    Poly h = gcd(F, g, sub(F, s, Poly{1}));
    if (degree(h) > 0 && degree(h) < n) {
      split_equal_degree(F, h, d, rng, out);
      split_equal_degree(F, divrem(F, g, h).first, d, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<Poly> factor_squarefree(const Field& F, const Poly& f, std::mt19937_64& rng) {
  if (F.prime() == 2) throw InvalidInput("factor_squarefree: equal-degree split needs odd p");
  std::vector<Poly> out;
  for (const auto& block : distinct_degree_factorization(F, f)) {
    split_equal_degree(F, block.product, block.degree, rng, out);
  }
  std::sort(out.begin(), out.end(), [](const Poly& a, const Poly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

}  // namespace arboreal::modp
