#include "arboreal/poly_factor.hpp"

#include <algorithm>
#include <optional>
#include <random>

#include "arboreal/integer_factor.hpp"
#include "arboreal/modp_poly.hpp"

namespace arboreal {

UniPoly PolyFactorization::reconstruct() const {
  UniPoly r = UniPoly::constant(content);
  for (const auto& f : factors) r = r * pow(f.factor, static_cast<unsigned>(f.multiplicity));
  return r;
}

std::vector<PolyFactor> squarefree_decomposition(const UniPoly& g) {
  std::vector<PolyFactor> out;
  if (g.degree() < 1) return out;
  const UniPoly f = monic(g);
  const UniPoly df = derivative(f);
  const UniPoly a0 = gcd(f, df);
  UniPoly b = divrem(f, a0).first;
  UniPoly c = divrem(df, a0).first;
  UniPoly d = c - derivative(b);
  for (int i = 1; b.degree() > 0; ++i) {
    const UniPoly a = gcd(b, d);
    if (a.degree() > 0) out.push_back({monic(a), i});
    b = divrem(b, a).first;
    c = divrem(d, a).first;
    d = c - derivative(b);
  }
  return out;
}

UniPoly squarefree_part(const UniPoly& g) {
  if (g.is_zero()) return g;
  if (g.degree() == 0) return UniPoly::constant(Rational(1));
  const UniPoly f = monic(g);
  return monic(divrem(f, gcd(f, derivative(f))).first);
}

std::vector<std::uint64_t> reduce_mod(const std::vector<Integer>& f, std::uint64_t p) {
  modp::Field F(p);
  modp::Poly r(f.size());
  for (size_t i = 0; i < f.size(); ++i) r[i] = F.from_integer(f[i]);
  modp::trim(r);
  return r;
}

namespace {

using ZPoly = std::vector<Integer>;

void ztrim(ZPoly& f) {
  while (!f.empty() && sgn(f.back()) == 0) f.pop_back();
}

void reduce(ZPoly& f, const Integer& m) {
  for (auto& c : f) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  ztrim(f);
}

ZPoly zmul(const ZPoly& a, const ZPoly& b, const Integer& m) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, Integer(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  reduce(r, m);
  return r;
}

ZPoly zadd(const ZPoly& a, const ZPoly& b, const Integer& m, int sign = 1) {
  ZPoly r(std::max(a.size(), b.size()), Integer(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += sign * b[i];
  reduce(r, m);
  return r;
}

// b monic modulo m.
std::pair<ZPoly, ZPoly> zdivrem_monic(const ZPoly& a, const ZPoly& b, const Integer& m) {
  if (a.size() < b.size()) return {{}, a};
  ZPoly r = a;
  const size_t db = b.size() - 1;
  ZPoly q(a.size() - db, Integer(0));
  for (size_t k = a.size(); k-- > db;) {
    mpz_fdiv_r(r[k].get_mpz_t(), r[k].get_mpz_t(), m.get_mpz_t());
    const Integer c = r[k];
    q[k - db] = c;
    if (sgn(c) == 0) continue;
    for (size_t j = 0; j <= db; ++j) mpz_submul(r[k - db + j].get_mpz_t(), c.get_mpz_t(), b[j].get_mpz_t());
  }
  r.resize(db);
  reduce(r, m);
  ztrim(q);
  return {q, r};
}

ZPoly lift_poly(const modp::Poly& f) {
  ZPoly r(f.size());
  for (size_t i = 0; i < f.size(); ++i) r[i] = Integer(static_cast<unsigned long>(f[i]));
  return r;
}

Integer inverse_mod(const Integer& a, const Integer& m) {
  Integer r;
  if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t())) throw Error("Hensel lifting: leading coefficient not invertible");
  return r;
}

ZPoly make_monic_mod(ZPoly f, const Integer& m) {
  const Integer inv = inverse_mod(f.back(), m);
  for (auto& c : f) c *= inv;
  reduce(f, m);
  return f;
}

// F == lc(F) * prod(us) mod p, us monic and pairwise coprime mod p; returns monic lifts mod M = p^k.
void hensel_lift(const ZPoly& F, const std::vector<modp::Poly>& us, const modp::Field& Fp, const Integer& M,
                 const Deadline& deadline, std::vector<ZPoly>& out) {
  if (us.size() == 1) {
    ZPoly f = F;
    reduce(f, M);
    out.push_back(make_monic_mod(f, M));
    return;
  }
  deadline.check("Hensel lifting");
  const size_t half = us.size() / 2;
  const std::vector<modp::Poly> A(us.begin(), us.begin() + half), B(us.begin() + half, us.end());
  modp::Poly g0 = {Fp.from_integer(F.back())}, h0 = {1};
  for (const auto& u : A) g0 = modp::mul(Fp, g0, u);
  for (const auto& u : B) h0 = modp::mul(Fp, h0, u);
  const modp::Bezout bz = modp::extended_gcd(Fp, g0, h0);
  const Integer p(static_cast<unsigned long>(Fp.prime()));
  ZPoly g = lift_poly(g0), h = lift_poly(h0), s = lift_poly(bz.s), t = lift_poly(bz.t);
  Integer m = p;
  while (m < M) {
    const Integer m2 = m * m;
    const ZPoly e = zadd(F, zmul(g, h, m2), m2, -1);
    auto [q, r] = zdivrem_monic(zmul(s, e, m2), h, m2);
    g = zadd(zadd(g, zmul(t, e, m2), m2), zmul(q, g, m2), m2);
    h = zadd(h, r, m2);
    const ZPoly b = zadd(zadd(zmul(s, g, m2), zmul(t, h, m2), m2), ZPoly{Integer(1)}, m2, -1);
    auto [c, d] = zdivrem_monic(zmul(s, b, m2), h, m2);
    s = zadd(s, d, m2, -1);
    t = zadd(zadd(t, zmul(t, b, m2), m2, -1), zmul(c, g, m2), m2, -1);
    m = m2;
  }
  reduce(g, M);
  reduce(h, M);
  hensel_lift(make_monic_mod(g, M), A, Fp, M, deadline, out);
  hensel_lift(h, B, Fp, M, deadline, out);
}

Integer symmetric(const Integer& c, const Integer& M, const Integer& half) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), M.get_mpz_t());
  if (r > half) r -= M;
  return r;
}

std::optional<ZPoly> exact_divide(const ZPoly& a, const ZPoly& b) {
  if (a.size() < b.size()) return std::nullopt;
  ZPoly r = a;
  const size_t db = b.size() - 1;
  ZPoly q(a.size() - db, Integer(0));
  for (size_t k = a.size(); k-- > db;) {
    if (sgn(r[k]) == 0) continue;
    if (!mpz_divisible_p(r[k].get_mpz_t(), b.back().get_mpz_t())) return std::nullopt;
    Integer c;
    mpz_divexact(c.get_mpz_t(), r[k].get_mpz_t(), b.back().get_mpz_t());
    q[k - db] = c;
    for (size_t j = 0; j <= db; ++j) mpz_submul(r[k - db + j].get_mpz_t(), c.get_mpz_t(), b[j].get_mpz_t());
  }
  for (size_t i = 0; i < db; ++i) {
    if (sgn(r[i]) != 0) return std::nullopt;
  }
  ztrim(q);
  return q;
}

void primitive_positive(ZPoly& f) {
  Integer g = 0;
  for (const auto& c : f) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (sgn(f.back()) < 0) g = -g;
  for (auto& c : f) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

std::vector<bool> subset_sums(const std::vector<int>& degrees, int n) {
  std::vector<bool> s(static_cast<size_t>(n) + 1, false);
  s[0] = true;
  for (int d : degrees) {
    for (int k = n; k >= d; --k) {
      if (s[k - d]) s[k] = true;
    }
  }
  return s;
}

}  // namespace

std::vector<ZPoly> factor_squarefree_integer(const ZPoly& f_in, const PolyFactorOptions& options) {
  ZPoly f = f_in;
  ztrim(f);
  const int n = static_cast<int>(f.size()) - 1;
  if (n <= 1) return {f};
  if (n > options.degree_cap) throw DegreeBudgetExceeded(n, options.degree_cap);

  const int wanted = n <= 30 ? 30 : (n <= 100 ? 12 : 6);
  std::vector<bool> allowed(static_cast<size_t>(n) + 1, true);
  std::uint64_t best_p = 0;
  size_t best_count = 0;
  int good = 0;
  for (std::uint64_t p : first_primes(2000)) {
    if (p == 2) continue;
    if (good >= wanted) break;
    options.deadline.check("prime selection");
    modp::Field F(p);
    if (F.from_integer(f.back()) == 0) continue;
    modp::Poly fp = reduce_mod(f, p);
    if (!modp::is_squarefree(F, fp)) continue;
    ++good;
    const std::vector<int> pattern = modp::degree_pattern(F, modp::make_monic(F, fp));
    const std::vector<bool> sums = subset_sums(pattern, n);
    for (int k = 0; k <= n; ++k) allowed[k] = allowed[k] && sums[k];
    if (best_p == 0 || pattern.size() < best_count) {
      best_p = p;
      best_count = pattern.size();
    }
    if (std::count(allowed.begin() + 1, allowed.end() - 1, true) == 0) return {f};
  }
  if (best_p == 0) throw Error("no usable prime for factorization");

  const modp::Field Fp(best_p);
  std::mt19937_64 rng(options.seed);
  const std::vector<modp::Poly> us = modp::factor_squarefree(Fp, modp::make_monic(Fp, reduce_mod(f, best_p)), rng);
  if (us.size() == 1) return {f};

  // Coefficient bound for any integer factor of f, scaled by lc(f).
  Integer norm2 = 0;
  for (const auto& c : f) norm2 += c * c;
  Integer root;
  mpz_sqrt(root.get_mpz_t(), norm2.get_mpz_t());
  Integer bound = (root + 1) * abs(f.back());
  mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), static_cast<mp_bitcnt_t>(n + 1));
  Integer M = best_p;
  while (M <= bound) M *= static_cast<unsigned long>(best_p);
  const Integer half = M / 2;

  std::vector<ZPoly> lifted;
  hensel_lift(f, us, Fp, M, options.deadline, lifted);

  std::vector<ZPoly> found;
  std::vector<size_t> remaining(lifted.size());
  for (size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
  ZPoly cur = f;
  std::uint64_t tried = 0;
  size_t s = 1;
  while (2 * s <= remaining.size()) {
    bool split = false;
    std::vector<size_t> idx(s);
    for (size_t i = 0; i < s; ++i) idx[i] = i;
    const size_t r = remaining.size();
    for (;;) {
      int deg = 0;
      for (size_t i : idx) deg += static_cast<int>(lifted[remaining[i]].size()) - 1;
      if (allowed[deg]) {
        if (++tried > options.max_subsets) throw Inconclusive("factor recombination exceeded subset budget");
        if ((tried & 1023) == 0) options.deadline.check("factor recombination");
        const Integer lc = cur.back();
        bool plausible = true;
        if (sgn(cur[0]) != 0) {
          Integer c0 = lc;
          for (size_t i : idx) c0 = (c0 * lifted[remaining[i]][0]) % M;
          c0 = symmetric(c0, M, half);
          plausible = sgn(c0) != 0 && mpz_divisible_p(Integer(lc * cur[0]).get_mpz_t(), c0.get_mpz_t());
        }
        if (plausible) {
          ZPoly G{lc};
          for (size_t i : idx) G = zmul(G, lifted[remaining[i]], M);
          for (auto& c : G) c = symmetric(c, M, half);
          ztrim(G);
          primitive_positive(G);
          if (auto q = exact_divide(cur, G)) {
            found.push_back(G);
            cur = *q;
            primitive_positive(cur);
            std::vector<size_t> rest;
            for (size_t k = 0, j = 0; k < r; ++k) {
              if (j < s && idx[j] == k) {
                ++j;
              } else {
                rest.push_back(remaining[k]);
              }
            }
            remaining = std::move(rest);
            split = true;
            break;
          }
        }
      }
      // next combination
      size_t i = s;
      while (i > 0 && idx[i - 1] == r - s + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!split) ++s;
  }
  if (cur.size() > 1) found.push_back(cur);
  return found;
}

PolyFactorization factor_polynomial(const UniPoly& g, const PolyFactorOptions& options) {
  if (g.is_zero()) throw InvalidInput("factor_polynomial: zero polynomial");
  if (g.degree() > options.degree_cap) throw DegreeBudgetExceeded(g.degree(), options.degree_cap);
  PolyFactorization out;
  out.content = g.leading();
  for (const auto& part : squarefree_decomposition(g)) {
    for (const auto& z : factor_squarefree_integer(to_primitive(part.factor).primitive, options)) {
      out.factors.push_back({monic(from_integers(z)), part.multiplicity});
    }
  }
  std::sort(out.factors.begin(), out.factors.end(),
            [](const PolyFactor& a, const PolyFactor& b) { return poly_less(a.factor, b.factor); });
  return out;
}

}  // namespace arboreal
