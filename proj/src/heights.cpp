#include "arboreal/heights.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "arboreal/integer_factor.hpp"

namespace arboreal {

double weil_height(const Rational& q) {
  if (sgn(q) == 0) return 0.0;
  return std::max(log_abs(q.get_num()), log_abs(q.get_den()));
}

namespace {

double logp(double v) { return v > 0 ? v : 0.0; }

double log_abs_rational(const Rational& q) { return log_abs(q.get_num()) - log_abs(q.get_den()); }

// Primes at which some coefficient is non-integral or the leading coefficient is not a unit.
std::vector<Integer> bad_primes(const UniPoly& f) {
  std::set<Integer> out;
  auto add = [&](const Integer& z) {
    if (abs(z) <= 1) return;
    for (const auto& pp : factor_integer(z).factors) out.insert(pp.prime);
  };
  for (const auto& c : f.coefficients()) add(c.get_den());
  add(f.leading().get_num());
  return {out.begin(), out.end()};
}

struct LocalData {
  Integer p;
  double log_p;
  long min_val;   // min_i v_p(c_i)
  long lead_val;  // v_p(c_d)
  double e;       // per-place transform bound
  double log_escape;  // log R'_p
};

LocalData local_data(const UniPoly& f, const Integer& p) {
  LocalData L;
  L.p = p;
  L.log_p = log_abs(p);
  const int d = f.degree();
  L.min_val = 0;
  bool first = true;
  for (const auto& c : f.coefficients()) {
    if (sgn(c) == 0) continue;
    const long v = valuation_unchecked(c, p).value();
    if (first || v < L.min_val) L.min_val = v;
    first = false;
  }
  L.lead_val = valuation_unchecked(f.leading(), p).value();
  const double log_m = -static_cast<double>(L.min_val) * L.log_p;
  const double log_l = -static_cast<double>(L.lead_val) * L.log_p;
  L.e = std::max({logp(log_m), d * logp(log_m - log_l), logp(-log_l)});
  L.log_escape = std::max({0.0, log_m - log_l, -log_l / (d - 1)});
  return L;
}

struct ArchData {
  double e;
  double log_escape;  // log R_esc: beyond it |f(z)| = |c_d||z|^d (1 + delta), |delta| <= 1/2, |f(z)| >= |z|
  std::vector<double> abs_c;
};

double phi_ratio(const std::vector<double>& c, double r) {
  // sum_{i<d} |c_i| r^{i-d} / |c_d|
  const int d = static_cast<int>(c.size()) - 1;
  double s = 0;
  for (int i = 0; i < d; ++i) s += c[i] * std::pow(r, i - d);
  return s / c[d];
}

ArchData arch_data(const UniPoly& f) {
  ArchData A;
  const int d = f.degree();
  for (const auto& c : f.coefficients()) A.abs_c.push_back(std::fabs(c.get_d()));
  double S = 0;
  for (double v : A.abs_c) S += v;
  double R = 1.0;
  if (phi_ratio(A.abs_c, 1.0) > 0.5) {
    double lo = 1.0, hi = 2.0;
    while (phi_ratio(A.abs_c, hi) > 0.5) hi *= 2;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (phi_ratio(A.abs_c, mid) > 0.5 ? lo : hi) = mid;
    }
    R = hi * (1 + 1e-12);
  }
  const double cd = A.abs_c[d];
  A.e = std::max({logp(std::log(S)), d * std::log(R), logp(std::log(2 / cd))});
  A.log_escape = std::max(std::log(R), logp(std::log(2 / cd)) / (d - 1)) + 1e-12;
  return A;
}

double pad(double v) { return v * (1 + 1e-12) + 1e-12; }

// p-adic escape-rate function lim d^-k log+|f^k(x)|_p at a bad prime, within budget.
std::pair<double, double> local_height_padic(const UniPoly& f, const LocalData& L, const Rational& x,
                                             double budget) {
  const int d = f.degree();
  const double log_l = -static_cast<double>(L.lead_val) * L.log_p;
  const double bound = L.log_escape + L.e / (d - 1);
  int steps = 0;
  while (bound / std::pow(d, steps) > budget) ++steps;
  const long r = static_cast<long>(std::ceil(L.log_escape / L.log_p - 1e-12));
  const long loss = std::max(0L, -L.min_val) + (d - 1) * std::max(0L, r) + 1;
  long prec = (steps + 2) * loss + 32;
  const Integer& p = L.p;
  Rational z = x;
  for (int k = 0;; ++k) {
    if (sgn(z) == 0) {
      // zero to working precision: inside the bounded disk, so keep iterating
    } else {
      const long v = valuation_unchecked(z, p).value();
      const double log_abs_z = -static_cast<double>(v) * L.log_p;
      if (log_abs_z > L.log_escape && v < prec) {
        return {(log_abs_z + log_l / (d - 1)) / std::pow(d, k), 0.0};
      }
    }
    if (k >= steps) {
      const double half = 0.5 * bound / std::pow(d, k);
      return {half, half};
    }
    z = f(z);
    prec -= loss;
    // Replace z by an integer multiple of a power of p agreeing to absolute precision prec.
    if (sgn(z) != 0) {
      const long v = valuation_unchecked(z, p).value();
      if (v >= prec) {
        z = 0;
      } else {
        Integer num = z.get_num(), den = z.get_den();
        Integer pv;
        mpz_pow_ui(pv.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(std::labs(v)));
        if (v > 0) num /= pv;
        if (v < 0) den /= pv;
        Integer mod;
        mpz_pow_ui(mod.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(prec - v));
        Integer inv;
        mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
        Integer u = (num * inv) % mod;
        if (sgn(u) < 0) u += mod;
        z = v >= 0 ? Rational(u * pv) : make_rational(u, pv);
      }
    }
  }
}

// Archimedean escape-rate function, within budget.
std::pair<double, double> local_height_arch(const UniPoly& f, const ArchData& A, const Rational& x, double budget) {
  const int d = f.degree();
  const double cd = A.abs_c[d];
  const double log_cd = std::log(cd);
  const double bound = A.log_escape + A.e / (d - 1);
  int steps = 0;
  while (bound / std::pow(d, steps) > budget) ++steps;
  constexpr mp_bitcnt_t kBits = 640;
  const double unit = std::ldexp(1.0, -static_cast<int>(kBits) + 8);
  std::vector<mpf_class> c;
  for (const auto& q : f.coefficients()) c.emplace_back(q, kBits);
  mpf_class z(x, kBits);
  double abs_err = std::fabs(x.get_d()) * unit;
  auto log_abs_mpf = [](const mpf_class& v) {
    long e;
    const double m = mpf_get_d_2exp(&e, v.get_mpf_t());
    return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
  };
  auto deriv_bound = [&](double rr) {
    double s = 0;
    for (int i = 1; i <= d; ++i) s += i * A.abs_c[i] * std::pow(rr, i - 1);
    return s;
  };
  auto eval = [&](const mpf_class& w) {
    mpf_class acc(0, kBits);
    for (int i = d; i >= 0; --i) acc = acc * w + c[i];
    return acc;
  };
  // Bounded phase: absolute error.
  int k = 0;
  double lz = sgn(z) == 0 ? -1e300 : log_abs_mpf(z);
  while (lz <= A.log_escape || abs_err > 1e-6 * std::exp(std::min(lz, 700.0))) {
    if (k >= steps) {
      const double half = 0.5 * bound / std::pow(d, k);
      return {half, half};
    }
    const double rz = std::exp(std::min(lz, 700.0)) + abs_err;
    z = eval(z);
    ++k;
    lz = sgn(z) == 0 ? -1e300 : log_abs_mpf(z);
    abs_err = abs_err * deriv_bound(rz) + (std::exp(std::min(lz, 700.0)) + 1) * unit;
    if (abs_err > 1e-3) {
      // precision exhausted without escape; fall back to the disk bound at this depth
      const double half = 0.5 * bound / std::pow(d, k);
      if (half <= budget) return {half, half};
      throw Error("archimedean height iteration lost precision");
    }
  }
  // Escape phase: relative error.
  double rho = abs_err / std::exp(std::min(lz, 700.0));
  if (lz > 700) rho = abs_err;  // only reachable with abs_err already tiny
  for (;;) {
    const double t = phi_ratio(A.abs_c, std::exp(std::min(lz, 700.0)));
    const double tail = 2 * t / (d - 1);
    const double err = (tail + 2 * rho + 1e-15 * std::fabs(lz)) / std::pow(d, k);
    const double value = (lz + log_cd / (d - 1)) / std::pow(d, k);
    if (err <= budget || k > 400) return {value, err};
    // derivative-based relative error growth
    double tp = 0;
    const double rr = std::exp(std::min(lz, 700.0));
    for (int i = 1; i < d; ++i) tp += i * A.abs_c[i] * std::pow(rr, i - d);
    tp /= d * cd;
    rho = rho * d * std::pow(1 + rho, d - 1) * (1 + tp) / (1 - t) + unit;
    z = eval(z);
    ++k;
    lz = log_abs_mpf(z);
  }
}

}  // namespace

TransformBound transform_bound(const PolyMap& f) {
  const UniPoly& g = f.poly();
  const int d = g.degree();
  double C0 = arch_data(g).e;
  for (const auto& p : bad_primes(g)) C0 += local_data(g, p).e;
  TransformBound tb;
  tb.C0 = pad(C0);
  tb.escape_threshold = pad(tb.C0 / (d - 1));
  return tb;
}

HeightValue canonical_height(const PolyMap& f, const Rational& x, double eps) {
  if (!(eps > 0)) throw InvalidInput("canonical_height needs eps > 0");
  eps = std::max(eps, 1e-12);
  HeightValue out;
  if (orbit_status(f, x).preperiodic()) {
    out.preperiodic = true;
    return out;
  }
  const UniPoly& g = f.poly();
  const std::vector<Integer> bad = bad_primes(g);
  const double budget = eps / static_cast<double>(bad.size() + 3);

  // Good primes: the local function is log+|x|_p itself.
  double good = log_abs(x.get_den());
  for (const auto& p : bad) {
    good -= static_cast<double>(integer_valuation(x.get_den(), p)) * log_abs(p);
  }
  double value = good, err = 0;
  for (const auto& p : bad) {
    auto [v, e] = local_height_padic(g, local_data(g, p), x, budget);
    value += v;
    err += e;
  }
  auto [v, e] = local_height_arch(g, arch_data(g), x, budget);
  value += v;
  err += e;
  out.value = value;
  out.error_bound = err + 1e-14 * (1 + std::fabs(value));
  return out;
}

GcdHeight gcd_height(const Rational& x, const Rational& y) {
  if (sgn(x) == 0 || sgn(y) == 0) throw Undefined("gcd height of zero");
  GcdHeight g;
  mpz_gcd(g.gcd.get_mpz_t(), x.get_num_mpz_t(), y.get_num_mpz_t());
  g.finite_part = log_abs(g.gcd);
  g.full = g.finite_part + std::min(logp(log_abs_rational(abs(x))), logp(log_abs_rational(abs(y))));
  return g;
}

GcdSeries gcd_height_series(const CubicMap& f, const Rational& c, const Rational& d, int N,
                            const Deadline& deadline) {
  GcdSeries out;
  const PolyMap g(f);
  out.odd = is_odd(f);
  out.collision_regime = critical_collision(f).witness.has_value();
  out.c_in_orbit = orbit_contains(g, f.a, c).member;
  out.d_in_orbit = orbit_contains(g, -f.a, d).member;
  const HeightValue ha = canonical_height(g, f.a, 1e-9);
  Rational u = f.a, w = -f.a;
  double scale = 1;
  for (int n = 1; n <= N; ++n) {
    if (deadline.expired()) {
      out.partial = true;
      break;
    }
    u = f(u);
    w = f(w);
    scale *= 3;
    GcdSeriesEntry e;
    e.n = n;
    e.comparison = scale * ha.value;
    const Rational x = u - c, y = w - d;
    if (sgn(x) != 0 && sgn(y) != 0) {
      const GcdHeight gh = gcd_height(x, y);
      e.sum = gh.finite_part;
      e.witness = gh.gcd;
      if (e.comparison > 0) e.ratio = gh.finite_part / e.comparison;
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

PrimeSupport prime_support_sum(const CubicMap& f, const Rational& gamma, const Rational& beta, int n, int window,
                               const Deadline& deadline) {
  const PolyMap g(f);
  if (orbit_contains(g, gamma, beta).member) throw Undefined("beta lies in the forward orbit of gamma");
  PrimeSupport out;
  std::vector<Rational> orbit{gamma};
  for (int k = 1; k <= n; ++k) orbit.push_back(f(orbit.back()));
  const Integer target = Rational(orbit[n] - beta).get_num();
  std::set<Integer> primes;
  const int lo = window > 0 ? std::max(1, n - window) : 1;
  FactorOptions fo;
  fo.deadline = deadline;
  for (int m = lo; m < n; ++m) {
    Integer gm;
    const Integer num = Rational(orbit[m] - beta).get_num();
    mpz_gcd(gm.get_mpz_t(), num.get_mpz_t(), target.get_mpz_t());
    if (gm == 1) continue;
    IntFactorization fz = factor_integer(gm, fo);
    if (!fz.complete()) out.complete = false;
    for (const auto& pp : fz.factors) primes.insert(pp.prime);
  }
  out.primes.assign(primes.begin(), primes.end());
  for (const auto& p : out.primes) out.sum += log_abs(p);
  out.comparison = std::pow(3.0, n) * canonical_height(g, gamma, 1e-9).value;
  return out;
}

}  // namespace arboreal
