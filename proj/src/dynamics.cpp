#include "arboreal/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "arboreal/heights.hpp"

namespace arboreal {

namespace {

bool rational_sqrt(const Rational& q, Rational& root) {
  if (sgn(q) < 0) return false;
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) return false;
  Integer n, d;
  mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
  root = make_rational(n, d);
  return true;
}

// Past this many nats a value has millions of digits; orbits are not extended further.
constexpr double kHeightCap = 2.0e6;

std::vector<Rational> orbit_prefix(const PolyMap& f, const Rational& x, int count) {
  std::vector<Rational> v{x};
  v.reserve(static_cast<size_t>(count) + 1);
  for (int k = 1; k <= count; ++k) {
    if (weil_height(v.back()) > kHeightCap) break;
    v.push_back(f(v.back()));
  }
  return v;
}

}  // namespace

UniPoly CubicMap::poly() const { return UniPoly(std::vector<Rational>{b, -3 * a * a, Rational(0), Rational(1)}); }

Rational CubicMap::operator()(const Rational& x) const { return x * x * x - 3 * a * a * x + b; }

PolyMap::PolyMap(UniPoly poly) : poly_(std::move(poly)) {
  if (poly_.degree() < 2) throw InvalidInput("map must have degree at least 2, got " + to_string(poly_));
}

PolyMap::PolyMap(const CubicMap& f) : poly_(f.poly()) {}

bool PolyMap::is_odd() const {
  for (int i = 0; i <= degree(); i += 2) {
    if (sgn(poly_.coeff(i)) != 0) return false;
  }
  return true;
}

std::optional<CubicMap> PolyMap::as_cubic() const {
  if (degree() != 3 || poly_.leading() != 1 || sgn(poly_.coeff(2)) != 0) return std::nullopt;
  Rational a;
  if (!rational_sqrt(-poly_.coeff(1) / 3, a)) return std::nullopt;
  return CubicMap{a, poly_.coeff(0)};
}

NormalizedCubic normalize_cubic(const Rational& c3, const Rational& c2, const Rational& c1, const Rational& c0) {
  if (sgn(c3) == 0) throw NotCubic("leading coefficient is zero");
  Rational lambda;
  if (!rational_sqrt(c3, lambda)) {
    throw NeedsExtension("monic conjugation needs sqrt(" + to_string(c3) + ")",
                         UniPoly(std::vector<Rational>{-c3, Rational(0), Rational(1)}));
  }
  const Rational mu = c2 / (3 * lambda);
  const UniPoly g(std::vector<Rational>{c0, c1, c2, c3});
  const UniPoly inner(std::vector<Rational>{-mu / lambda, 1 / lambda});
  const UniPoly f = compose(g, inner) * lambda + UniPoly::constant(mu);
  const Rational a2 = -f.coeff(1) / 3;
  Rational a;
  if (!rational_sqrt(a2, a)) {
    throw NeedsExtension("critical point a satisfies a^2 = " + to_string(a2),
                         UniPoly(std::vector<Rational>{-a2, Rational(0), Rational(1)}));
  }
  NormalizedCubic out;
  out.map = CubicMap{a, f.coeff(0)};
  out.lambda = lambda;
  out.mu = mu;
  out.single_critical_point = sgn(a) == 0;
  return out;
}

Rational iterate_point(const PolyMap& f, const Rational& x, int n) {
  if (n < 0) throw InvalidInput("iteration count must be nonnegative");
  Rational v = x;
  for (int i = 0; i < n; ++i) v = f(v);
  return v;
}

UniPoly compose_poly(const PolyMap& f, int n, int degree_cap) {
  if (n < 1) throw InvalidInput("compose_poly needs n >= 1");
  long deg = 1;
  for (int i = 0; i < n; ++i) {
    deg *= f.degree();
    if (deg > degree_cap) throw DegreeBudgetExceeded(static_cast<int>(std::min<long>(deg, 1L << 30)), degree_cap);
  }
  UniPoly r = f.poly();
  for (int i = 1; i < n; ++i) r = compose(f.poly(), r);
  if (f.as_cubic() || (f.degree() == 3 && f.poly().leading() == 1 && sgn(f.poly().coeff(2)) == 0)) {
    if (r.leading() != 1 || sgn(r.coeff(r.degree() - 1)) != 0) {
      throw std::logic_error("normal-form gap lost in compose_poly");
    }
  }
  return r;
}

OrbitStatus orbit_status(const PolyMap& f, const Rational& x) {
  const TransformBound tb = transform_bound(f);
  const double threshold = tb.escape_threshold * (1 + 1e-9) + 1e-9;
  OrbitStatus st;
  std::map<Rational, int> seen;
  Rational v = x;
  for (int k = 0;; ++k) {
    auto it = seen.find(v);
    if (it != seen.end()) {
      st.kind = OrbitStatus::Kind::Preperiodic;
      st.tail_length = it->second;
      st.period = k - it->second;
      return st;
    }
    const double h = weil_height(v);
    st.orbit.push_back(v);
    if (h > threshold) {
      st.kind = OrbitStatus::Kind::Escaping;
      st.escape_index = k;
      st.height_at_escape = h;
      return st;
    }
    seen.emplace(v, k);
    v = f(v);
  }
}

PcfResult is_pcf(const CubicMap& f) {
  PcfResult r;
  r.plus = orbit_status(f, f.a);
  r.minus = orbit_status(f, -f.a);
  r.pcf = r.plus.preperiodic() && r.minus.preperiodic();
  return r;
}

OrbitMeeting find_orbit_meeting(const PolyMap& f, const Rational& y, const Rational& z, int bound, int min_index) {
  OrbitMeeting out;
  const OrbitStatus sy = orbit_status(f, y);
  const OrbitStatus sz = orbit_status(f, z);
  const std::vector<Rational> oy = orbit_prefix(f, y, bound);
  const std::vector<Rational> oz = orbit_prefix(f, z, bound);
  out.searched_to = static_cast<int>(std::min(oy.size(), oz.size())) - 1;

  std::map<Rational, std::vector<int>> zi;
  for (int n = min_index; n < static_cast<int>(oz.size()); ++n) zi[oz[n]].push_back(n);
  for (int m = min_index; m < static_cast<int>(oy.size()); ++m) {
    auto it = zi.find(oy[m]);
    if (it == zi.end()) continue;
    for (int n : it->second) {
      if (!out.witness || m + n < out.witness->m + out.witness->n ||
          (m + n == out.witness->m + out.witness->n && m < out.witness->m)) {
        out.witness = CollisionWitness{m, n, m == n};
      }
      if (m == n && (!out.same_index || m < out.same_index->m)) out.same_index = CollisionWitness{m, n, true};
    }
  }
  if (out.witness) return out;

  if (sy.preperiodic() && sz.preperiodic()) {
    auto forward = [&](const OrbitStatus& s, const Rational& start) {
      std::vector<std::pair<Rational, int>> vals;
      Rational v = start;
      for (int k = 0; k < min_index + s.tail_length + s.period; ++k) {
        if (k >= min_index) vals.emplace_back(v, k);
        v = f(v);
      }
      return vals;
    };
    std::map<Rational, int> zs;
    for (auto& [v, k] : forward(sz, z)) zs.emplace(v, k);
    bool meets = false;
    for (auto& [v, k] : forward(sy, y)) {
      if (zs.count(v)) meets = true;
    }
    out.absence_proven = !meets;
    out.reason = meets ? "finite orbits meet beyond the search bound" : "finite orbits are disjoint";
    return out;
  }
  if (sy.preperiodic() != sz.preperiodic()) {
    out.absence_proven = true;
    out.reason = "one orbit is finite and the other escapes";
    return out;
  }
  const HeightValue hy = canonical_height(f, y, 1e-9);
  const HeightValue hz = canonical_height(f, z, 1e-9);
  const double lo = std::max(hy.lower(), 1e-300) / hz.upper();
  const double hi = hy.upper() / std::max(hz.lower(), 1e-300);
  const double ld = std::log(static_cast<double>(f.degree()));
  const long dlo = static_cast<long>(std::ceil(std::log(lo) / ld - 1e-12));
  const long dhi = static_cast<long>(std::floor(std::log(hi) / ld + 1e-12));
  if (dlo > dhi) {
    out.absence_proven = true;
    out.reason = "canonical-height ratio is not a power of the degree";
    return out;
  }
  if (dlo == 0 && dhi == 0 && f.is_odd() && z == -y) {
    // f^m(y) = -f^m(y) forces f^m(y) = 0, a fixed point of an odd map, but y escapes.
    out.absence_proven = true;
    out.reason = "odd map: only equal indices are height-compatible, and they force a fixed point";
    return out;
  }
  out.absence_proven = false;
  out.reason = "height ratio compatible with index shift " + std::to_string(dlo) +
               (dhi != dlo ? ".." + std::to_string(dhi) : std::string()) + "; absence holds only to the bound";
  return out;
}

OrbitMeeting critical_collision(const CubicMap& f, int bound) {
  if (bound < 1) throw InvalidInput("collision bound must be >= 1");
  return find_orbit_meeting(PolyMap(f), f.a, -f.a, bound, 1);
}

OrbitMembership orbit_contains(const PolyMap& f, const Rational& start, const Rational& target) {
  OrbitMembership out;
  out.start = start;
  const OrbitStatus st = orbit_status(f, start);
  const double ht = weil_height(target);
  Rational v = start;
  for (int k = 1;; ++k) {
    v = f(v);
    if (v == target) {
      out.member = true;
      out.index = k;
      return out;
    }
    if (st.preperiodic()) {
      if (k >= st.tail_length + st.period) return out;
    } else if (k >= st.escape_index && weil_height(v) > ht + 1e-9) {
      return out;
    }
  }
}

OrbitMembership is_postcritical(const CubicMap& f, const Rational& beta) {
  const PolyMap g(f);
  OrbitMembership p = orbit_contains(g, f.a, beta);
  if (p.member) return p;
  OrbitMembership m = orbit_contains(g, -f.a, beta);
  if (m.member) return m;
  return p;
}

PeriodicResult is_periodic(const PolyMap& f, const Rational& beta) {
  PeriodicResult r;
  r.status = orbit_status(f, beta);
  if (r.status.preperiodic() && r.status.tail_length == 0) {
    r.periodic = true;
    r.period = r.status.period;
    r.cycle = r.status.orbit;
  }
  return r;
}

bool is_odd(const CubicMap& f) { return sgn(f.b) == 0; }

}  // namespace arboreal
