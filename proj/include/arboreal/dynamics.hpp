#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arboreal/errors.hpp"
#include "arboreal/poly.hpp"

namespace arboreal {

/// f(x) = x^3 - 3a^2 x + b; critical points +a and -a.
struct CubicMap {
  Rational a;
  Rational b;
  UniPoly poly() const;
  Rational operator()(const Rational& x) const;
  friend bool operator==(const CubicMap&, const CubicMap&) = default;
};

/// Polynomial map of degree >= 2 over Q.
class PolyMap {
 public:
  explicit PolyMap(UniPoly poly);
  PolyMap(const CubicMap& f);  // NOLINT: cubic maps are used wherever a map is expected
  const UniPoly& poly() const { return poly_; }
  int degree() const { return poly_.degree(); }
  Rational operator()(const Rational& x) const { return poly_(x); }
  /// Odd polynomial: f(-x) = -f(x).
  bool is_odd() const;
  /// Recovers (a, b) when the polynomial is already a normal-form cubic with rational a.
  std::optional<CubicMap> as_cubic() const;

 private:
  UniPoly poly_;
};

class NotCubic : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Normalization needs an irrational parameter; carries a minimal polynomial over Q.
class NeedsExtension : public Error {
 public:
  NeedsExtension(const std::string& what, UniPoly minimal_polynomial)
      : Error(what), minimal_polynomial_(std::move(minimal_polynomial)) {}
  const UniPoly& minimal_polynomial() const { return minimal_polynomial_; }

 private:
  UniPoly minimal_polynomial_;
};

struct NormalizedCubic {
  CubicMap map;
  /// sigma(x) = lambda*x + mu with f = sigma o g o sigma^{-1}.
  Rational lambda;
  Rational mu;
  bool single_critical_point = false;
};

NormalizedCubic normalize_cubic(const Rational& c3, const Rational& c2, const Rational& c1, const Rational& c0);

Rational iterate_point(const PolyMap& f, const Rational& x, int n);

/// Symbolic f^n. For normal-form cubics the vanishing coefficient at degree 3^n - 1 is asserted.
UniPoly compose_poly(const PolyMap& f, int n, int degree_cap = kDefaultDegreeCap);

struct OrbitStatus {
  enum class Kind { Preperiodic, Escaping };
  Kind kind = Kind::Preperiodic;
  int tail_length = 0;
  int period = 0;
  int escape_index = 0;
  double height_at_escape = 0.0;
  /// x, f(x), ... up to the decision index (repeat point excluded, escape point included).
  std::vector<Rational> orbit;
  bool preperiodic() const { return kind == Kind::Preperiodic; }
};

OrbitStatus orbit_status(const PolyMap& f, const Rational& x);

struct PcfResult {
  bool pcf = false;
  OrbitStatus plus;   // orbit of +a
  OrbitStatus minus;  // orbit of -a
};
PcfResult is_pcf(const CubicMap& f);

struct CollisionWitness {
  int m = 0;
  int n = 0;
  bool same_n = false;
};

/// Search for f^m(y) = f^n(z) with min_index <= m, n <= bound, ordered by (m + n, m).
struct OrbitMeeting {
  std::optional<CollisionWitness> witness;
  std::optional<CollisionWitness> same_index;  // first m = n hit, if any within bound
  bool absence_proven = false;
  int searched_to = 0;
  std::string reason;
};
OrbitMeeting find_orbit_meeting(const PolyMap& f, const Rational& y, const Rational& z, int bound, int min_index);

inline constexpr int kDefaultCollisionBound = 12;

/// f^m(a) = f^n(-a) with m, n >= 1.
OrbitMeeting critical_collision(const CubicMap& f, int bound = kDefaultCollisionBound);

struct OrbitMembership {
  bool member = false;
  int index = 0;             // f^index(start) = target when member
  Rational start;            // critical point or base point whose orbit was searched
  bool proven = true;
};

/// Is target in {f^n(start) : n >= 1}?  Always conclusive.
OrbitMembership orbit_contains(const PolyMap& f, const Rational& start, const Rational& target);

OrbitMembership is_postcritical(const CubicMap& f, const Rational& beta);

struct PeriodicResult {
  bool periodic = false;
  int period = 0;
  std::vector<Rational> cycle;
  OrbitStatus status;
};
PeriodicResult is_periodic(const PolyMap& f, const Rational& beta);

bool is_odd(const CubicMap& f);

}  // namespace arboreal
