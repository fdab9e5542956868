#pragma once

#include <optional>
#include <vector>

#include "arboreal/dynamics.hpp"
#include "arboreal/errors.hpp"
#include "arboreal/rational.hpp"

namespace arboreal {

/// log max(|num|, den).
double weil_height(const Rational& q);

struct TransformBound {
  double C0 = 0.0;  // |h(f(x)) - d h(x)| <= C0 for every rational x
  /// Once h(x) exceeds this, heights along the orbit increase strictly and h_f(x) > 0.
  double escape_threshold = 0.0;
};

TransformBound transform_bound(const PolyMap& f);

struct HeightValue {
  double value = 0.0;
  double error_bound = 0.0;
  bool preperiodic = false;  // exact zero
  double lower() const { return value - error_bound; }
  double upper() const { return value + error_bound; }
};

HeightValue canonical_height(const PolyMap& f, const Rational& x, double eps);

struct GcdHeight {
  double finite_part = 0.0;
  double full = 0.0;
  Integer gcd;  // gcd of the numerators, the witness for finite_part
};

GcdHeight gcd_height(const Rational& x, const Rational& y);

struct GcdSeriesEntry {
  int n = 0;
  std::optional<double> sum;         // h0_gcd(f^n(a) - c, f^n(-a) - d); empty at orbit hits
  double comparison = 0.0;           // 3^n h_f(a)
  std::optional<double> ratio;       // sum / comparison
  Integer witness;                   // the numerator gcd
};

struct GcdSeries {
  std::vector<GcdSeriesEntry> entries;
  bool collision_regime = false;
  bool odd = false;
  bool c_in_orbit = false;
  bool d_in_orbit = false;
  bool partial = false;  // deadline hit
};

GcdSeries gcd_height_series(const CubicMap& f, const Rational& c, const Rational& d, int N,
                            const Deadline& deadline = {});

struct PrimeSupport {
  double sum = 0.0;
  std::vector<Integer> primes;
  double comparison = 0.0;  // 3^n h_f(gamma)
  bool complete = true;     // false when a factorization ran out of time
};

/// Sum of log p over primes dividing both f^m(gamma) - beta and f^n(gamma) - beta for some m in the window.
/// window = 0 means every 0 < m < n; otherwise n - window <= m < n.
PrimeSupport prime_support_sum(const CubicMap& f, const Rational& gamma, const Rational& beta, int n,
                               int window = 0, const Deadline& deadline = {});

}  // namespace arboreal
