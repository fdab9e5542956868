#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arboreal/dynamics.hpp"
#include "arboreal/integer_factor.hpp"

namespace arboreal {

enum class Condition { R, U };

struct ClauseValuation {
  std::string quantity;  // e.g. "f^2(-a) - beta"
  Rational value;
  Valuation valuation;
  long required = 0;
  bool at_least = false;  // clause demands valuation >= required rather than equality
};

struct Clause {
  char label = 'a';
  std::string statement;
  std::vector<ClauseValuation> valuations;
  bool pass = false;
};

struct ConditionReport {
  Condition condition = Condition::R;
  Integer prime;
  int n = 1;
  std::vector<Clause> clauses;
  bool satisfied = false;
  /// First failing clause label, or 0.
  char first_failure() const;
};

struct PrimeWitness {
  Integer prime;
  int n = 1;
  ConditionReport report;
};

/// Monic normal form: integral a, b at p and p != 3.
bool good_separable_reduction(const CubicMap& f, const Integer& p);

ConditionReport check_condition_R(const CubicMap& f, const Rational& beta, const Integer& p, int n);
ConditionReport check_condition_U(const CubicMap& f, const Rational& beta, const Integer& p, int n);

struct RPrimeSearch {
  std::vector<PrimeWitness> witnesses;  // ascending primes
  std::vector<ConditionReport> rejected;
  Rational target;                      // f^n(a) - beta
  IntFactorization factorization;       // of the numerator of target
  bool complete = true;                 // false when factorization was cut short
  std::optional<OrbitMembership> postcritical;  // set when the precondition fails
};

RPrimeSearch find_condition_R_primes(const CubicMap& f, const Rational& beta, int n, const Deadline& deadline = {});

struct CrossHypothesis {
  std::string statement;
  bool holds = true;
};

struct CrossWitness {
  Rational alpha;
  std::optional<Integer> prime;  // empty: no witness found (not a refutation)
  std::vector<ConditionReport> u_reports;
};

struct CrossResult {
  std::vector<CrossHypothesis> hypotheses;
  bool preconditions_hold = true;
  std::vector<CrossWitness> witnesses;
};

CrossResult cross_condition_witnesses(const CubicMap& f, const std::vector<Rational>& alphas, int n,
                                      const Deadline& deadline = {});

}  // namespace arboreal
