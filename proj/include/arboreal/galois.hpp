#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arboreal/dynamics.hpp"
#include "arboreal/poly_factor.hpp"
#include "arboreal/ramification.hpp"
#include "arboreal/trees.hpp"

namespace arboreal {

/// Discriminant of x^3 + P x + Q.
Rational cubic_discriminant(const Rational& P, const Rational& Q);

struct IrreducibilityCertificate {
  enum class Kind { RationalRootOnly, ModP, Eisenstein, FullFactorization };
  Kind kind = Kind::FullFactorization;
  bool irreducible = false;
  std::uint64_t prime = 0;  // ModP, Eisenstein
  long shift = 0;           // Eisenstein: applies to g(x + shift)
  std::optional<PolyFactorization> factors;  // present whenever the polynomial is reducible
};

std::string kind_name(IrreducibilityCertificate::Kind k);

/// Throws Inconclusive only when factorization exhausts its budget.
IrreducibilityCertificate prove_irreducible(const UniPoly& g, const PolyFactorOptions& options = {});

struct StabilityRow {
  int n = 0;
  int degree = 0;
  int factor_count = 0;  // distinct irreducible factors
  std::vector<int> factor_degrees;
  std::vector<int> multiplicities;
};

struct StabilityEvidence {
  TreeMode mode = TreeMode::Full;
  std::vector<StabilityRow> rows;
  bool beta_periodic = false;
  bool stabilized = false;  // last two counts agree
  bool truncated = false;   // degree budget stopped the table
};

StabilityEvidence eventual_stability_evidence(const PolyMap& f, const Rational& beta, int N, TreeMode mode,
                                              const PolyFactorOptions& options = {});

struct LevelCertificate {
  enum class Outcome { Certified, NoRPrime, NotIrreducible, Inconclusive };
  Outcome outcome = Outcome::Inconclusive;
  int n = 1;
  RPrimeSearch r_search;
  std::optional<PrimeWitness> prime_witness;
  std::optional<IrreducibilityCertificate> irreducibility;
  std::string detail;
  Integer group_order;   // 6^(3^(n-1)) when certified
  Integer group_exponent;  // 3^(n-1)
  bool certified() const { return outcome == Outcome::Certified; }
};

std::string outcome_name(LevelCertificate::Outcome o);

LevelCertificate level_certificate(const CubicMap& f, const Rational& beta, int n, const Deadline& deadline = {},
                                   const PolyFactorOptions& options = {});

struct Obstructions {
  PcfResult pcf;
  bool a_zero = false;
  OrbitMembership postcritical;
  PeriodicResult periodic;
  OrbitMeeting collision;
  bool odd = false;
  StabilityEvidence stability;
  std::vector<std::string> present;  // names of obstructions that fire
};

/// Obstruction checks plus full-mode stability evidence through level N.
Obstructions obstruction_checklist(const CubicMap& f, const Rational& beta, int N, const Deadline& deadline = {},
                                   const PolyFactorOptions& options = {});

struct FiniteIndexReport {
  CubicMap map;
  Rational beta;
  int N = 0;
  Obstructions obstructions;
  std::vector<LevelCertificate> levels;
  Integer certified_order;      // product of certified level orders
  Integer certified_exponent;   // log_6 of certified_order
  Integer aut_order;            // |Aut(T_N)|
  Integer aut_exponent;
  bool all_certified = false;
  bool budget_exhausted = false;
  std::string conclusion;
};

FiniteIndexReport finite_index_report(const CubicMap& f, const Rational& beta, int N,
                                      const Deadline& deadline = {}, const PolyFactorOptions& options = {});

using DegreeSequence = std::vector<int>;

struct CycleTypeDistribution {
  std::map<DegreeSequence, std::uint64_t> counts;
  std::uint64_t total = 0;
  std::uint64_t skipped = 0;
  double frequency(const DegreeSequence& s) const;
};

CycleTypeDistribution frobenius_sample(const PolyMap& f, const Rational& beta, int n, std::uint64_t prime_lo,
                                       std::uint64_t prime_hi, unsigned threads = 0);

class TooLarge : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

CycleTypeDistribution reference_cycle_distribution(int d, int n);

double total_variation(const CycleTypeDistribution& a, const CycleTypeDistribution& b);

}  // namespace arboreal
