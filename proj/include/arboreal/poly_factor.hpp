#pragma once

#include <cstdint>
#include <vector>

#include "arboreal/errors.hpp"
#include "arboreal/poly.hpp"

namespace arboreal {

struct PolyFactor {
  UniPoly factor;  // monic, irreducible over Q
  int multiplicity = 1;
};

struct PolyFactorization {
  Rational content;  // leading coefficient of the input
  std::vector<PolyFactor> factors;
  UniPoly reconstruct() const;
};

struct PolyFactorOptions {
  int degree_cap = kDefaultDegreeCap;
  Deadline deadline{};
  std::uint64_t seed = 0x5DEECE66DULL;
  /// Candidate subsets tried during recombination before giving up with Inconclusive.
  std::uint64_t max_subsets = 1u << 22;
};

/// Irreducible factorization over Q, factors sorted by poly_less.
PolyFactorization factor_polynomial(const UniPoly& g, const PolyFactorOptions& options = {});

/// g / gcd(g, g'), monic.
UniPoly squarefree_part(const UniPoly& g);

/// Yun's decomposition of monic g into (squarefree polynomial, multiplicity), pairwise coprime.
std::vector<PolyFactor> squarefree_decomposition(const UniPoly& g);

/// Factors of a squarefree primitive integer polynomial with positive leading term.
std::vector<std::vector<Integer>> factor_squarefree_integer(const std::vector<Integer>& f,
                                                            const PolyFactorOptions& options = {});

/// Reduction of an integer polynomial mod p.
std::vector<std::uint64_t> reduce_mod(const std::vector<Integer>& f, std::uint64_t p);

}  // namespace arboreal
