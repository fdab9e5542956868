#pragma once

#include <cstdint>
#include <vector>

#include "arboreal/errors.hpp"
#include "arboreal/rational.hpp"

namespace arboreal {

struct PrimePower {
  Integer prime;
  unsigned exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct IntFactorization {
  int sign = 1;
  /// Strictly increasing primes.
  std::vector<PrimePower> factors;
  /// Set only when a time budget stopped the search: the unfactored composite part.
  /// It is folded into reconstruct() so the round trip stays exact.
  Integer composite_cofactor = 1;

  bool complete() const { return composite_cofactor == 1; }
  Integer reconstruct() const;
};

struct FactorOptions {
  Deadline deadline{};
  std::uint64_t seed = 0x9E3779B97F4A7C15ULL;
};

/// Probable-prime test; deterministic below 2^64.
bool is_probable_prime(const Integer& n);

/// Trial division below 10^6, then Pollard rho with Brent's cycle detection.
/// When the deadline fires, the partial result has complete() == false.
IntFactorization factor_integer(const Integer& n, const FactorOptions& options = {});

/// Primes in [lo, hi] by a segmented sieve.
std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi);

/// The first `count` primes.
const std::vector<std::uint64_t>& first_primes(std::size_t count);

}  // namespace arboreal
