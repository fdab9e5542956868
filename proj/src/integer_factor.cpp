#include "arboreal/integer_factor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>

namespace arboreal {

namespace {

constexpr std::uint64_t kTrialLimit = 1'000'000;

const std::vector<std::uint64_t>& trial_primes() {
  static const std::vector<std::uint64_t> primes = primes_in_range(2, kTrialLimit);
  return primes;
}

// Brent's variant of Pollard rho; returns a nontrivial factor or 0 on failure.
Integer brent_rho(const Integer& n, std::mt19937_64& rng, const Deadline& deadline) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  std::uniform_int_distribution<unsigned long> dist(1, 1UL << 40);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Integer c = dist(rng) % n;
    if (c == 0) c = 1;
    Integer y = dist(rng) % n;
    Integer x, ys, q = 1, g = 1;
    const unsigned long m = 128;
    unsigned long r = 1;
    auto step = [&](Integer& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) step(y);
      unsigned long k = 0;
      do {
        ys = y;
        const unsigned long lim = std::min(m, r - k);
        for (unsigned long i = 0; i < lim; ++i) {
          step(y);
          Integer diff = x - y;
          q = q * abs(diff);
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
        deadline.check("integer factorization");
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1 && r < (1UL << 30));
    if (g == n) {
      do {
        step(ys);
        Integer diff = x - ys;
        diff = abs(diff);
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n && g != 1) return g;
  }
  return 0;
}

}  // namespace

Integer IntFactorization::reconstruct() const {
  Integer out = sign;
  for (const auto& pp : factors) {
    Integer pw;
    mpz_pow_ui(pw.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent);
    out *= pw;
  }
  return out * composite_cofactor;
}

bool is_probable_prime(const Integer& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  if (hi < 2 || lo > hi) return out;
  lo = std::max<std::uint64_t>(lo, 2);
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(hi))) + 1;
  std::vector<bool> small(root + 1, true);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = false;
  }
  const std::uint64_t segment = 1 << 18;
  for (std::uint64_t start = lo; start <= hi; start += segment) {
    const std::uint64_t end = std::min(hi, start + segment - 1);
    std::vector<bool> mark(end - start + 1, true);
    for (auto p : base) {
      if (p * p > end) break;
      std::uint64_t first = std::max(p * p, (start + p - 1) / p * p);
      for (std::uint64_t j = first; j <= end; j += p) mark[j - start] = false;
    }
    for (std::uint64_t i = start; i <= end; ++i) {
      if (mark[i - start]) out.push_back(i);
    }
    if (end == hi) break;
  }
  return out;
}

const std::vector<std::uint64_t>& first_primes(std::size_t count) {
  static std::mutex mu;
  static std::vector<std::uint64_t> cache;
  std::lock_guard lock(mu);
  std::uint64_t hi = 1000;
  while (cache.size() < count) {
    cache = primes_in_range(2, hi);
    hi *= 4;
  }
  return cache;
}

IntFactorization factor_integer(const Integer& n, const FactorOptions& options) {
  if (n == 0) throw InvalidInput("factor_integer: zero has no factorization");
  IntFactorization out;
  out.sign = sgn(n) < 0 ? -1 : 1;
  Integer rest = abs(n);
  std::map<Integer, unsigned> found;

  for (auto p : trial_primes()) {
    if (rest == 1) break;
    if (Integer(p) * p > rest) break;
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      unsigned e = 0;
      while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
        ++e;
      }
      found[Integer(p)] += e;
    }
  }

  std::mt19937_64 rng(options.seed);
  std::vector<Integer> pending;
  if (rest != 1) pending.push_back(rest);
  Integer unfactored = 1;
  while (!pending.empty()) {
    Integer m = pending.back();
    pending.pop_back();
    if (m == 1) continue;
    if (is_probable_prime(m)) {
      found[m] += 1;
      continue;
    }
    if (mpz_perfect_square_p(m.get_mpz_t())) {
      Integer r;
      mpz_sqrt(r.get_mpz_t(), m.get_mpz_t());
      pending.push_back(r);
      pending.push_back(r);
      continue;
    }
    Integer d;
    try {
      d = brent_rho(m, rng, options.deadline);
    } catch (const TimeBudgetExceeded&) {
      unfactored *= m;
      for (auto& rem : pending) unfactored *= rem;
      pending.clear();
      break;
    }
    if (d == 0) {
      unfactored *= m;
      continue;
    }
    Integer other = m / d;
    pending.push_back(d);
    pending.push_back(other);
  }

  for (auto& [p, e] : found) out.factors.push_back({p, e});
  out.composite_cofactor = unfactored;
  return out;
}

}  // namespace arboreal
