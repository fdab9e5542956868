#include "arboreal/galois.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <thread>

#include "arboreal/integer_factor.hpp"
#include "arboreal/modp_poly.hpp"

namespace arboreal {

Rational cubic_discriminant(const Rational& P, const Rational& Q) {
  return Rational(-4 * P * P * P - 27 * Q * Q);
}

std::string kind_name(IrreducibilityCertificate::Kind k) {
  switch (k) {
    case IrreducibilityCertificate::Kind::RationalRootOnly: return "RationalRootOnly";
    case IrreducibilityCertificate::Kind::ModP: return "ModP";
    case IrreducibilityCertificate::Kind::Eisenstein: return "Eisenstein";
    case IrreducibilityCertificate::Kind::FullFactorization: return "FullFactorization";
  }
  return "?";
}

namespace {

constexpr int kModPSweep = 25;
constexpr std::size_t kRootCandidateCap = 20000;

std::vector<Integer> divisors(const IntFactorization& fz) {
  std::vector<Integer> out{Integer(1)};
  for (const auto& pp : fz.factors) {
    const std::size_t base = out.size();
    Integer pk = 1;
    for (int e = 1; e <= static_cast<int>(pp.exponent); ++e) {
      pk *= pp.prime;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  return out;
}

std::optional<IntFactorization> quick_factor(const Integer& n) {
  FactorOptions fo;
  fo.deadline = Deadline::after(0.5);
  try {
    IntFactorization fz = factor_integer(abs(n), fo);
    if (fz.complete()) return fz;
  } catch (const TimeBudgetExceeded&) {
  }
  return std::nullopt;
}

// q^n g(p/q) for integer coefficients c, low to high.
Integer homogeneous_value(const std::vector<Integer>& c, const Integer& p, const Integer& q) {
  const int n = static_cast<int>(c.size()) - 1;
  Integer s = c[n];
  Integer qk = 1;
  for (int i = n - 1; i >= 0; --i) {
    qk *= q;
    s = s * p + c[i] * qk;
  }
  return s;
}

enum class RootTest { Found, None, Skipped };

RootTest rational_root_test(const std::vector<Integer>& c) {
  if (c[0] == 0) return RootTest::Found;
  const auto f0 = quick_factor(c[0]);
  const auto fn = quick_factor(c.back());
  if (!f0 || !fn) return RootTest::Skipped;
  const auto ps = divisors(*f0);
  const auto qs = divisors(*fn);
  if (ps.size() * qs.size() > kRootCandidateCap) return RootTest::Skipped;
  for (const auto& q : qs) {
    for (const auto& p : ps) {
      if (gcd(p, q) != 1) continue;
      if (homogeneous_value(c, p, q) == 0 || homogeneous_value(c, Integer(-p), q) == 0) return RootTest::Found;
    }
  }
  return RootTest::None;
}

std::optional<Integer> eisenstein_prime(const std::vector<Integer>& c) {
  Integer g = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) g = gcd(g, c[i]);
  if (g <= 1) return std::nullopt;
  const auto fz = quick_factor(g);
  if (!fz) return std::nullopt;
  for (const auto& pp : fz->factors) {
    if (c.back() % pp.prime == 0) continue;
    if (c[0] % (pp.prime * pp.prime) == 0) continue;
    return pp.prime;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> modp_sweep(const std::vector<Integer>& c) {
  int good = 0;
  for (std::size_t count = 64;; count *= 2) {
    const auto& primes = first_primes(count);
    for (std::size_t i = count == 64 ? 0 : count / 2; i < primes.size(); ++i) {
      const std::uint64_t p = primes[i];
      if (c.back() % Integer(static_cast<unsigned long>(p)) == 0) continue;
      const modp::Field F(p);
      const modp::Poly gp = modp::make_monic(F, reduce_mod(c, p));
      if (!modp::is_squarefree(F, gp)) continue;
      if (modp::is_irreducible(F, gp)) return p;
      if (++good == kModPSweep) return std::nullopt;
    }
    if (count > 4096) return std::nullopt;
  }
}

IrreducibilityCertificate reducible(const UniPoly& g, const PolyFactorOptions& options) {
  IrreducibilityCertificate c;
  c.kind = IrreducibilityCertificate::Kind::FullFactorization;
  c.irreducible = false;
  c.factors = factor_polynomial(g, options);
  return c;
}

}  // namespace

IrreducibilityCertificate prove_irreducible(const UniPoly& g, const PolyFactorOptions& options) {
  const int n = g.degree();
  if (n < 1) throw InvalidInput("prove_irreducible needs a nonconstant polynomial");
  if (n > options.degree_cap) throw DegreeBudgetExceeded(n, options.degree_cap);
  IrreducibilityCertificate cert;
  cert.irreducible = true;
  if (n == 1) {
    cert.kind = IrreducibilityCertificate::Kind::FullFactorization;
    return cert;
  }
  const std::vector<Integer> c = to_primitive(g).primitive;
  const RootTest roots = rational_root_test(c);
  if (roots == RootTest::Found) return reducible(g, options);

  if (auto p = eisenstein_prime(c)) {
    cert.kind = IrreducibilityCertificate::Kind::Eisenstein;
    cert.prime = p->get_ui();
    return cert;
  }
  if (auto p = modp_sweep(c)) {
    cert.kind = IrreducibilityCertificate::Kind::ModP;
    cert.prime = *p;
    return cert;
  }
  for (long t = 1; t <= 5; ++t) {
    for (long s : {t, -t}) {
      const UniPoly shifted = compose(g, UniPoly(std::vector<Rational>{Rational(s), Rational(1)}));
      options.deadline.check("Eisenstein shifts");
      if (auto p = eisenstein_prime(to_primitive(shifted).primitive)) {
        cert.kind = IrreducibilityCertificate::Kind::Eisenstein;
        cert.prime = p->get_ui();
        cert.shift = s;
        return cert;
      }
    }
  }
  if (n <= 3 && roots == RootTest::None) {
    cert.kind = IrreducibilityCertificate::Kind::RationalRootOnly;
    return cert;
  }
  PolyFactorization fz = factor_polynomial(g, options);
  if (fz.factors.size() == 1 && fz.factors[0].multiplicity == 1) {
    cert.kind = IrreducibilityCertificate::Kind::FullFactorization;
    return cert;
  }
  cert.irreducible = false;
  cert.kind = IrreducibilityCertificate::Kind::FullFactorization;
  cert.factors = std::move(fz);
  return cert;
}

StabilityEvidence eventual_stability_evidence(const PolyMap& f, const Rational& beta, int N, TreeMode mode,
                                              const PolyFactorOptions& options) {
  if (N < 1) throw InvalidInput("stability table needs N >= 1");
  StabilityEvidence ev;
  ev.mode = mode;
  ev.beta_periodic = is_periodic(f, beta).periodic;
  if (mode == TreeMode::Full) {
    for (int n = 1; n <= N; ++n) {
      try {
        const UniPoly g = compose_poly(f, n, options.degree_cap) - UniPoly::constant(beta);
        const PolyFactorization fz = factor_polynomial(g, options);
        StabilityRow row;
        row.n = n;
        row.degree = g.degree();
        row.factor_count = static_cast<int>(fz.factors.size());
        for (const auto& pf : fz.factors) {
          row.factor_degrees.push_back(pf.factor.degree());
          row.multiplicities.push_back(pf.multiplicity);
        }
        ev.rows.push_back(std::move(row));
      } catch (const DegreeBudgetExceeded&) {
        ev.truncated = true;
        break;
      }
    }
  } else {
    std::optional<StuntedTree> st;
    for (int depth = N; depth >= 1 && !st; --depth) {
      try {
        st = stunted_tree(f, beta, depth, options.degree_cap);
      } catch (const DegreeBudgetExceeded&) {
        ev.truncated = true;
      }
    }
    if (st) {
      for (std::size_t n = 1; n < st->levels.size(); ++n) {
        StabilityRow row;
        row.n = static_cast<int>(n);
        row.degree = st->levels[n].size();
        row.factor_count = static_cast<int>(st->levels[n].factors.size());
        for (const auto& e : st->levels[n].factors) {
          row.factor_degrees.push_back(e.g.degree());
          row.multiplicities.push_back(1);
        }
        ev.rows.push_back(std::move(row));
      }
    }
  }
  const std::size_t r = ev.rows.size();
  ev.stabilized = r >= 2 && ev.rows[r - 1].factor_count == ev.rows[r - 2].factor_count;
  return ev;
}

std::string outcome_name(LevelCertificate::Outcome o) {
  switch (o) {
    case LevelCertificate::Outcome::Certified: return "Certified";
    case LevelCertificate::Outcome::NoRPrime: return "NoRPrime";
    case LevelCertificate::Outcome::NotIrreducible: return "NotIrreducible";
    case LevelCertificate::Outcome::Inconclusive: return "Inconclusive";
  }
  return "?";
}

LevelCertificate level_certificate(const CubicMap& f, const Rational& beta, int n, const Deadline& deadline,
                                   const PolyFactorOptions& options) {
  if (n < 1) throw InvalidInput("level certificate needs n >= 1");
  LevelCertificate lc;
  lc.n = n;
  mpz_ui_pow_ui(lc.group_exponent.get_mpz_t(), 3, static_cast<unsigned long>(n - 1));
  mpz_ui_pow_ui(lc.group_order.get_mpz_t(), 6, lc.group_exponent.get_ui());

  PolyFactorOptions opts = options;
  opts.deadline = deadline;
  const UniPoly g = compose_poly(PolyMap(f), n, opts.degree_cap) - UniPoly::constant(beta);
  bool inconclusive = false;
  try {
    lc.irreducibility = prove_irreducible(g, opts);
  } catch (const Inconclusive& e) {
    inconclusive = true;
    lc.detail = std::string("irreducibility undecided: ") + e.what();
  }
  if (lc.irreducibility && !lc.irreducibility->irreducible) {
    lc.outcome = LevelCertificate::Outcome::NotIrreducible;
    lc.detail = "f^" + std::to_string(n) + "(x) - beta is reducible";
    return lc;
  }
  lc.r_search = find_condition_R_primes(f, beta, n, deadline);
  if (inconclusive) {
    lc.outcome = LevelCertificate::Outcome::Inconclusive;
    return lc;
  }
  if (lc.r_search.witnesses.empty()) {
    if (lc.r_search.postcritical) {
      lc.outcome = LevelCertificate::Outcome::NoRPrime;
      lc.detail = "beta is postcritical";
    } else if (!lc.r_search.complete) {
      lc.outcome = LevelCertificate::Outcome::Inconclusive;
      lc.detail = "factorization of f^" + std::to_string(n) + "(a) - beta incomplete; cofactor " +
                  to_string(lc.r_search.factorization.composite_cofactor) + " unsearched";
    } else {
      lc.outcome = LevelCertificate::Outcome::NoRPrime;
      lc.detail = "no prime divisor of f^" + std::to_string(n) + "(a) - beta satisfies Condition R";
    }
    return lc;
  }
  lc.outcome = LevelCertificate::Outcome::Certified;
  lc.prime_witness = lc.r_search.witnesses.front();
  lc.detail = "Condition R at p = " + to_string(lc.prime_witness->prime) + ", " +
              kind_name(lc.irreducibility->kind) + " irreducibility";
  return lc;
}

Obstructions obstruction_checklist(const CubicMap& f, const Rational& beta, int N, const Deadline& deadline,
                                   const PolyFactorOptions& options) {
  Obstructions ob;
  const PolyMap g(f);
  ob.pcf = is_pcf(f);
  ob.a_zero = f.a == 0;
  ob.postcritical = is_postcritical(f, beta);
  ob.periodic = is_periodic(g, beta);
  if (!ob.a_zero) ob.collision = critical_collision(f);
  ob.odd = is_odd(f);
  PolyFactorOptions opts = options;
  opts.deadline = deadline;
  try {
    ob.stability = eventual_stability_evidence(g, beta, N, TreeMode::Full, opts);
  } catch (const TimeBudgetExceeded&) {
    ob.stability.truncated = true;
  } catch (const Inconclusive&) {
    ob.stability.truncated = true;
  }
  if (ob.pcf.pcf) ob.present.push_back("PCF");
  if (ob.a_zero) ob.present.push_back("single finite critical point");
  if (ob.postcritical.member) ob.present.push_back("postcritical");
  if (ob.periodic.periodic) ob.present.push_back("beta periodic");
  if (ob.collision.witness) ob.present.push_back("critical collision");
  return ob;
}

FiniteIndexReport finite_index_report(const CubicMap& f, const Rational& beta, int N, const Deadline& deadline,
                                      const PolyFactorOptions& options) {
  if (N < 1) throw InvalidInput("report needs N >= 1");
  FiniteIndexReport r;
  r.map = f;
  r.beta = beta;
  r.N = N;
  r.obstructions = obstruction_checklist(f, beta, N, deadline, options);
  PolyFactorOptions opts = options;
  opts.deadline = deadline;

  mpz_ui_pow_ui(r.aut_exponent.get_mpz_t(), 3, static_cast<unsigned long>(N));
  r.aut_exponent = (r.aut_exponent - 1) / 2;
  mpz_ui_pow_ui(r.aut_order.get_mpz_t(), 6, r.aut_exponent.get_ui());
  r.certified_order = 1;
  r.certified_exponent = 0;
  r.all_certified = true;
  std::vector<std::string> failures;
  for (int n = 1; n <= N; ++n) {
    try {
      deadline.check("level certificates");
      LevelCertificate lc = level_certificate(f, beta, n, deadline, opts);
      if (lc.certified()) {
        r.certified_order *= lc.group_order;
        r.certified_exponent += lc.group_exponent;
      } else {
        r.all_certified = false;
        failures.push_back("level " + std::to_string(n) + ": " + outcome_name(lc.outcome) +
                           (lc.detail.empty() ? "" : " (" + lc.detail + ")"));
      }
      r.levels.push_back(std::move(lc));
    } catch (const BudgetExceeded& e) {
      r.budget_exhausted = true;
      r.all_certified = false;
      failures.push_back("level " + std::to_string(n) + ": budget exhausted (" + e.what() + ")");
      break;
    }
  }
  const std::string tail = " No claim is made beyond level " + std::to_string(N) + ".";
  if (r.all_certified) {
    r.conclusion = "index 1 through level " + std::to_string(N) + " certified: |G_" + std::to_string(N) +
                   "| = |Aut(T_" + std::to_string(N) + ")| = 6^" + to_string(r.aut_exponent) + "." + tail;
  } else {
    std::string s = "not certified through level " + std::to_string(N) + "; ";
    for (std::size_t i = 0; i < failures.size(); ++i) s += (i ? "; " : "") + failures[i];
    s += ". The report cannot distinguish \"obstructed\" from \"witness not yet found\" at small n.";
    r.conclusion = s + tail;
  }
  if (!r.obstructions.present.empty()) {
    std::string s = " Obstructions present: ";
    for (std::size_t i = 0; i < r.obstructions.present.size(); ++i) s += (i ? ", " : "") + r.obstructions.present[i];
    r.conclusion += s + ".";
  }
  return r;
}

double CycleTypeDistribution::frequency(const DegreeSequence& s) const {
  if (total == 0) return 0.0;
  auto it = counts.find(s);
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

CycleTypeDistribution frobenius_sample(const PolyMap& f, const Rational& beta, int n, std::uint64_t prime_lo,
                                       std::uint64_t prime_hi, unsigned threads) {
  if (n < 1) throw InvalidInput("frobenius_sample needs n >= 1");
  long dn = 1;
  for (int i = 0; i < n; ++i) dn *= f.degree();
  if (dn > 729) throw DegreeBudgetExceeded(static_cast<int>(dn), 729);
  if (prime_hi >= (1ULL << 32)) throw InvalidInput("prime range must stay below 2^32");
  if (prime_lo > prime_hi) throw InvalidInput("empty prime range");

  const UniPoly g = compose_poly(f, n) - UniPoly::constant(beta);
  const std::vector<Integer> c = to_primitive(g).primitive;
  Integer bad = f.poly().coefficients().back().get_num();  // leading coefficient numerator
  for (const auto& q : f.poly().coefficients()) bad *= q.get_den();
  bad *= beta.get_den();
  const std::vector<std::uint64_t> primes = primes_in_range(prime_lo, prime_hi);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, primes.size() / 64)));
  std::vector<CycleTypeDistribution> parts(threads);
  auto work = [&](unsigned t) {
    CycleTypeDistribution& out = parts[t];
    const std::size_t lo = primes.size() * t / threads;
    const std::size_t hi = primes.size() * (t + 1) / threads;
    for (std::size_t i = lo; i < hi; ++i) {
      const std::uint64_t p = primes[i];
      const Integer P(static_cast<unsigned long>(p));
      if (bad % P == 0 || c.back() % P == 0) {
        ++out.skipped;
        continue;
      }
      const modp::Field F(p);
      const modp::Poly gp = modp::make_monic(F, reduce_mod(c, p));
      if (!modp::is_squarefree(F, gp)) {
        ++out.skipped;
        continue;
      }
      ++out.counts[modp::degree_pattern(F, gp)];
      ++out.total;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& th : pool) th.join();
  CycleTypeDistribution merged;
  for (const auto& part : parts) {
    for (const auto& [seq, k] : part.counts) merged.counts[seq] += k;
    merged.total += part.total;
    merged.skipped += part.skipped;
  }
  return merged;
}

namespace {

using Perm = std::vector<int>;

// All automorphisms of the complete d-ary tree of depth n, as permutations of the leaves.
std::vector<Perm> leaf_actions(int d, int n) {
  if (n == 0) return {Perm{0}};
  const std::vector<Perm> sub = leaf_actions(d, n - 1);
  const int m = static_cast<int>(sub[0].size());
  Perm sigma(d);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<Perm> out;
  do {
    std::vector<std::size_t> pick(d, 0);
    for (;;) {
      Perm p(static_cast<std::size_t>(d) * m);
      for (int i = 0; i < d; ++i) {
        for (int l = 0; l < m; ++l) p[i * m + l] = sigma[i] * m + sub[pick[i]][l];
      }
      out.push_back(std::move(p));
      int k = 0;
      while (k < d && ++pick[k] == sub.size()) pick[k++] = 0;
      if (k == d) break;
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;
}

DegreeSequence cycle_type(const Perm& p) {
  std::vector<bool> seen(p.size(), false);
  DegreeSequence out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = true;
      ++len;
    }
    out.push_back(len);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

CycleTypeDistribution reference_cycle_distribution(int d, int n) {
  if (d < 2 || n < 1) throw InvalidInput("reference distribution needs d >= 2, n >= 1");
  if (d > 7 || n > 6 || complete_aut_order(d, n) > 10000) {
    throw TooLarge("Aut(T_n) exceeds 10^4 elements");
  }
  CycleTypeDistribution out;
  for (const auto& p : leaf_actions(d, n)) {
    ++out.counts[cycle_type(p)];
    ++out.total;
  }
  return out;
}

double total_variation(const CycleTypeDistribution& a, const CycleTypeDistribution& b) {
  std::set<DegreeSequence> keys;
  for (const auto& [k, v] : a.counts) keys.insert(k);
  for (const auto& [k, v] : b.counts) keys.insert(k);
  double s = 0;
  for (const auto& k : keys) s += std::fabs(a.frequency(k) - b.frequency(k));
  return s / 2;
}

}  // namespace arboreal
