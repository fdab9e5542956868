#include "arboreal/ramification.hpp"

#include <algorithm>

namespace arboreal {

namespace {

std::string iterate_label(int i, bool minus) {
  std::string pt = minus ? "-a" : "a";
  if (i == 0) return pt + " - beta";
  return "f^" + std::to_string(i) + "(" + pt + ") - beta";
}

ClauseValuation measure(const std::string& what, const Rational& value, const Integer& p, long required) {
  return {what, value, valuation_unchecked(value, p), required, false};
}

bool all_equal(const std::vector<ClauseValuation>& vs) {
  return std::all_of(vs.begin(), vs.end(), [](const ClauseValuation& c) { return c.valuation == c.required; });
}

Clause separability_clause(const CubicMap& f, const Integer& p) {
  Clause c;
  c.label = 'a';
  c.statement = "good separable reduction";
  c.valuations.push_back(measure("a", f.a, p, 0));
  c.valuations.push_back(measure("b", f.b, p, 0));
  for (auto& v : c.valuations) v.at_least = true;
  c.pass = good_separable_reduction(f, p);
  return c;
}

std::vector<Rational> orbit_minus_beta(const CubicMap& f, const Rational& start, const Rational& beta, int n) {
  std::vector<Rational> out;
  Rational v = start;
  for (int i = 0; i <= n; ++i) {
    out.push_back(v - beta);
    v = f(v);
  }
  return out;
}

}  // namespace

char ConditionReport::first_failure() const {
  for (const auto& c : clauses) {
    if (!c.pass) return c.label;
  }
  return 0;
}

bool good_separable_reduction(const CubicMap& f, const Integer& p) {
  if (!is_probable_prime(p)) throw NotPrime(to_string(p) + " is not prime");
  if (p == 3) return false;
  return valuation_unchecked(f.a, p) >= 0 && valuation_unchecked(f.b, p) >= 0;
}

ConditionReport check_condition_R(const CubicMap& f, const Rational& beta, const Integer& p, int n) {
  if (n < 1) throw InvalidInput("Condition R needs n >= 1");
  ConditionReport r;
  r.condition = Condition::R;
  r.prime = p;
  r.n = n;
  r.clauses.push_back(separability_clause(f, p));
  const auto plus = orbit_minus_beta(f, f.a, beta, n);
  const auto minus = orbit_minus_beta(f, -f.a, beta, n);

  Clause b{'b', "v(f^i(-a) - beta) = 0 for 0 <= i <= n", {}, false};
  for (int i = 0; i <= n; ++i) b.valuations.push_back(measure(iterate_label(i, true), minus[i], p, 0));
  b.pass = all_equal(b.valuations);
  Clause c{'c', "v(f^i(a) - beta) = 0 for 0 <= i < n", {}, false};
  for (int i = 0; i < n; ++i) c.valuations.push_back(measure(iterate_label(i, false), plus[i], p, 0));
  c.pass = all_equal(c.valuations);
  Clause d{'d', "v(f^n(a) - beta) = 1", {measure(iterate_label(n, false), plus[n], p, 1)}, false};
  d.pass = all_equal(d.valuations);
  Clause e{'e', "v(beta) = 0", {measure("beta", beta, p, 0)}, false};
  e.pass = all_equal(e.valuations);
  for (auto* cl : {&b, &c, &d, &e}) r.clauses.push_back(std::move(*cl));
  r.satisfied = std::all_of(r.clauses.begin(), r.clauses.end(), [](const Clause& x) { return x.pass; });
  return r;
}

ConditionReport check_condition_U(const CubicMap& f, const Rational& beta, const Integer& p, int n) {
  if (n < 0) throw InvalidInput("Condition U needs n >= 0");
  ConditionReport r;
  r.condition = Condition::U;
  r.prime = p;
  r.n = n;
  r.clauses.push_back(separability_clause(f, p));
  const auto plus = orbit_minus_beta(f, f.a, beta, n);
  const auto minus = orbit_minus_beta(f, -f.a, beta, n);
  Clause b{'b', "v(f^i(a) - beta) = v(f^i(-a) - beta) = 0 for 0 <= i <= n", {}, false};
  for (int i = 0; i <= n; ++i) {
    b.valuations.push_back(measure(iterate_label(i, false), plus[i], p, 0));
    b.valuations.push_back(measure(iterate_label(i, true), minus[i], p, 0));
  }
  b.pass = all_equal(b.valuations);
  Clause c{'c', "v(beta) = 0", {measure("beta", beta, p, 0)}, false};
  c.pass = all_equal(c.valuations);
  r.clauses.push_back(std::move(b));
  r.clauses.push_back(std::move(c));
  r.satisfied = std::all_of(r.clauses.begin(), r.clauses.end(), [](const Clause& x) { return x.pass; });
  return r;
}

RPrimeSearch find_condition_R_primes(const CubicMap& f, const Rational& beta, int n, const Deadline& deadline) {
  if (n < 1) throw InvalidInput("Condition R needs n >= 1");
  RPrimeSearch out;
  const OrbitMembership pc = is_postcritical(f, beta);
  if (pc.member) {
    out.postcritical = pc;
    return out;
  }
  out.target = iterate_point(f, f.a, n) - beta;
  FactorOptions fo;
  fo.deadline = deadline;
  out.factorization = factor_integer(out.target.get_num(), fo);
  out.complete = out.factorization.complete();
  for (const auto& pp : out.factorization.factors) {
    ConditionReport rep = check_condition_R(f, beta, pp.prime, n);
    if (rep.satisfied) {
      out.witnesses.push_back({pp.prime, n, std::move(rep)});
    } else {
      out.rejected.push_back(std::move(rep));
    }
  }
  return out;
}

CrossResult cross_condition_witnesses(const CubicMap& f, const std::vector<Rational>& alphas, int n,
                                      const Deadline& deadline) {
  CrossResult out;
  const PolyMap g(f);
  const bool odd = is_odd(f);
  for (size_t i = 0; i < alphas.size(); ++i) {
    for (size_t j = 0; j < alphas.size(); ++j) {
      if (i == j) continue;
      if (alphas[i] == alphas[j]) {
        out.hypotheses.push_back({"alpha_" + std::to_string(i) + " = alpha_" + std::to_string(j), false});
        continue;
      }
      const bool in = orbit_contains(g, alphas[j], alphas[i]).member;
      out.hypotheses.push_back({to_string(alphas[i]) + " not in O_f(" + to_string(alphas[j]) + ")", !in});
      if (odd) {
        const bool in_neg = orbit_contains(g, -alphas[j], alphas[i]).member;
        out.hypotheses.push_back({to_string(alphas[i]) + " not in O_f(" + to_string(-alphas[j]) + ")", !in_neg});
      }
    }
  }
  out.preconditions_hold =
      std::all_of(out.hypotheses.begin(), out.hypotheses.end(), [](const CrossHypothesis& h) { return h.holds; });
  if (!out.preconditions_hold) return out;
  for (size_t i = 0; i < alphas.size(); ++i) {
    CrossWitness w;
    w.alpha = alphas[i];
    const RPrimeSearch cands = find_condition_R_primes(f, alphas[i], n, deadline);
    for (const auto& c : cands.witnesses) {
      std::vector<ConditionReport> us;
      bool ok = true;
      for (size_t j = 0; j < alphas.size() && ok; ++j) {
        if (j == i) continue;
        us.push_back(check_condition_U(f, alphas[j], c.prime, n));
        ok = us.back().satisfied;
      }
      if (ok) {
        w.prime = c.prime;
        w.u_reports = std::move(us);
        break;
      }
    }
    out.witnesses.push_back(std::move(w));
  }
  return out;
}

}  // namespace arboreal
