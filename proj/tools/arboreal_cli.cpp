// Batch front end: one subcommand per pipeline, one JSON report per run.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "arboreal/report.hpp"

using namespace arboreal;
using report::Json;

namespace {

struct JobConfig {
  std::string map;
  std::optional<std::string> beta;
  std::vector<std::string> basepoints;
  std::optional<int> levels;
  std::optional<int> depth;
  std::uint64_t prime_lo = 1000;
  std::uint64_t prime_hi = 100000;
  std::uint64_t seed = 0x5DEECE66DULL;
  double budget_seconds = 60;
  int degree_cap = kDefaultDegreeCap;
  int bound = 8;
  double eps = 1e-7;
  std::string out;
};

struct Flags {
  std::string map, beta, config, out;
  std::vector<std::string> basepoints;
  int levels = 0, depth = 0, degree_cap = 0, bound = 0;
  std::uint64_t prime_lo = 0, prime_hi = 0, seed = 0;
  double budget = 0, eps = 0;
  std::map<std::string, CLI::Option*> opts;
  bool given(const std::string& k) const { return opts.at(k)->count() > 0; }
};

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw InvalidInput("expected a rational as string or integer, got " + j.dump());
}

std::string map_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_object()) return scalar_text(j.at("a")) + "," + scalar_text(j.at("b"));
  if (j.is_array()) {
    std::vector<Rational> c;
    for (const auto& x : j) c.push_back(parse_rational(scalar_text(x)));
    return to_string(UniPoly(c));
  }
  throw InvalidInput("map must be a polynomial string, {a, b}, or a coefficient list");
}

JobConfig resolve(const Flags& f) {
  JobConfig c;
  if (const char* env = std::getenv("ARBOREAL_BUDGET_SECONDS")) {
    try {
      c.budget_seconds = std::stod(env);
    } catch (const std::exception&) {
      throw InvalidInput(std::string("ARBOREAL_BUDGET_SECONDS is not a number: ") + env);
    }
  }
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw InvalidInput("cannot read config file " + f.config);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
    }
    try {
      if (j.contains("map")) c.map = map_text(j["map"]);
      if (j.contains("beta")) c.beta = scalar_text(j["beta"]);
      if (j.contains("basepoints")) {
        for (const auto& b : j["basepoints"]) c.basepoints.push_back(scalar_text(b));
      }
      if (j.contains("levels")) c.levels = j["levels"].get<int>();
      if (j.contains("depth")) c.depth = j["depth"].get<int>();
      if (j.contains("prime_lo")) c.prime_lo = j["prime_lo"].get<std::uint64_t>();
      if (j.contains("prime_hi")) c.prime_hi = j["prime_hi"].get<std::uint64_t>();
      if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
      if (j.contains("budget_seconds")) c.budget_seconds = j["budget_seconds"].get<double>();
      if (j.contains("degree_cap")) c.degree_cap = j["degree_cap"].get<int>();
      if (j.contains("bound")) c.bound = j["bound"].get<int>();
      if (j.contains("eps")) c.eps = j["eps"].get<double>();
      if (j.contains("out")) c.out = j["out"].get<std::string>();
    } catch (const Json::exception& e) {
      throw InvalidInput(std::string("bad config value: ") + e.what());
    }
  }
  if (f.given("--map")) c.map = f.map;
  if (f.given("--beta")) c.beta = f.beta;
  if (f.given("--basepoints")) c.basepoints = f.basepoints;
  if (f.given("--levels")) c.levels = f.levels;
  if (f.given("--depth")) c.depth = f.depth;
  if (f.given("--prime-lo")) c.prime_lo = f.prime_lo;
  if (f.given("--prime-hi")) c.prime_hi = f.prime_hi;
  if (f.given("--seed")) c.seed = f.seed;
  if (f.given("--budget-seconds")) c.budget_seconds = f.budget;
  if (f.given("--degree-cap")) c.degree_cap = f.degree_cap;
  if (f.given("--bound")) c.bound = f.bound;
  if (f.given("--eps")) c.eps = f.eps;
  if (f.given("--out")) c.out = f.out;
  if (c.map.empty()) throw InvalidInput("no map given (--map or config key map)");
  return c;
}

Json config_json(const JobConfig& c) {
  Json j{{"map", c.map}};
  j["beta"] = c.beta ? Json(*c.beta) : Json(nullptr);
  j["basepoints"] = c.basepoints;
  j["levels"] = c.levels ? Json(*c.levels) : Json(nullptr);
  j["depth"] = c.depth ? Json(*c.depth) : Json(nullptr);
  j["prime_lo"] = c.prime_lo;
  j["prime_hi"] = c.prime_hi;
  j["seed"] = c.seed;
  j["budget_seconds"] = report::real(c.budget_seconds);
  j["degree_cap"] = c.degree_cap;
  j["bound"] = c.bound;
  j["eps"] = report::real(c.eps);
  return j;
}

// The map as given, plus its normal form when the command needs one.
struct ResolvedMap {
  std::optional<UniPoly> poly;     // set when given as a polynomial
  std::optional<CubicMap> cubic;   // set when given as "a,b"
};

ResolvedMap parse_map(const std::string& s) {
  ResolvedMap m;
  if (s.find('x') != std::string::npos) {
    m.poly = parse_poly(s);
    return m;
  }
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw InvalidInput("map must be a polynomial in x or a pair a,b: '" + s + "'");
  m.cubic = CubicMap{parse_rational(s.substr(0, comma)), parse_rational(s.substr(comma + 1))};
  return m;
}

PolyMap as_polymap(const ResolvedMap& m) { return m.poly ? PolyMap(*m.poly) : PolyMap(*m.cubic); }

struct Normalized {
  CubicMap map;
  Rational lambda = 1, mu = 0;
  Rational to_normal(const Rational& x) const { return (x - mu) / lambda; }
  Json json(const std::string& original) const {
    return Json{{"given", original},
                {"normal_form", to_string(map.poly())},
                {"lambda", report::rational(lambda)},
                {"mu", report::rational(mu)},
                {"note", "points are moved by x -> (x - mu)/lambda before use"}};
  }
};

Normalized as_cubic(const ResolvedMap& m) {
  if (m.cubic) return Normalized{*m.cubic};
  const UniPoly& p = *m.poly;
  if (p.degree() != 3) throw NotCubic("command needs a cubic map, got degree " + std::to_string(p.degree()));
  const NormalizedCubic n = normalize_cubic(p.coeff(3), p.coeff(2), p.coeff(1), p.coeff(0));
  return Normalized{n.map, n.lambda, n.mu};
}

Rational require_beta(const JobConfig& c) {
  if (!c.beta) throw InvalidInput("this command needs --beta");
  return parse_rational(*c.beta);
}

std::vector<Rational> basepoints(const JobConfig& c) {
  std::vector<Rational> out;
  for (const auto& s : c.basepoints) out.push_back(parse_rational(s));
  return out;
}

PolyFactorOptions factor_options(const JobConfig& c, const Deadline& d) {
  PolyFactorOptions o;
  o.degree_cap = c.degree_cap;
  o.deadline = d;
  o.seed = c.seed;
  return o;
}

struct Outcome {
  Json body;
  bool budget_exhausted = false;
};

Outcome run_analyze(const JobConfig& c, const Deadline& d) {
  const auto rm = parse_map(c.map);
  const Normalized nz = as_cubic(rm);
  const Rational beta = nz.to_normal(require_beta(c));
  const int N = c.levels.value_or(4);
  const Obstructions ob = obstruction_checklist(nz.map, beta, N, d, factor_options(c, d));
  Json j{{"map", report::to_json(nz.map)}, {"normalization", nz.json(c.map)}, {"beta", report::rational(beta)}};
  j["obstructions"] = report::to_json(ob);
  Outcome out;
  try {
    j["stunted_stability"] =
        report::to_json(eventual_stability_evidence(PolyMap(nz.map), beta, N, TreeMode::Stunted, factor_options(c, d)));
  } catch (const TimeBudgetExceeded&) {
    j["stunted_stability"] = nullptr;
    out.budget_exhausted = true;
  }
  const PolyMap g(nz.map);
  j["transform_bound"] = report::to_json(transform_bound(g));
  j["canonical_heights"] = Json{{"beta", report::to_json(canonical_height(g, beta, c.eps))},
                                {"a", report::to_json(canonical_height(g, nz.map.a, c.eps))},
                                {"-a", report::to_json(canonical_height(g, -nz.map.a, c.eps))}};
  std::string concl = ob.present.empty() ? "no obstruction detected" : "obstructions present: ";
  for (std::size_t i = 0; i < ob.present.size(); ++i) concl += (i ? ", " : "") + ob.present[i];
  j["conclusion"] = concl;
  out.body = std::move(j);
  return out;
}

Outcome run_certify(const JobConfig& c, const Deadline& d) {
  const auto rm = parse_map(c.map);
  const Normalized nz = as_cubic(rm);
  const Rational beta = nz.to_normal(require_beta(c));
  const FiniteIndexReport r = finite_index_report(nz.map, beta, c.levels.value_or(2), d, factor_options(c, d));
  Outcome out;
  out.body = report::to_json(r);
  out.body["normalization"] = nz.json(c.map);
  out.budget_exhausted = r.budget_exhausted;
  return out;
}

Outcome run_primes(const JobConfig& c, const Deadline& d) {
  const auto rm = parse_map(c.map);
  const Normalized nz = as_cubic(rm);
  const int N = c.levels.value_or(2);
  Json j{{"map", report::to_json(nz.map)}, {"normalization", nz.json(c.map)}};
  Outcome out;
  if (c.beta) {
    const Rational beta = nz.to_normal(parse_rational(*c.beta));
    j["beta"] = report::rational(beta);
    Json searches = Json::array();
    for (int n = 1; n <= N; ++n) {
      const RPrimeSearch s = find_condition_R_primes(nz.map, beta, n, d);
      Json e = report::to_json(s);
      e["n"] = n;
      e["status"] = s.witnesses.empty() ? "no witness at this n (inconclusive, not a refutation)" : "witness found";
      if (!s.complete) out.budget_exhausted = true;
      searches.push_back(std::move(e));
    }
    j["condition_R"] = searches;
  }
  std::vector<Rational> alphas;
  for (const auto& b : basepoints(c)) alphas.push_back(nz.to_normal(b));
  if (!alphas.empty()) {
    j["cross"] = report::to_json(cross_condition_witnesses(nz.map, alphas, N, d));
    j["cross"]["n"] = N;
  }
  if (!c.beta && alphas.empty()) throw InvalidInput("primes needs --beta or --basepoints");
  out.body = std::move(j);
  return out;
}

Outcome run_tree(const JobConfig& c, const Deadline&) {
  const PolyMap f = as_polymap(parse_map(c.map));
  const Rational beta = require_beta(c);
  const int N = c.depth.value_or(2);
  const StuntedTree st = stunted_tree(f, beta, N, c.degree_cap);
  Json j{{"map", report::to_json(f)}, {"beta", report::rational(beta)}, {"depth", N}};
  j["tree"] = report::to_json(st);
  j["complete_aut_order"] = to_string(complete_aut_order(f.degree(), N));
  j["text"] = report::render_tree_text(j["tree"]["shape"]);
  return {std::move(j)};
}

Outcome run_multitree(const JobConfig& c, const Deadline&) {
  const PolyMap f = as_polymap(parse_map(c.map));
  const auto B = basepoints(c);
  if (B.empty()) throw InvalidInput("multitree needs --basepoints");
  const Multitree m = build_multitree(f, B, c.depth.value_or(1), c.bound, c.degree_cap);
  Json j{{"map", report::to_json(f)}, {"depth", c.depth.value_or(1)}};
  j["multitree"] = report::to_json(m);
  Json texts = Json::array();
  for (const auto& comp : j["multitree"]["components"]) texts.push_back(report::render_tree_text(comp["tree"]["shape"]));
  j["text"] = texts;
  return {std::move(j)};
}

Outcome run_sample(const JobConfig& c, const Deadline&) {
  const PolyMap f = as_polymap(parse_map(c.map));
  const Rational beta = require_beta(c);
  const int n = c.levels.value_or(1);
  const CycleTypeDistribution s = frobenius_sample(f, beta, n, c.prime_lo, c.prime_hi);
  Json j{{"map", report::to_json(f)}, {"beta", report::rational(beta)}, {"n", n}};
  j["prime_range"] = Json{{"lo", c.prime_lo}, {"hi", c.prime_hi}};
  j["sample"] = report::to_json(s);
  try {
    const CycleTypeDistribution ref = reference_cycle_distribution(f.degree(), n);
    j["reference"] = report::to_json(ref);
    j["total_variation"] = report::real(total_variation(s, ref));
  } catch (const TooLarge&) {
    j["reference"] = nullptr;
    j["total_variation"] = nullptr;
  }
  return {std::move(j)};
}

Outcome run_heights(const JobConfig& c, const Deadline&) {
  const PolyMap f = as_polymap(parse_map(c.map));
  std::vector<Rational> pts;
  if (c.beta) pts.push_back(parse_rational(*c.beta));
  for (const auto& b : basepoints(c)) pts.push_back(b);
  if (pts.empty()) throw InvalidInput("heights needs --beta or --basepoints");
  Json j{{"map", report::to_json(f)}, {"transform_bound", report::to_json(transform_bound(f))}};
  j["eps"] = report::real(c.eps);
  Json rows = Json::array();
  for (const auto& x : pts) {
    rows.push_back(Json{{"x", report::rational(x)},
                        {"weil_height", report::real(weil_height(x))},
                        {"canonical_height", report::to_json(canonical_height(f, x, c.eps))},
                        {"orbit", report::to_json(orbit_status(f, x))}});
  }
  j["points"] = rows;
  return {std::move(j)};
}

Outcome run_gcd_series(const JobConfig& c, const Deadline& d) {
  const auto rm = parse_map(c.map);
  const Normalized nz = as_cubic(rm);
  const auto B = basepoints(c);
  if (B.size() != 2) throw InvalidInput("gcd-series needs exactly two --basepoints c d");
  const Rational cc = nz.to_normal(B[0]), dd = nz.to_normal(B[1]);
  const int N = c.levels.value_or(8);
  const GcdSeries s = gcd_height_series(nz.map, cc, dd, N, d);
  Json j{{"map", report::to_json(nz.map)}, {"normalization", nz.json(c.map)}};
  j["c"] = report::rational(cc);
  j["d"] = report::rational(dd);
  j["N"] = N;
  j["gcd_series"] = report::to_json(s);
  return {std::move(j), s.partial};
}

void emit(const Json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw InvalidInput("cannot write " + out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact certificates for arboreal Galois representations of cubic maps over Q"};
  app.set_version_flag("--version", std::string("arboreal ") + ARBOREAL_VERSION);
  app.require_subcommand(1);

  using Runner = Outcome (*)(const JobConfig&, const Deadline&);
  const std::vector<std::tuple<std::string, std::string, Runner>> commands{
      {"analyze", "obstruction checklist, stability evidence, heights", run_analyze},
      {"certify", "level-by-level Galois certificates and the finite-index report", run_certify},
      {"primes", "Condition R witnesses, and cross witnesses for several basepoints", run_primes},
      {"tree", "stunted preimage tree", run_tree},
      {"multitree", "multitree over several basepoints", run_multitree},
      {"sample", "Frobenius cycle-type statistics", run_sample},
      {"heights", "Weil and canonical heights", run_heights},
      {"gcd-series", "gcd heights along the critical orbits", run_gcd_series},
  };
  std::vector<std::pair<CLI::App*, Runner>> subs;
  std::vector<Flags> per(commands.size());
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const auto& [name, help, runner] = commands[i];
    CLI::App* sub = app.add_subcommand(name, help);
    Flags& fl = per[i];
    fl.opts["--map"] = sub->add_option("--map", fl.map, "polynomial in x, or a,b for x^3 - 3a^2 x + b");
    fl.opts["--beta"] = sub->add_option("--beta", fl.beta, "basepoint");
    fl.opts["--basepoints"] = sub->add_option("--basepoints", fl.basepoints, "basepoints")->delimiter(',');
    fl.opts["--levels"] = sub->add_option("--levels", fl.levels, "levels / iterate count");
    fl.opts["--depth"] = sub->add_option("--depth", fl.depth, "tree depth");
    fl.opts["--prime-lo"] = sub->add_option("--prime-lo", fl.prime_lo, "lower prime bound (sample)");
    fl.opts["--prime-hi"] = sub->add_option("--prime-hi", fl.prime_hi, "upper prime bound (sample)");
    fl.opts["--seed"] = sub->add_option("--seed", fl.seed, "seed for randomized factoring");
    fl.opts["--budget-seconds"] = sub->add_option("--budget-seconds", fl.budget, "time budget");
    fl.opts["--degree-cap"] = sub->add_option("--degree-cap", fl.degree_cap, "polynomial degree budget");
    fl.opts["--bound"] = sub->add_option("--bound", fl.bound, "orbit search bound (multitree)");
    fl.opts["--eps"] = sub->add_option("--eps", fl.eps, "canonical height tolerance");
    fl.opts["--config"] = sub->add_option("--config", fl.config, "JSON config file; flags override it");
    fl.opts["--out"] = sub->add_option("--out", fl.out, "write the report here instead of stdout");
    subs.emplace_back(sub, runner);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::size_t which = 0;
  while (!subs[which].first->parsed()) ++which;
  const std::string command = std::get<0>(commands[which]);
  JobConfig cfg;
  try {
    cfg = resolve(per[which]);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const Json provenance{{"tool", "arboreal"},
                        {"version", ARBOREAL_VERSION},
                        {"command", command},
                        {"config", config_json(cfg)},
                        {"seed", cfg.seed},
                        {"budgets",
                         Json{{"seconds", report::real(cfg.budget_seconds)},
                              {"degree_cap", cfg.degree_cap},
                              {"prime_hi", cfg.prime_hi}}}};
  const Deadline deadline = Deadline::after(cfg.budget_seconds);
  try {
    Outcome o = subs[which].second(cfg, deadline);
    o.body["provenance"] = provenance;
    emit(o.body, cfg.out);
    return o.budget_exhausted ? 2 : 0;
  } catch (const BudgetExceeded& e) {
    Json partial{{"partial", true}, {"error", e.what()}, {"provenance", provenance}};
    try {
      emit(partial, cfg.out);
    } catch (const Error&) {
    }
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 2;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NeedsExtension& e) {
    std::cerr << "error: " << e.what() << " (needs a root of " << to_string(e.minimal_polynomial()) << ")\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
