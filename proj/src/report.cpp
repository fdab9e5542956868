#include "arboreal/report.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace arboreal::report {

Json real(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::stod(buf);
}

Json integer(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return to_string(z);
}

Json rational(const Rational& q) { return to_string(q); }

Json power_of_six(const Integer& exponent) {
  Integer v;
  mpz_pow_ui(v.get_mpz_t(), Integer(6).get_mpz_t(), exponent.get_ui());
  return Json{{"exact", to_string(v)}, {"power", "6^" + to_string(exponent)}};
}

namespace {

Json rationals(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(rational(q));
  return a;
}

Json valuation(const Valuation& v) {
  if (v.is_infinite()) return "inf";
  return v.value();
}

Json optional_rational(const std::optional<Rational>& q) { return q ? rational(*q) : Json(nullptr); }

}  // namespace

Json to_json(const CubicMap& f) {
  return Json{{"a", rational(f.a)}, {"b", rational(f.b)}, {"poly", to_string(f.poly())}};
}

Json to_json(const PolyMap& f) {
  Json j{{"poly", to_string(f.poly())}, {"degree", f.degree()}};
  if (auto c = f.as_cubic()) {
    j["a"] = rational(c->a);
    j["b"] = rational(c->b);
  }
  return j;
}

Json to_json(const IntFactorization& fz) {
  Json factors = Json::array();
  for (const auto& pp : fz.factors) factors.push_back(Json{{"p", integer(pp.prime)}, {"e", pp.exponent}});
  Json j{{"sign", fz.sign}, {"factors", factors}, {"complete", fz.complete()}};
  if (!fz.complete()) j["unfactored_cofactor"] = to_string(fz.composite_cofactor);
  return j;
}

Json to_json(const PolyFactorization& fz) {
  Json factors = Json::array();
  for (const auto& pf : fz.factors) {
    factors.push_back(Json{{"factor", to_string(pf.factor)}, {"multiplicity", pf.multiplicity}});
  }
  return Json{{"content", rational(fz.content)}, {"factors", factors}};
}

Json to_json(const OrbitStatus& s) {
  Json j{{"kind", s.preperiodic() ? "preperiodic" : "escaping"}};
  if (s.preperiodic()) {
    j["tail_length"] = s.tail_length;
    j["period"] = s.period;
  } else {
    j["escape_index"] = s.escape_index;
    j["height_at_escape"] = real(s.height_at_escape);
  }
  j["orbit"] = rationals(s.orbit);
  return j;
}

Json to_json(const OrbitMeeting& m) {
  Json j{{"found", m.witness.has_value()}};
  if (m.witness) {
    j["m"] = m.witness->m;
    j["n"] = m.witness->n;
  }
  if (m.same_index) j["same_index"] = m.same_index->m;
  j["absence_proven"] = m.absence_proven;
  j["searched_to"] = m.searched_to;
  j["reason"] = m.reason;
  return j;
}

Json to_json(const ConditionReport& r) {
  Json clauses = Json::array();
  for (const auto& c : r.clauses) {
    Json vals = Json::array();
    for (const auto& v : c.valuations) {
      vals.push_back(Json{{"quantity", v.quantity},
                          {"value", rational(v.value)},
                          {"valuation", valuation(v.valuation)},
                          {"relation", v.at_least ? ">=" : "="},
                          {"required", v.required}});
    }
    clauses.push_back(Json{{"label", std::string(1, c.label)},
                           {"statement", c.statement},
                           {"pass", c.pass},
                           {"valuations", vals}});
  }
  const char ff = r.first_failure();
  return Json{{"condition", r.condition == Condition::R ? "R" : "U"},
              {"prime", integer(r.prime)},
              {"n", r.n},
              {"satisfied", r.satisfied},
              {"first_failure", ff ? Json(std::string(1, ff)) : Json(nullptr)},
              {"clauses", clauses}};
}

Json to_json(const RPrimeSearch& s) {
  Json w = Json::array();
  for (const auto& pw : s.witnesses) w.push_back(to_json(pw.report));
  Json rej = Json::array();
  for (const auto& r : s.rejected) rej.push_back(to_json(r));
  Json j{{"target", rational(s.target)},
         {"factorization", to_json(s.factorization)},
         {"complete", s.complete},
         {"witnesses", w},
         {"rejected", rej}};
  if (s.postcritical) {
    j["postcritical"] = Json{{"start", rational(s.postcritical->start)}, {"index", s.postcritical->index}};
  }
  return j;
}

Json to_json(const CrossResult& r) {
  Json hyp = Json::array();
  for (const auto& h : r.hypotheses) hyp.push_back(Json{{"statement", h.statement}, {"holds", h.holds}});
  Json wit = Json::array();
  for (const auto& w : r.witnesses) {
    Json us = Json::array();
    for (const auto& u : w.u_reports) us.push_back(to_json(u));
    wit.push_back(Json{{"alpha", rational(w.alpha)},
                       {"prime", w.prime ? integer(*w.prime) : Json(nullptr)},
                       {"status", w.prime ? "witness" : "no witness found (not a refutation)"},
                       {"condition_U", us}});
  }
  return Json{{"hypotheses", hyp}, {"preconditions_hold", r.preconditions_hold}, {"witnesses", wit}};
}

Json to_json(const IrreducibilityCertificate& c) {
  Json j{{"kind", kind_name(c.kind)}, {"irreducible", c.irreducible}};
  if (c.kind == IrreducibilityCertificate::Kind::ModP || c.kind == IrreducibilityCertificate::Kind::Eisenstein) {
    j["prime"] = c.prime;
  }
  if (c.kind == IrreducibilityCertificate::Kind::Eisenstein) j["shift"] = c.shift;
  if (c.factors) j["factors"] = to_json(*c.factors);
  return j;
}

Json to_json(const StabilityEvidence& e) {
  Json rows = Json::array();
  for (const auto& r : e.rows) {
    rows.push_back(Json{{"n", r.n},
                        {"degree", r.degree},
                        {"factor_count", r.factor_count},
                        {"factor_degrees", r.factor_degrees},
                        {"multiplicities", r.multiplicities}});
  }
  return Json{{"mode", e.mode == TreeMode::Full ? "full" : "stunted"},
              {"rows", rows},
              {"beta_periodic", e.beta_periodic},
              {"stabilized", e.stabilized},
              {"truncated", e.truncated},
              {"status", "evidence only; eventual stability beyond the table is conjectural"}};
}

Json to_json(const LevelCertificate& c) {
  Json j{{"n", c.n},
         {"outcome", outcome_name(c.outcome)},
         {"prime", c.prime_witness ? integer(c.prime_witness->prime) : Json(nullptr)},
         {"irreducibility", c.irreducibility ? to_json(*c.irreducibility) : Json(nullptr)}};
  const Json order = power_of_six(c.group_exponent);
  j["group_order"] = order["power"];
  j["group_order_exact"] = order["exact"];
  j["certified"] = c.certified();
  j["detail"] = c.detail;
  j["condition_R"] = c.prime_witness ? to_json(c.prime_witness->report) : Json(nullptr);
  j["candidates"] = to_json(c.r_search);
  return j;
}

Json to_json(const Obstructions& o) {
  Json present = Json::array();
  for (const auto& p : o.present) present.push_back(p);
  Json periodic{{"periodic", o.periodic.periodic}};
  if (o.periodic.periodic) {
    periodic["period"] = o.periodic.period;
    periodic["cycle"] = rationals(o.periodic.cycle);
  }
  Json post{{"member", o.postcritical.member}};
  if (o.postcritical.member) {
    post["start"] = rational(o.postcritical.start);
    post["index"] = o.postcritical.index;
  }
  return Json{{"present", present},
              {"pcf", Json{{"pcf", o.pcf.pcf}, {"plus", to_json(o.pcf.plus)}, {"minus", to_json(o.pcf.minus)}}},
              {"a_zero", o.a_zero},
              {"postcritical", post},
              {"beta_periodic", periodic},
              {"critical_collision", o.a_zero ? Json(nullptr) : to_json(o.collision)},
              {"odd", o.odd},
              {"stability", to_json(o.stability)}};
}

Json to_json(const FiniteIndexReport& r) {
  Json levels = Json::array();
  for (const auto& l : r.levels) levels.push_back(to_json(l));
  return Json{{"map", to_json(r.map)},
              {"beta", rational(r.beta)},
              {"N", r.N},
              {"levels", levels},
              {"obstructions", to_json(r.obstructions)},
              {"certified_order", power_of_six(r.certified_exponent)},
              {"aut_order", power_of_six(r.aut_exponent)},
              {"all_certified", r.all_certified},
              {"budget_exhausted", r.budget_exhausted},
              {"conclusion", r.conclusion}};
}

Json to_json(const TreeShape& t) {
  Json vs = Json::array();
  for (const auto& v : t.vertices) {
    vs.push_back(Json{{"id", v.id},
                      {"parent", v.parent < 0 ? Json(nullptr) : Json(v.parent)},
                      {"level", v.level},
                      {"mark", v.marked},
                      {"tag", v.tag},
                      {"value", optional_rational(v.value)}});
  }
  Json tags = Json::array();
  for (const auto& g : t.tags) tags.push_back(to_string(g));
  return Json{{"level_sizes", t.level_sizes()}, {"vertices", vs}, {"tags", tags}};
}

Json to_json(const StuntedTree& t) {
  Json levels = Json::array();
  for (const auto& L : t.levels) {
    Json fs = Json::array();
    for (const auto& e : L.factors) {
      fs.push_back(Json{{"g", to_string(e.g)},
                        {"parent_factor", e.parent_factor < 0 ? Json(nullptr) : Json(e.parent_factor)},
                        {"children_per_vertex", e.children_per_vertex},
                        {"critical", e.critical},
                        {"critical_value", optional_rational(e.critical_value)},
                        {"tag", e.tag}});
    }
    levels.push_back(Json{{"level", L.level}, {"size", L.size()}, {"factors", fs}});
  }
  return Json{{"beta", rational(t.beta)},
              {"shape", to_json(t.shape)},
              {"factor_levels", levels},
              {"aut_order", to_string(rooted_aut_order(t.shape))}};
}

Json to_json(const Multitree& m) {
  Json classes = Json::array();
  for (const auto& c : m.partition.classes) {
    classes.push_back(Json{{"members", rationals(c.members)}, {"representatives", rationals(c.representatives)}});
  }
  Json comps = Json::array();
  for (const auto& c : m.components) {
    comps.push_back(Json{{"representative", rational(c.representative)},
                         {"members", rationals(c.members)},
                         {"depth", c.depth},
                         {"depth_extended", c.depth_extended},
                         {"aut_order", to_string(c.aut_order)},
                         {"tree", to_json(c.tree)}});
  }
  return Json{{"basepoints", rationals(m.basepoints)},
              {"classes", classes},
              {"partition_inconclusive", m.partition.inconclusive},
              {"partition_notes", m.partition.notes},
              {"components", comps},
              {"product_order", to_string(m.product_order)},
              {"H",
               Json{{"root_fixing", to_string(m.h_root_fixing)},
                    {"permuting", to_string(m.h_permuting)},
                    {"note", "root-fixing is the default; permuting swaps representatives with "
                             "isomorphic marked trees"}}},
              {"aut_order", to_string(m.aut_root_fixing)},
              {"aut_order_permuting", to_string(m.aut_permuting)}};
}

Json to_json(const IndexTrajectory& t) {
  Json es = Json::array();
  for (const auto& e : t.entries) {
    es.push_back(Json{{"n", e.n},
                      {"aut_order", to_string(e.aut_order)},
                      {"certified_order", e.certified_order ? Json(to_string(*e.certified_order)) : Json(nullptr)},
                      {"all_levels_certified", e.all_levels_certified}});
  }
  return Json{{"entries", es}, {"obstructions", t.obstructions}};
}

Json to_json(const CycleTypeDistribution& d) {
  Json counts = Json::array();
  for (const auto& [seq, k] : d.counts) {
    counts.push_back(Json{{"sequence", seq}, {"count", k}, {"frequency", real(d.frequency(seq))}});
  }
  return Json{{"total", d.total}, {"skipped", d.skipped}, {"counts", counts}};
}

Json to_json(const HeightValue& h) {
  return Json{{"value", real(h.value)}, {"error_bound", real(h.error_bound)}, {"preperiodic", h.preperiodic}};
}

Json to_json(const TransformBound& b) {
  return Json{{"C0", real(b.C0)}, {"escape_threshold", real(b.escape_threshold)}};
}

Json to_json(const GcdSeries& s) {
  Json es = Json::array();
  for (const auto& e : s.entries) {
    es.push_back(Json{{"n", e.n},
                      {"sum", e.sum ? real(*e.sum) : Json(nullptr)},
                      {"comparison", real(e.comparison)},
                      {"ratio", e.ratio ? real(*e.ratio) : Json(nullptr)},
                      {"witness", to_string(e.witness)}});
  }
  return Json{{"series", es},
              {"collision_regime", s.collision_regime},
              {"odd", s.odd},
              {"c_in_orbit", s.c_in_orbit},
              {"d_in_orbit", s.d_in_orbit},
              {"partial", s.partial}};
}

std::string render_tree_text(const Json& shape) {
  const Json& vs = shape.at("vertices");
  const Json& tags = shape.at("tags");
  std::vector<std::vector<int>> kids(vs.size());
  for (const auto& v : vs) {
    if (!v.at("parent").is_null()) kids[v.at("parent").get<int>()].push_back(v.at("id").get<int>());
  }
  std::ostringstream out;
  std::function<void(int)> rec = [&](int id) {
    const Json& v = vs.at(static_cast<std::size_t>(id));
    out << std::string(static_cast<std::size_t>(2 * v.at("level").get<int>()), ' ');
    if (!v.at("value").is_null()) {
      out << v.at("value").get<std::string>();
    } else {
      out << "root of " << tags.at(v.at("tag").get<std::size_t>()).get<std::string>();
    }
    if (v.at("mark").get<bool>()) out << " *";
    out << "\n";
    for (int c : kids[static_cast<std::size_t>(id)]) rec(c);
  };
  if (!vs.empty()) rec(0);
  return out.str();
}

}  // namespace arboreal::report
