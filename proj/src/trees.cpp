#include "arboreal/trees.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "arboreal/galois.hpp"
#include "arboreal/heights.hpp"
#include "arboreal/poly_factor.hpp"

namespace arboreal {

namespace {

Integer factorial(unsigned long m) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), m);
  return r;
}

}  // namespace

Integer complete_aut_order(int d, int n) {
  if (d < 2 || n < 0) throw InvalidInput("complete_aut_order needs d >= 2, n >= 0");
  Integer dn;
  mpz_ui_pow_ui(dn.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(n));
  const Integer e = (dn - 1) / (d - 1);
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), factorial(static_cast<unsigned long>(d)).get_mpz_t(), e.get_ui());
  return r;
}

int TreeShape::depth() const {
  int m = 0;
  for (const auto& v : vertices) m = std::max(m, v.level);
  return m;
}

std::vector<int> TreeShape::level_sizes() const {
  std::vector<int> s(static_cast<size_t>(depth()) + 1, 0);
  for (const auto& v : vertices) ++s[v.level];
  return s;
}

TreeShape TreeShape::truncated(int n) const {
  TreeShape t;
  t.tags = tags;
  std::vector<int> remap(vertices.size(), -1);
  for (const auto& v : vertices) {
    if (v.level > n) continue;
    remap[v.id] = static_cast<int>(t.vertices.size());
    TreeVertex w = v;
    w.id = remap[v.id];
    w.children.clear();
    if (v.parent >= 0) w.parent = remap[v.parent];
    t.vertices.push_back(w);
  }
  for (auto& w : t.vertices) {
    if (w.parent >= 0) t.vertices[w.parent].children.push_back(w.id);
  }
  return t;
}

TreeShape complete_tree(int d, int n) {
  TreeShape t;
  t.tags.push_back(UniPoly::identity());
  t.vertices.push_back(TreeVertex{});
  size_t start = 0;
  for (int level = 1; level <= n; ++level) {
    const size_t end = t.vertices.size();
    for (size_t p = start; p < end; ++p) {
      for (int c = 0; c < d; ++c) {
        TreeVertex v;
        v.id = static_cast<int>(t.vertices.size());
        v.parent = static_cast<int>(p);
        v.level = level;
        t.vertices[p].children.push_back(v.id);
        t.vertices.push_back(v);
      }
    }
    start = end;
  }
  return t;
}

int FactorLevel::size() const {
  int s = 0;
  for (const auto& f : factors) s += f.g.degree();
  return s;
}

StuntedTree stunted_tree(const PolyMap& f, const Rational& beta, int N, int degree_cap) {
  if (N < 0) throw InvalidInput("tree depth must be nonnegative");
  long dn = 1;
  for (int i = 0; i < N; ++i) {
    dn *= f.degree();
    if (dn > degree_cap) throw DegreeBudgetExceeded(static_cast<int>(std::min<long>(dn, 1L << 30)), degree_cap);
  }
  StuntedTree st;
  st.beta = beta;
  const UniPoly root_poly(std::vector<Rational>{-beta, Rational(1)});
  FactorLevel L0;
  L0.level = 0;
  L0.factors.push_back(FactorEntry{root_poly, -1, 0, false, std::nullopt, 0});
  st.levels.push_back(L0);
  st.shape.tags.push_back(root_poly);
  UniPoly seen = root_poly;  // product of every strict-level polynomial so far

  for (int n = 1; n <= N; ++n) {
    FactorLevel L;
    L.level = n;
    FactorLevel& prev = st.levels[n - 1];
    UniPoly level_product = UniPoly::constant(Rational(1));
    for (size_t i = 0; i < prev.factors.size(); ++i) {
      FactorEntry& parent = prev.factors[i];
      const UniPoly pulled = compose(parent.g, f.poly());
      if (pulled.degree() > degree_cap) throw DegreeBudgetExceeded(pulled.degree(), degree_cap);
      const UniPoly sq = squarefree_part(pulled);
      parent.critical = sq.degree() < pulled.degree();
      if (parent.critical && parent.g.degree() == 1) parent.critical_value = -parent.g.coeff(0) / parent.g.coeff(1);
      const UniPoly fresh = monic(divrem(sq, gcd(sq, seen)).first);
      if (fresh.degree() % parent.g.degree() != 0) {
        throw std::logic_error("strict preimage count is not a multiple of the factor degree");
      }
      parent.children_per_vertex = fresh.degree() / parent.g.degree();
      if (fresh.degree() == 0) continue;
      PolyFactorOptions opts;
      opts.degree_cap = degree_cap;
      for (const auto& pf : factor_polynomial(fresh, opts).factors) {
        if (pf.factor.degree() % parent.g.degree() != 0) {
          throw std::logic_error("child factor degree is not a multiple of the parent degree");
        }
        FactorEntry e;
        e.g = pf.factor;
        e.parent_factor = static_cast<int>(i);
        e.tag = static_cast<int>(st.shape.tags.size());
        st.shape.tags.push_back(pf.factor);
        L.factors.push_back(e);
      }
      level_product = level_product * fresh;
    }
    seen = seen * level_product;
    st.levels.push_back(std::move(L));
  }
  // The last level's child counts are unknown without one more pullback; leave them at 0 and uncritical.

  auto& V = st.shape.vertices;
  TreeVertex root;
  root.tag = 0;
  root.value = beta;
  V.push_back(root);
  std::vector<int> frontier{0};
  for (int n = 1; n <= N; ++n) {
    std::vector<int> next;
    const FactorLevel& L = st.levels[n];
    const FactorLevel& P = st.levels[n - 1];
    for (int pv : frontier) {
      const int pf = [&] {
        for (size_t i = 0; i < P.factors.size(); ++i) {
          if (P.factors[i].tag == V[pv].tag) return static_cast<int>(i);
        }
        return -1;
      }();
      const int pdeg = P.factors[pf].g.degree();
      for (const auto& e : L.factors) {
        if (e.parent_factor != pf) continue;
        const int copies = e.g.degree() / pdeg;
        for (int c = 0; c < copies; ++c) {
          TreeVertex v;
          v.id = static_cast<int>(V.size());
          v.parent = pv;
          v.level = n;
          v.tag = e.tag;
          if (e.g.degree() == 1) v.value = -e.g.coeff(0);
          V[pv].children.push_back(v.id);
          next.push_back(v.id);
          V.push_back(v);
        }
      }
    }
    frontier = std::move(next);
  }
  return st;
}

Integer rooted_aut_order(const TreeShape& shape) {
  const size_t n = shape.vertices.size();
  if (n == 0) return 1;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return shape.vertices[x].level > shape.vertices[y].level; });
  std::map<std::pair<long, std::vector<int>>, int> canon_ids;
  std::vector<int> canon(n, 0);
  std::vector<Integer> aut(n, Integer(1));
  for (int v : order) {
    const TreeVertex& tv = shape.vertices[v];
    std::vector<int> kids;
    Integer a = 1;
    for (int c : tv.children) {
      kids.push_back(canon[c]);
      a *= aut[c];
    }
    std::sort(kids.begin(), kids.end());
    for (size_t i = 0; i < kids.size();) {
      size_t j = i;
      while (j < kids.size() && kids[j] == kids[i]) ++j;
      a *= factorial(j - i);
      i = j;
    }
    const long color = tv.marked ? static_cast<long>(v) + 1 : 0;
    auto key = std::make_pair(color, kids);
    auto it = canon_ids.find(key);
    if (it == canon_ids.end()) it = canon_ids.emplace(key, static_cast<int>(canon_ids.size())).first;
    canon[v] = it->second;
    aut[v] = a;
  }
  return aut[0];
}

std::string canonical_form(const TreeShape& shape) {
  std::function<std::string(int)> rec = [&](int v) {
    std::vector<std::string> kids;
    for (int c : shape.vertices[v].children) kids.push_back(rec(c));
    std::sort(kids.begin(), kids.end());
    std::string s = shape.vertices[v].marked ? "(*" : "(";
    for (const auto& k : kids) s += k;
    return s + ")";
  };
  return shape.vertices.empty() ? std::string() : rec(0);
}

namespace {

struct ForwardHit {
  int target = -1;  // index into B
  int steps = 0;
};

// First element of B met by the forward orbit of B[i] (the point itself counts only on return).
ForwardHit first_hit(const PolyMap& f, const std::vector<Rational>& B, size_t i) {
  std::map<Rational, int> index;
  double hmax = 0;
  for (size_t j = 0; j < B.size(); ++j) {
    index.emplace(B[j], static_cast<int>(j));
    hmax = std::max(hmax, weil_height(B[j]));
  }
  const OrbitStatus st = orbit_status(f, B[i]);
  Rational v = B[i];
  for (int k = 1;; ++k) {
    v = f(v);
    if (auto it = index.find(v); it != index.end()) return {it->second, k};
    if (st.preperiodic()) {
      if (k >= st.tail_length + st.period) return {};
    } else if (k >= st.escape_index && weil_height(v) > hmax + 1e-9) {
      return {};
    }
  }
}

int find_root(std::vector<int>& uf, int x) {
  while (uf[x] != x) x = uf[x] = uf[uf[x]];
  return x;
}

struct Components {
  std::vector<int> root;   // component root (representative) of each basepoint
  std::vector<int> depth;  // first k with f^k(B[i]) = B[root[i]]
  std::vector<ForwardHit> next;
};

Components forward_components(const PolyMap& f, const std::vector<Rational>& B) {
  Components c;
  const size_t n = B.size();
  for (size_t i = 0; i < n; ++i) {
    ForwardHit h = first_hit(f, B, i);
    if (h.target == static_cast<int>(i)) h = {};  // periodic point returning to itself
    c.next.push_back(h);
  }
  c.root.assign(n, -1);
  c.depth.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    std::vector<int> path;
    std::set<int> on_path;
    int cur = static_cast<int>(i);
    while (c.next[cur].target >= 0 && !on_path.count(cur)) {
      path.push_back(cur);
      on_path.insert(cur);
      cur = c.next[cur].target;
    }
    int r;
    if (c.next[cur].target < 0) {
      r = cur;
    } else {
      // cycle: pick its member listed first in B
      r = cur;
      auto start = std::find(path.begin(), path.end(), cur);
      for (auto it = start; it != path.end(); ++it) r = std::min(r, *it);
    }
    c.root[i] = r;
    int k = 0;
    for (int v = static_cast<int>(i); v != r; v = c.next[v].target) k += c.next[v].steps;
    c.depth[i] = k;
  }
  return c;
}

}  // namespace

GrandOrbitPartition grand_orbit_partition(const PolyMap& f, const std::vector<Rational>& B, int bound) {
  const size_t n = B.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (B[i] == B[j]) throw InvalidInput("basepoints must be distinct");
    }
  }
  GrandOrbitPartition out;
  std::vector<int> uf(n);
  std::iota(uf.begin(), uf.end(), 0);
  const Components comp = forward_components(f, B);
  for (size_t i = 0; i < n; ++i) {
    if (comp.next[i].target >= 0) uf[find_root(uf, static_cast<int>(i))] = find_root(uf, comp.next[i].target);
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (find_root(uf, static_cast<int>(i)) == find_root(uf, static_cast<int>(j))) continue;
      const OrbitMeeting m = find_orbit_meeting(f, B[i], B[j], bound, 0);
      if (m.witness) {
        uf[find_root(uf, static_cast<int>(i))] = find_root(uf, static_cast<int>(j));
      } else if (!m.absence_proven) {
        out.inconclusive = true;
        out.notes.push_back(to_string(B[i]) + " and " + to_string(B[j]) + " separate up to bound " +
                            std::to_string(bound) + ": " + m.reason);
      }
    }
  }
  std::map<int, size_t> class_of;
  for (size_t i = 0; i < n; ++i) {
    const int r = find_root(uf, static_cast<int>(i));
    auto it = class_of.find(r);
    if (it == class_of.end()) {
      it = class_of.emplace(r, out.classes.size()).first;
      out.classes.emplace_back();
    }
    GrandOrbitClass& cls = out.classes[it->second];
    cls.members.push_back(B[i]);
    if (comp.root[i] == static_cast<int>(i)) cls.representatives.push_back(B[i]);
  }
  return out;
}

Multitree build_multitree(const PolyMap& f, const std::vector<Rational>& B, int N, int bound, int degree_cap) {
  Multitree mt;
  mt.basepoints = B;
  mt.partition = grand_orbit_partition(f, B, bound);
  const Components comp = forward_components(f, B);
  std::set<Rational> bset(B.begin(), B.end());
  mt.product_order = 1;
  std::map<std::string, unsigned long> iso_classes;
  for (size_t r = 0; r < B.size(); ++r) {
    if (comp.root[r] != static_cast<int>(r)) continue;
    MultitreeComponent c;
    c.representative = B[r];
    int needed = 0;
    for (size_t i = 0; i < B.size(); ++i) {
      if (comp.root[i] == static_cast<int>(r)) {
        c.members.push_back(B[i]);
        needed = std::max(needed, comp.depth[i]);
      }
    }
    c.depth = std::max(N, needed);
    c.depth_extended = needed > N;
    c.tree = stunted_tree(f, B[r], c.depth, degree_cap);
    int marks = 0;
    for (auto& v : c.tree.shape.vertices) {
      if (v.value && bset.count(*v.value)) {
        v.marked = true;
        ++marks;
      }
    }
    if (marks != static_cast<int>(c.members.size())) {
      throw std::logic_error("multitree component marks do not match its basepoints");
    }
    c.aut_order = rooted_aut_order(c.tree.shape);
    mt.product_order *= c.aut_order;
    ++iso_classes[canonical_form(c.tree.shape)];
    mt.components.push_back(std::move(c));
  }
  mt.h_root_fixing = 1;
  mt.h_permuting = 1;
  for (const auto& [form, count] : iso_classes) mt.h_permuting *= factorial(count);
  mt.aut_root_fixing = mt.product_order * mt.h_root_fixing;
  mt.aut_permuting = mt.product_order * mt.h_permuting;
  return mt;
}

namespace {

// Rational critical points of f; sets `irrational` when f' has a nonlinear irreducible factor.
std::vector<Rational> rational_critical_points(const PolyMap& f, bool& irrational) {
  std::vector<Rational> out;
  irrational = false;
  for (const auto& pf : factor_polynomial(derivative(f.poly())).factors) {
    if (pf.factor.degree() == 1) {
      out.push_back(-pf.factor.coeff(0));
    } else {
      irrational = true;
    }
  }
  return out;
}

}  // namespace

IndexTrajectory index_trajectory(const PolyMap& f, const Rational& beta, int N, TreeMode mode) {
  IndexTrajectory out;
  const PeriodicResult per = is_periodic(f, beta);
  if (per.periodic) out.obstructions.push_back("beta periodic (period " + std::to_string(per.period) + ")");
  bool irrational = false;
  for (const auto& c : rational_critical_points(f, irrational)) {
    const OrbitMembership m = orbit_contains(f, c, beta);
    if (m.member) {
      out.obstructions.push_back("beta postcritical: f^" + std::to_string(m.index) + "(" + to_string(c) +
                                 ") = beta");
    }
  }
  if (irrational) out.obstructions.push_back("irrational critical points not checked for postcriticality");

  const std::optional<CubicMap> cubic = f.as_cubic();
  std::optional<StuntedTree> st;
  bool full_tree = true;
  if (mode == TreeMode::Stunted && N > 0) {
    st = stunted_tree(f, beta, N);
    const auto sizes = st->shape.level_sizes();
    long expect = 1;
    for (size_t i = 0; i < sizes.size(); ++i, expect *= f.degree()) {
      if (sizes[i] != expect) full_tree = false;
    }
  }
  Integer cumulative = 1;
  bool all = true;
  for (int n = 0; n <= N; ++n) {
    IndexEntry e;
    e.n = n;
    if (mode == TreeMode::Full || n == 0) {
      e.aut_order = complete_aut_order(f.degree(), n);
    } else {
      e.aut_order = rooted_aut_order(st->shape.truncated(n));
    }
    if (n == 0) {
      e.certified_order = Integer(1);
      e.all_levels_certified = true;
    } else if (cubic && (mode == TreeMode::Full || full_tree)) {
      const LevelCertificate lc = level_certificate(*cubic, beta, n);
      if (lc.certified()) {
        cumulative *= lc.group_order;
      } else {
        all = false;
      }
      e.certified_order = cumulative;
      e.all_levels_certified = all;
    }
    out.entries.push_back(e);
  }
  return out;
}

std::string render_text(const TreeShape& shape) {
  std::ostringstream out;
  std::function<void(int)> rec = [&](int v) {
    const TreeVertex& tv = shape.vertices[v];
    out << std::string(static_cast<size_t>(2 * tv.level), ' ');
    if (tv.value) {
      out << to_string(*tv.value);
    } else {
      out << "root of " << to_string(shape.tags[tv.tag]);
    }
    if (tv.marked) out << " *";
    out << "\n";
    for (int c : tv.children) rec(c);
  };
  if (!shape.vertices.empty()) rec(0);
  return out.str();
}

}  // namespace arboreal
