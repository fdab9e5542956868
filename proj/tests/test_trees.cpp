#include <algorithm>
#include <functional>
#include <map>
#include <random>

#include "arboreal/trees.hpp"
#include "doctest.h"

using namespace arboreal;

namespace {

// Counts level- and parent-preserving bijections fixing marked vertices by plain backtracking.
long brute_aut_count(const TreeShape& t) {
  const int n = static_cast<int>(t.vertices.size());
  std::vector<int> image(n, -1);
  std::vector<bool> used(n, false);
  long count = 0;
  std::function<void(int)> go = [&](int v) {
    if (v == n) {
      ++count;
      return;
    }
    const TreeVertex& tv = t.vertices[v];
    for (int w = 0; w < n; ++w) {
      const TreeVertex& tw = t.vertices[w];
      if (used[w] || tw.level != tv.level) continue;
      if ((tv.marked || tw.marked) && w != v) continue;
      if (tv.parent >= 0 && tw.parent != image[tv.parent]) continue;
      if (tv.children.size() != tw.children.size()) continue;
      image[v] = w;
      used[w] = true;
      go(v + 1);
      used[w] = false;
    }
    image[v] = -1;
  };
  go(0);
  return count;
}

TreeShape subtree(const TreeShape& t, int root) {
  TreeShape s;
  std::function<int(int, int)> copy = [&](int v, int parent) {
    TreeVertex nv = t.vertices[v];
    nv.id = static_cast<int>(s.vertices.size());
    nv.parent = parent;
    nv.children.clear();
    s.vertices.push_back(nv);
    for (int c : t.vertices[v].children) {
      const int id = copy(c, nv.id);
      s.vertices[nv.id].children.push_back(id);
    }
    return nv.id;
  };
  copy(root, -1);
  return s;
}

std::vector<Rational> sorted_child_values(const TreeShape& t, int v) {
  std::vector<Rational> out;
  for (int c : t.vertices[v].children) out.push_back(*t.vertices[c].value);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("complete_aut_order against enumeration") {
  const std::vector<std::tuple<int, int, long>> cases{{2, 1, 2}, {2, 2, 8}, {2, 3, 128}, {3, 1, 6}, {3, 2, 1296}};
  for (const auto& [d, n, expected] : cases) {
    CHECK(complete_aut_order(d, n) == expected);
    CHECK(brute_aut_count(complete_tree(d, n)) == expected);
    CHECK(rooted_aut_order(complete_tree(d, n)) == expected);
  }
  CHECK(complete_aut_order(5, 0) == 1);
  CHECK(complete_aut_order(3, 3) == Integer("6") * 6 * 6 * 6 * 6 * 6 * 6 * 6 * 6 * 6 * 6 * 6 * 6);
}

TEST_CASE("rooted_aut_order on marked shapes") {
  TreeShape path = complete_tree(2, 0);
  for (int i = 1; i < 3; ++i) {
    TreeVertex v;
    v.id = i;
    v.parent = i - 1;
    v.level = i;
    path.vertices[i - 1].children.push_back(i);
    path.vertices.push_back(v);
  }
  CHECK(rooted_aut_order(path) == 1);

  TreeShape all = complete_tree(3, 2);
  for (auto& v : all.vertices) v.marked = true;
  CHECK(rooted_aut_order(all) == 1);

  // One marked leaf of a complete binary depth-2 tree pins itself and its sibling.
  TreeShape one = complete_tree(2, 2);
  one.vertices.back().marked = true;
  CHECK(rooted_aut_order(one) == 2);
  CHECK(brute_aut_count(one) == 2);
}

TEST_CASE("stunted trees from the figures") {
  const auto t1 = stunted_tree(PolyMap(parse_poly("x^2 - 1")), 0, 2);
  CHECK(t1.shape.level_sizes() == std::vector<int>{1, 2, 2});
  std::vector<size_t> grand;
  for (int c : t1.shape.vertices[0].children) grand.push_back(t1.shape.vertices[c].children.size());
  std::sort(grand.begin(), grand.end());
  CHECK(grand == std::vector<size_t>{0, 2});
  CHECK(rooted_aut_order(t1.shape) == 2);
  CHECK(brute_aut_count(t1.shape) == 2);
  bool critical_minus_one = false;
  for (const auto& e : t1.levels[1].factors) {
    if (e.critical && e.critical_value && *e.critical_value == -1) critical_minus_one = e.children_per_vertex == 0;
  }
  CHECK(critical_minus_one);

  const auto t2 = stunted_tree(PolyMap(parse_poly("x^2 - 2")), 2, 2);
  CHECK(t2.shape.level_sizes() == std::vector<int>{1, 1, 1});
  CHECK(rooted_aut_order(t2.shape) == 1);

  const auto t3 = stunted_tree(PolyMap(CubicMap{Rational(2), Rational(2)}), 1, 2);
  CHECK(t3.shape.level_sizes() == std::vector<int>{1, 3, 9});
  CHECK(rooted_aut_order(t3.shape) == 1296);
}

TEST_CASE("stunted tree invariants on random cubics") {
  std::mt19937_64 rng(99);
  int full_checked = 0;
  for (int i = 0; i < 30; ++i) {
    const CubicMap f{Rational(static_cast<long>(rng() % 5)), Rational(static_cast<long>(rng() % 9) - 4)};
    const Rational beta = static_cast<long>(rng() % 9) - 4;
    const int N = f.a == 0 ? 3 : 2;
    const auto st = stunted_tree(PolyMap(f), beta, N);
    const auto sizes = st.shape.level_sizes();
    for (size_t n = 0; n < st.levels.size(); ++n) {
      CHECK(st.levels[n].size() == sizes[n]);
      for (const auto& e : st.levels[n].factors) CHECK(e.children_per_vertex >= 0);
    }
    // Vertices sharing a tag carry isomorphic subtrees.
    std::map<int, std::string> forms;
    for (const auto& v : st.shape.vertices) {
      const std::string form = canonical_form(subtree(st.shape, v.id));
      auto [it, fresh] = forms.emplace(v.tag, form);
      CHECK(it->second == form);
    }
    if (f.a != 0 && !is_periodic(PolyMap(f), beta).periodic && !is_postcritical(f, beta).member) {
      ++full_checked;
      CHECK(sizes == std::vector<int>{1, 3, 9});
      CHECK(rooted_aut_order(st.shape) == complete_aut_order(3, N));
    }
  }
  CHECK(full_checked > 5);
  CHECK_THROWS_AS(stunted_tree(PolyMap(CubicMap{Rational(2), Rational(2)}), 1, 6), DegreeBudgetExceeded);
}

TEST_CASE("grand_orbit_partition") {
  const PolyMap f(parse_poly("x^2 + 1"));
  const auto p = grand_orbit_partition(f, {-1, 2, 10}, 8);
  REQUIRE(p.classes.size() == 2);
  CHECK(p.classes[0].members == std::vector<Rational>{-1, 2});
  CHECK(p.classes[0].representatives == std::vector<Rational>{2});
  CHECK(p.classes[1].members == std::vector<Rational>{10});
  CHECK(p.classes[1].representatives == std::vector<Rational>{10});
  CHECK_FALSE(p.inconclusive);

  const auto single = grand_orbit_partition(f, {Rational(7)}, 4);
  REQUIRE(single.classes.size() == 1);
  CHECK(single.classes[0].representatives == std::vector<Rational>{7});

  const auto q = grand_orbit_partition(PolyMap(parse_poly("x^2 - 2")), {2, -2}, 4);
  REQUIRE(q.classes.size() == 1);
  CHECK(q.classes[0].representatives == std::vector<Rational>{2});

  CHECK_THROWS_AS(grand_orbit_partition(f, {1, 1}, 4), InvalidInput);
}

TEST_CASE("build_multitree figure") {
  const auto m = build_multitree(PolyMap(parse_poly("x^2 + 1")), {-1, 2, 10}, 1);
  REQUIRE(m.components.size() == 2);
  const auto& c2 = m.components[0];
  const auto& c10 = m.components[1];
  CHECK(c2.representative == 2);
  CHECK(c10.representative == 10);
  CHECK(sorted_child_values(c2.tree.shape, 0) == std::vector<Rational>{-1, 1});
  CHECK(sorted_child_values(c10.tree.shape, 0) == std::vector<Rational>{-3, 3});
  int marked = 0;
  for (const auto& v : c2.tree.shape.vertices) {
    if (v.marked) {
      ++marked;
      CHECK((*v.value == -1 || *v.value == 2));
    }
  }
  CHECK(marked == 2);
  CHECK(c2.aut_order == 1);
  CHECK(c10.aut_order == 2);
  CHECK(m.aut_root_fixing == 2);
  CHECK(m.h_root_fixing == 1);
  CHECK(m.h_permuting == 1);  // the two marked trees differ

  const auto one = build_multitree(PolyMap(parse_poly("x^2 - 2")), {Rational(3)}, 2);
  const auto st = stunted_tree(PolyMap(parse_poly("x^2 - 2")), 3, 2);
  REQUIRE(one.components.size() == 1);
  CHECK(one.components[0].tree.shape.level_sizes() == st.shape.level_sizes());
  CHECK(one.aut_root_fixing == rooted_aut_order(st.shape));

  // Depth grows to reach a basepoint deeper than N.
  const auto deep = build_multitree(PolyMap(parse_poly("x^2 + 1")), {-1, 5}, 1);
  REQUIRE(deep.components.size() == 1);
  CHECK(deep.components[0].depth == 2);
  CHECK(deep.components[0].depth_extended);

  // Two isomorphic marked trees may be swapped under the permuting reading.
  const auto twins = build_multitree(PolyMap(parse_poly("x^2 + 1")), {10, 17}, 1);
  CHECK(twins.h_root_fixing == 1);
  CHECK(twins.h_permuting == 2);
  CHECK(twins.aut_permuting == twins.product_order * 2);
}

TEST_CASE("index_trajectory") {
  const auto full = index_trajectory(PolyMap(CubicMap{Rational(2), Rational(2)}), 1, 2, TreeMode::Full);
  REQUIRE(full.entries.size() == 3);
  CHECK(full.entries[0].aut_order == 1);
  CHECK(full.entries[1].aut_order == 6);
  CHECK(*full.entries[1].certified_order == 6);
  CHECK(full.entries[2].aut_order == 1296);
  CHECK(*full.entries[2].certified_order == 1296);
  CHECK(full.entries[2].all_levels_certified);
  CHECK(full.obstructions.empty());

  const auto sq = index_trajectory(PolyMap(parse_poly("x^2 - 1")), 0, 2, TreeMode::Full);
  CHECK(sq.entries.back().aut_order == 8);
  CHECK_FALSE(sq.obstructions.empty());

  const auto st = index_trajectory(PolyMap(parse_poly("x^2 - 1")), 0, 2, TreeMode::Stunted);
  CHECK(st.entries.back().aut_order == 2);

  const auto zero = index_trajectory(PolyMap(parse_poly("x^2 - 1")), 0, 0, TreeMode::Full);
  REQUIRE(zero.entries.size() == 1);
  CHECK(zero.entries[0].aut_order == 1);
  CHECK(*zero.entries[0].certified_order == 1);
}

TEST_CASE("render_text") {
  const auto t = stunted_tree(PolyMap(parse_poly("x^2 - 1")), 0, 2);
  const std::string s = render_text(t.shape);
  CHECK(s.find("0\n") == 0);
  CHECK(s.find("  1\n") != std::string::npos);
  CHECK(s.find("    root of x^2 - 2\n") != std::string::npos);
}
