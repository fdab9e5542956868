#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arboreal/dynamics.hpp"
#include "arboreal/errors.hpp"
#include "arboreal/poly.hpp"

namespace arboreal {

/// (d!)^((d^n - 1)/(d - 1)).
Integer complete_aut_order(int d, int n);

struct TreeVertex {
  int id = 0;
  int parent = -1;
  int level = 0;
  std::vector<int> children;
  bool marked = false;
  int tag = 0;  // index into TreeShape::tags
  std::optional<Rational> value;  // known when the vertex is a rational point
};

struct TreeShape {
  std::vector<TreeVertex> vertices;  // vertices[0] is the root
  std::vector<UniPoly> tags;         // irreducible factor each tag came from
  int depth() const;
  std::vector<int> level_sizes() const;
  /// Tree truncated to levels <= n.
  TreeShape truncated(int n) const;
};

/// Complete d-ary tree of depth n with no marks.
TreeShape complete_tree(int d, int n);

struct FactorEntry {
  UniPoly g;
  int parent_factor = -1;  // index in the previous level
  int children_per_vertex = 0;
  bool critical = false;   // preimages of a root of g repeat
  std::optional<Rational> critical_value;
  int tag = 0;
};

struct FactorLevel {
  int level = 0;
  std::vector<FactorEntry> factors;
  int size() const;
};

struct StuntedTree {
  TreeShape shape;
  std::vector<FactorLevel> levels;
  Rational beta;
};

StuntedTree stunted_tree(const PolyMap& f, const Rational& beta, int N, int degree_cap = kDefaultDegreeCap);

/// Automorphisms fixing every marked vertex.
Integer rooted_aut_order(const TreeShape& shape);

/// Canonical string of a shape where marks are one shared color.
std::string canonical_form(const TreeShape& shape);

struct GrandOrbitClass {
  std::vector<Rational> members;
  std::vector<Rational> representatives;
};

struct GrandOrbitPartition {
  std::vector<GrandOrbitClass> classes;
  /// Some pair could not be proven separate; such pairs are reported as separate up to the bound.
  bool inconclusive = false;
  std::vector<std::string> notes;
};

GrandOrbitPartition grand_orbit_partition(const PolyMap& f, const std::vector<Rational>& B, int bound);

struct MultitreeComponent {
  Rational representative;
  std::vector<Rational> members;
  StuntedTree tree;
  Integer aut_order;
  int depth = 0;
  bool depth_extended = false;
};

struct Multitree {
  std::vector<Rational> basepoints;
  GrandOrbitPartition partition;
  std::vector<MultitreeComponent> components;
  Integer product_order;        // prod |A_i|
  Integer h_root_fixing = 1;    // H when every root is fixed
  Integer h_permuting = 1;      // H when representatives with isomorphic marked trees may be swapped
  Integer aut_root_fixing;      // default reported order
  Integer aut_permuting;
};

Multitree build_multitree(const PolyMap& f, const std::vector<Rational>& B, int N, int bound = 8,
                          int degree_cap = kDefaultDegreeCap);

enum class TreeMode { Full, Stunted };

struct IndexEntry {
  int n = 0;
  Integer aut_order;                       // |Aut| of the comparison tree at level n
  std::optional<Integer> certified_order;  // certified lower bound for |G_n|, if any level data exists
  bool all_levels_certified = false;
};

struct IndexTrajectory {
  std::vector<IndexEntry> entries;
  std::vector<std::string> obstructions;
};

IndexTrajectory index_trajectory(const PolyMap& f, const Rational& beta, int N, TreeMode mode);

/// Indented text rendering, one vertex per line.
std::string render_text(const TreeShape& shape);

}  // namespace arboreal
