#pragma once

// Coloured Z^n monads on sorted families, opetopic algebras, the functor h into
// opetopic shapes, diagrammatic morphisms and opetopic nerves of categories.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opetopes/opset.hpp"

namespace opetopes {

// Base data of a would-be algebra: a finite opetopic set over [n-k, n].
struct SortedFamily {
  int k = 1;
  int n = 1;
  FinOpSet base;

  SortedFamily() : base(Window{0, 1}) {}
  // k is clamped to n.
  SortedFamily(int k, int n);
  SortedFamily(int k, int n, FinOpSet base);
  Window window() const { return Window{n - k, n}; }
};

// An element of (Z X)_w: an (n+1)-opetope nu with target w, and a map S[nu] -> X.
struct PastingCell {
  Opetope shape;
  OpSetMap filling;  // cells of spine(shape, window).sub -> X

  Opetope output() const { return target(shape); }
  auto operator<=>(const PastingCell&) const = default;
  bool operator==(const PastingCell&) const = default;
};

// Spine of nu within a window, with the face word of each of its cells.
struct SpineView {
  Inclusion inclusion;
  std::vector<FaceWord> words;          // per cell of inclusion.sub
  std::map<Address, int> node_cell;     // s_[p] -> cell of inclusion.sub
  int degenerate_cell = -1;             // t.t for degenerate nu, when in the window
};
const SpineView& spine_view(const Opetope& nu, const Window& w);

// Builds the filling from the cells placed on the nodes of nu
// (or on its degenerate face when nu = {{phi}}); throws NotAMap if they do not glue.
PastingCell make_pasting(const SortedFamily& X, const Opetope& nu, const std::map<Address, int>& node_cells,
                         int degenerate_cell = -1);
int pasting_node_cell(const SortedFamily& X, const PastingCell& c, const Address& p);
// Value of the filling on the face word w of O[nu]; -1 when w leaves the spine.
int pasting_value(const SortedFamily& X, const PastingCell& c, const FaceWord& w);
std::string pasting_str(const SortedFamily& X, const PastingCell& c);

// (n+1)-opetopes with the given target and at most max_nodes nodes.
std::vector<Opetope> pasting_shapes(const Opetope& w, std::size_t max_nodes);
std::vector<PastingCell> free_cells(const SortedFamily& X, const Opetope& w, std::size_t max_nodes);

// xi = Y(outer) grafted with Y(inner[p]) at every leaf [[p]], and its target.
struct Assembly {
  Opetope xi;
  Opetope result;
  std::map<std::pair<Address, Address>, Address> node_of;  // (p, node l of inner[p]) -> node of result
};
Assembly assemble(const Opetope& outer, const std::map<Address, Opetope>& inner);

// An element of (Z Z X)_w.
struct NestedPasting {
  Opetope outer;
  std::map<Address, PastingCell> inner;  // per node of outer
  int degenerate_cell = -1;              // for degenerate outer
};

// The inner pastings glue along the faces of the outer one.
bool nested_compatible(const SortedFamily& X, const NestedPasting& np, std::string* why = nullptr);

PastingCell monad_unit(const SortedFamily& X, int cell);
// Throws ShapeMismatch on ill-shaped input, NotAMap when the pieces do not glue.
PastingCell monad_mult(const SortedFamily& X, const NestedPasting& np);

// An element of (Z Z Z X)_w, for the associativity square.
struct NestedPasting3 {
  Opetope outer;
  std::map<Address, NestedPasting> inner;
  int degenerate_cell = -1;
};
// mu o Z mu, and mu o mu_Z.
PastingCell mult_inner_first(const SortedFamily& X, const NestedPasting3& np);
PastingCell mult_outer_first(const SortedFamily& X, const NestedPasting3& np);

// An algebra materialised on pastings up to a node bound.
struct OAlgebra {
  SortedFamily base;
  std::size_t max_nodes = 0;
  std::map<PastingCell, int> comp;
};

struct LawReport {
  std::size_t unit_checked = 0;
  std::size_t mult_checked = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string str() const;
};

// Unit law on every cell, and comp(mult(np)) = comp(outer filled by comp of inners)
// on every uniform-height-2 nested pasting with at most max_nodes nodes in total.
LawReport check_algebra_laws(const OAlgebra& A, std::size_t max_nodes);

// Nested pastings of uniform height 2 over X, outer + inner node counts <= max_nodes.
std::vector<NestedPasting> nested_pastings(const SortedFamily& X, const Opetope& w, std::size_t max_nodes);
// Height-3 instances with at most max_nodes nodes over all levels; stops after limit (0: no limit).
std::vector<NestedPasting3> nested_pastings3(const SortedFamily& X, const Opetope& w, std::size_t max_nodes,
                                             std::size_t limit = 0);

// ---- k = n = 1: graphs, finite categories, Delta ----

struct Graph {
  std::vector<std::string> vertices;
  struct Edge {
    std::string name;
    int src, tgt;
  };
  std::vector<Edge> edges;
  SortedFamily family() const;
  // Lines `vertex a b ...` and `edge f: a -> b`.
  static Graph parse(const std::string& text);
  std::string dump() const;
};

struct FiniteCategory {
  std::vector<std::string> objects;
  struct Mor {
    std::string name;
    int src, tgt;
  };
  std::vector<Mor> mors;
  std::vector<int> id;                    // per object
  std::map<std::pair<int, int>, int> comp;  // (g, f) -> g.f

  int compose(int g, int f) const;
  int find_object(const std::string& name) const;
  int find_mor(const std::string& name) const;
  // Throws NotACategory.
  void validate() const;
  static FiniteCategory parse(const std::string& text);
  std::string dump() const;
  // The free category on a graph; InfiniteNerve when the graph has a cycle.
  static FiniteCategory free(const Graph& g);
  static FiniteCategory terminal();
};

OAlgebra category_algebra(const FiniteCategory& C, std::size_t max_nodes);

struct MonotoneMap {
  int dom = 0;
  int cod = 0;
  std::vector<int> image;  // of 0..dom
  auto operator<=>(const MonotoneMap&) const = default;
  bool operator==(const MonotoneMap&) const = default;
  std::string str() const;
};
MonotoneMap compose(const MonotoneMap& f, const MonotoneMap& g);  // f o g
MonotoneMap identity_map(int m);

// Object of Lambda_{k,n} attached to w: "Z O[w]", "Z S[w]" or "Z S[t w]".
struct LambdaObject {
  std::string kind;
  Opetope shape;
  std::string str() const;
};
LambdaObject h_object(const Opetope& w, int k, int n);
// For k = n = 1, the ordinal [m].
int h_ordinal(const Opetope& w);
MonotoneMap h_morphism(const Opetope& w, const Face& g);

// Node q of s_[p] xi -> nodes P_xi[p[q]l] of t xi over the leaves l of the subtree above q.
std::map<Address, std::vector<Address>> h_node_map(const Opetope& xi, const Address& p);

struct Diagram {
  Opetope xi;
  Address node;
};
MonotoneMap h_diagram(const Diagram& d);
// (xi2 box_[p2] xi1, [p2 p1]); throws NotComposable.
Diagram diagram_compose(const Diagram& d1, const Diagram& d2);
// A diagram whose h-image is f.
Diagram diagram_for(const MonotoneMap& f);

std::vector<MonotoneMap> monotone_maps(int m, int m2);
// Closure under composition of h-images of generators into opetopes of dim <= 3
// and size <= max_size, restricted to ordinals <= max_ordinal.
std::set<MonotoneMap> h_generated_maps(std::size_t max_size, int max_ordinal);

// The opetopic nerve over [0, 3], on shapes of size <= max_size.
FinOpSet nerve_category(const FiniteCategory& C, std::size_t max_size);

struct NerveReport {
  ClassCheck s2, s3, b3;
  bool ok() const { return s2.holds && s3.holds && b3.holds; }
  std::string str() const;
};
NerveReport nerve_axioms_check(const FinOpSet& N);

}  // namespace opetopes
