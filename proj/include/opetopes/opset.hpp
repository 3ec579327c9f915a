#pragma once

// Finite opetopic sets over a dimension window, with the action stored on generating faces.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "opetopes/ocat.hpp"

namespace opetopes {

struct Window {
  int lo = 0;
  int hi = 0;
  bool contains(int d) const { return lo <= d && d <= hi; }
  bool operator==(const Window&) const = default;
};

class FinOpSet {
 public:
  struct Cell {
    Opetope shape;
    std::string name;
    std::vector<int> faces;  // aligned with opetopes::faces(shape); -1 below the window
  };

  FinOpSet() = default;
  explicit FinOpSet(Window w) : window_(w) {}

  const Window& window() const { return window_; }
  // Shapes the set is defined on; cells of a listed shape may be absent.
  const std::set<Opetope>& shapes() const { return shapes_; }
  const std::vector<Cell>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  const Cell& cell(int c) const { return cells_[c]; }
  const std::vector<int>& cells_of(const Opetope& shape) const;

  void add_shape(const Opetope& shape);
  // Adds the downward closure of shape inside the window.
  void add_shape_closed(const Opetope& shape);
  int add_cell(const Opetope& shape, std::string name = {});
  void set_face(int cell, const Face& f, int to);
  int face(int cell, const Face& f) const;
  int restrict(int cell, const FaceWord& w) const;
  int find(const std::string& name) const;

  // Faces present and well shaped, relation squares respected.
  Report check() const;
  std::string dump() const;
  static FinOpSet parse(const std::string& text);

 private:
  Window window_;
  std::set<Opetope> shapes_;
  std::vector<Cell> cells_;
  std::map<Opetope, std::vector<int>> by_shape_;
  std::map<std::string, int> by_name_;
};

int face_index(const Opetope& shape, const Face& f);
bool in_window(const Window& w, const Opetope& shape);

// Component map: cell of the domain -> cell of the codomain.
using OpSetMap = std::vector<int>;

bool is_map(const FinOpSet& X, const FinOpSet& Y, const OpSetMap& f, std::string* why = nullptr);

struct Inclusion {
  FinOpSet sub;
  FinOpSet super;
  OpSetMap map;  // sub cell -> super cell
};

// Subpresheaf on a face-closed set of cells.
Inclusion subpresheaf(const FinOpSet& X, const std::vector<int>& keep);
// Removes the given cells and every cell having one of them as an iterated face.
FinOpSet remove_cells(const FinOpSet& X, const std::vector<int>& cells);
// Cells of X reachable from the given cells by faces.
std::vector<int> face_closure(const FinOpSet& X, const std::vector<int>& generators);

// Cells outside the window are dropped, including the identity when w itself lies outside.
FinOpSet representable(const Opetope& w, std::optional<Window> window = std::nullopt);
Inclusion boundary(const Opetope& w, std::optional<Window> window = std::nullopt);
Inclusion spine(const Opetope& w, std::optional<Window> window = std::nullopt);
Inclusion empty_inclusion(const Opetope& w, std::optional<Window> window = std::nullopt);
// Cells of O[w] (indices into representable(w)) lying in S[w].
std::vector<int> spine_cells(const Opetope& w);

// All maps X -> Y extending `fixed` (entries -1 are free).
std::vector<OpSetMap> maps(const FinOpSet& X, const FinOpSet& Y, const OpSetMap& fixed = {},
                           std::size_t limit = 0);
std::size_t count_maps(const FinOpSet& X, const FinOpSet& Y, const OpSetMap& fixed = {},
                       std::size_t limit = 0);

struct LiftFailure {
  std::string shape;
  std::string problem;  // "no extension" or "several extensions"
  std::vector<std::pair<std::string, std::string>> witness;  // A cell -> X cell
};

// Every map A -> X extends uniquely along i.
std::optional<LiftFailure> orthogonality_failure(const Inclusion& i, const FinOpSet& X);
bool orthogonal(const Inclusion& i, const FinOpSet& X);

// Pushout of an injection A -> B along f: A -> X; returns the new set and B -> result.
struct Pushout {
  FinOpSet result;
  OpSetMap from_x;
  OpSetMap from_b;
};
Pushout pushout(const FinOpSet& X, const Inclusion& a_in_b, const OpSetMap& f);

struct SpineStep {
  Address node;
  Opetope shape;           // s_[p] xi
  OpSetMap attach;         // cells of spine(shape).sub -> cells of representable(xi)
};

struct SpineDecomposition {
  Opetope xi;
  std::vector<int> initial;  // S[t xi] as cells of representable(xi)
  std::vector<SpineStep> steps;
};

SpineDecomposition spine_cell_decomposition(const Opetope& xi);

// Replays the pushouts; returns the rebuilt set and its comparison map into representable(xi).
std::pair<FinOpSet, OpSetMap> replay_spine_decomposition(const SpineDecomposition& d);

enum class InclusionClass { Spine, Boundary, Empty };

struct ClassCheck {
  bool holds = true;
  std::size_t tested = 0;
  std::optional<LiftFailure> failure;
};

// Orthogonality of X against the class of inclusions of the given kind in dimension dim,
// over the shapes X is defined on.
ClassCheck class_orthogonal(InclusionClass kind, int dim, const FinOpSet& X);

struct HLiftReport {
  ClassCheck s_n, s_n1, b_n1, b_n2, s_n2;
  bool implication1 = true;  // S_{n,n+1} => B_{n+1}
  bool implication2 = true;  // S_{n,n+1} and B_{n+2} => S_{n+2}
  std::string str() const;
};

HLiftReport hlift_check(const FinOpSet& X, int n);

// One cell per shape in the window, for every shape of size <= max_size.
FinOpSet terminal_opset(Window w, std::size_t max_size);

}  // namespace opetopes
