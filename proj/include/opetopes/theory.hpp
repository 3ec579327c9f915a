#pragma once

// Locally finite direct categories, presheaves and cell contexts over them,
// and dependently sorted signatures, theories and finite models.

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "opetopes/oalg.hpp"

namespace opetopes {

// ---- direct categories

struct LfdReport {
  bool direct = true;
  std::vector<int> dims;                  // per object
  std::vector<std::vector<int>> covers;   // per object: non-identity morphisms into it
  std::vector<std::string> cycle;         // objects on a cycle, when not direct
  std::vector<std::string> issues;
  bool ok() const { return direct && issues.empty(); }
  std::string str(const FiniteCategory& C) const;
};
LfdReport validate_lfd(const FiniteCategory& C);

// D0 with two parallel arrows into D1.
FiniteCategory globe_category();
// Injective monotone maps between [0..n].
FiniteCategory semi_simplex_category(int n);
// Bijection of objects and of morphisms preserving types, identities and composition.
struct CategoryIso {
  std::vector<int> objects;
  std::vector<int> mors;
};
std::optional<CategoryIso> category_isomorphism(const FiniteCategory& C, const FiniteCategory& D);

// ---- presheaves

struct Presheaf {
  const FiniteCategory* cat = nullptr;
  std::vector<std::vector<std::string>> cells;  // per object
  std::vector<std::vector<int>> act;            // per morphism f: c -> d, cell of d -> cell of c

  explicit Presheaf(const FiniteCategory* C = nullptr);
  int add_cell(int object, const std::string& name);
  int restrict(int cell, int mor) const { return act[mor][cell]; }
  std::size_t total() const;
  // Restrictions present, identities act trivially, x.(g f) = (x.g).f.
  Report check() const;
  std::string dump() const;
  static Presheaf parse(const FiniteCategory* C, const std::string& text);
};

// Per object, cell -> cell.
using PresheafMap = std::vector<std::vector<int>>;
bool is_presheaf_map(const Presheaf& A, const Presheaf& X, const PresheafMap& f, std::string* why = nullptr);
std::vector<PresheafMap> presheaf_maps(const Presheaf& A, const Presheaf& X, std::size_t limit = 0,
                                       bool injective = false);
std::optional<PresheafMap> presheaf_isomorphism(const Presheaf& A, const Presheaf& X);

Presheaf representable_c(const FiniteCategory& C, int c);
struct PresheafInclusion {
  Presheaf sub;
  Presheaf super;
  PresheafMap map;
};
PresheafInclusion boundary_c(const FiniteCategory& C, int c);

Presheaf random_presheaf(const FiniteCategory& C, std::mt19937& rng, int max_cells_per_object);

// ---- contexts

// One attachment of the boundary of an object; attach lists, per non-identity
// morphism f: c' -> c in cover order, the step whose cell is x.f.
struct Step {
  std::string name;
  int object = 0;
  std::vector<int> attach;
  bool operator==(const Step&) const = default;
};

struct Context {
  const FiniteCategory* cat = nullptr;
  std::vector<Step> steps;
  bool operator==(const Context& o) const { return cat == o.cat && steps == o.steps; }
  std::string str() const;
};

// The realised presheaf; cells are numbered by step within their object.
Presheaf realize(const Context& G);
// Step index -> (object, cell index) in realize(G).
std::vector<std::pair<int, int>> realize_index(const Context& G);
// Throws NotAMap when an attachment is not natural.
void validate_context(const Context& G);

struct ContextOfPresheaf {
  Context context;
  std::vector<std::pair<int, int>> cell_of_step;  // the comparison with the input
};
// Cells in order of dimension, then object, then cell index.
ContextOfPresheaf presheaf_to_context(const Presheaf& X);
// Every attachment order of X's cells (linear extensions of the face order), up to limit.
std::vector<Context> all_contexts(const Presheaf& X, std::size_t limit = 0);

Context ctx_ft(const Context& G);
// realize(ft G) -> realize(G).
PresheafMap ctx_pr(const Context& G);
struct Pullback {
  Context context;      // f* G, over D
  PresheafMap connect;  // realize(G) -> realize(f* G)
};
// f : realize(ft G) -> realize(D).
Pullback ctx_pullback(const Context& G, const Context& D, const PresheafMap& f);

// ---- syntax

struct Term {
  std::string head;
  std::vector<Term> args;
  bool is_var = false;
  int var = -1;  // context position when is_var
  std::string str(const std::vector<std::string>& names = {}) const;
  bool operator==(const Term& o) const;
};

struct SortExpr {
  std::string type;
  std::vector<Term> args;
  std::string str(const std::vector<std::string>& names = {}) const;
  bool operator==(const SortExpr&) const = default;
};

struct Binding {
  std::string name;
  SortExpr sort;  // arguments are earlier variables
};

struct TypeDecl {
  std::string name;
  std::vector<Binding> context;
  int grade = 0;
};

struct TermDecl {
  std::string name;
  std::vector<Binding> context;
  std::vector<int> explicit_args;  // context positions
  SortExpr output;
  int output_dim = 0;
};

struct Equation {
  std::string label;
  std::vector<Binding> context;
  Term lhs, rhs;
  SortExpr sort;
};

struct Signature {
  std::vector<TypeDecl> types;
  const TypeDecl* find(const std::string& name) const;
  int index(const std::string& name) const;
};

struct Theory {
  Signature sig;
  std::vector<TermDecl> ops;
  std::vector<Equation> eqns;
  const TermDecl* find_op(const std::string& name) const;
};

Signature parse_signature(const std::string& text);
Theory parse_theory(const std::string& text);
std::string signature_str(const Signature& S);
std::string theory_str(const Theory& T);

// Objects are type declarations; morphisms B -> A are the variables of (Gamma_A, a : A) of sort B.
FiniteCategory signature_to_lfd(const Signature& S);
Signature lfd_to_signature(const FiniteCategory& C);

// ---- models

struct Model {
  // per type symbol: element -> index tuple (values of the context variables)
  std::map<std::string, std::map<std::string, std::vector<std::string>>> sorts;
  // per operation: explicit argument values -> result
  std::map<std::string, std::map<std::vector<std::string>, std::string>> ops;
  static Model parse(const std::string& text);
  std::string dump() const;
};

struct ModelReport {
  std::vector<std::string> issues;
  std::vector<std::string> failed_equations;
  std::size_t environments = 0;
  bool ok() const { return issues.empty() && failed_equations.empty(); }
  std::string str() const;
};
ModelReport check_model(const Theory& T, const Model& M);

}  // namespace opetopes
