#include "opetopes/oalg.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

#include "opetopes/error.hpp"

namespace opetopes {

// ---------------------------------------------------------------- families

SortedFamily::SortedFamily(int k_, int n_) : k(std::min(k_, n_)), n(n_), base(Window{n_ - std::min(k_, n_), n_}) {
  if (n < 1 || k < 0) throw Error(ErrorKind::InvalidArgument, "need n >= 1 and k >= 0");
}

SortedFamily::SortedFamily(int k_, int n_, FinOpSet b) : SortedFamily(k_, n_) {
  if (!(b.window() == window()))
    throw Error(ErrorKind::WindowViolation, "family window must be [n-k, n]");
  base = std::move(b);
}

// ---------------------------------------------------------------- spines

const SpineView& spine_view(const Opetope& nu, const Window& w) {
  static std::mutex mu;
  static auto* memo = new std::map<std::tuple<Opetope, int, int>, std::unique_ptr<SpineView>>;
  auto key = std::make_tuple(nu, w.lo, w.hi);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo->find(key);
    if (it != memo->end()) return *it->second;
  }
  auto sv = std::make_unique<SpineView>();
  sv->inclusion = spine(nu, w);
  auto table = hom_table(nu);
  std::map<std::string, FaceWord> by_name;
  for (const auto& m : table->morphisms()) by_name.emplace(word_str(m.word), m.word);
  const FinOpSet& sub = sv->inclusion.sub;
  for (std::size_t c = 0; c < sub.size(); ++c) sv->words.push_back(by_name.at(sub.cell(c).name));
  if (nu.is_degenerate()) {
    sv->degenerate_cell = sub.find(word_str(table->normal({Face::t(), Face::t()}).word));
  } else {
    for (const auto& p : nu.node_addresses()) sv->node_cell[p] = sub.find(word_str({Face::s(p)}));
  }
  std::lock_guard<std::mutex> lock(mu);
  return *memo->emplace(key, std::move(sv)).first->second;
}

namespace {

FaceWord prepend(const Face& f, const FaceWord& w) {
  FaceWord out{f};
  out.insert(out.end(), w.begin(), w.end());
  return out;
}

FaceWord prepend(const FaceWord& a, const FaceWord& w) {
  FaceWord out = a;
  out.insert(out.end(), w.begin(), w.end());
  return out;
}

// Spreads the cell x of shape face_domain(nu, lead) over every cell lead.u of the spine.
bool spread(const SortedFamily& X, const Opetope& nu, const SpineView& sv, const FaceWord& lead, int x,
            OpSetMap& filling) {
  auto nu_table = hom_table(nu);
  Opetope shape = word_domain(nu, lead);
  for (const auto& m : hom_table(shape)->morphisms()) {
    if (!X.window().contains(m.dom.dim())) continue;
    int c = sv.inclusion.sub.find(word_str(nu_table->normal(prepend(lead, m.word)).word));
    if (c < 0) continue;
    int v = X.base.restrict(x, m.word);
    if (filling[c] >= 0 && filling[c] != v) return false;
    filling[c] = v;
  }
  return true;
}

}  // namespace

PastingCell make_pasting(const SortedFamily& X, const Opetope& nu, const std::map<Address, int>& node_cells,
                         int degenerate_cell) {
  if (nu.dim() != X.n + 1) throw Error(ErrorKind::ShapeMismatch, nu.str() + " is not an (n+1)-opetope");
  const SpineView& sv = spine_view(nu, X.window());
  OpSetMap filling(sv.inclusion.sub.size(), -1);
  if (nu.is_degenerate()) {
    if (sv.degenerate_cell >= 0) {
      if (degenerate_cell < 0 || !(X.base.cell(degenerate_cell).shape == nu.phi()))
        throw Error(ErrorKind::ShapeMismatch, "degenerate pasting needs a cell of shape " + nu.phi().str());
      if (!spread(X, nu, sv, {Face::t(), Face::t()}, degenerate_cell, filling))
        throw Error(ErrorKind::NotAMap, "inconsistent degenerate filling");
    }
  } else {
    if (node_cells.size() != nu.node_count())
      throw Error(ErrorKind::ShapeMismatch, "one cell per node of " + nu.str() + " expected");
    for (const auto& [p, x] : node_cells) {
      if (!nu.has_node(p)) throw Error(ErrorKind::AddressNotANode, p.str() + " in " + nu.str());
      if (x < 0 || x >= static_cast<int>(X.base.size()) || !(X.base.cell(x).shape == source(nu, p)))
        throw Error(ErrorKind::ShapeMismatch, "cell at " + p.str() + " must have shape " + source(nu, p).str());
      if (!spread(X, nu, sv, {Face::s(p)}, x, filling))
        throw Error(ErrorKind::NotAMap, "node cells of " + nu.str() + " disagree on a shared face");
    }
  }
  for (int v : filling)
    if (v < 0) throw Error(ErrorKind::NotAMap, "spine of " + nu.str() + " not covered");
  std::string why;
  if (!is_map(sv.inclusion.sub, X.base, filling, &why)) throw Error(ErrorKind::NotAMap, why);
  return PastingCell{nu, std::move(filling)};
}

int pasting_node_cell(const SortedFamily& X, const PastingCell& c, const Address& p) {
  const SpineView& sv = spine_view(c.shape, X.window());
  auto it = sv.node_cell.find(p);
  if (it == sv.node_cell.end()) throw Error(ErrorKind::AddressNotANode, p.str() + " in " + c.shape.str());
  return c.filling[it->second];
}

int pasting_value(const SortedFamily& X, const PastingCell& c, const FaceWord& w) {
  const SpineView& sv = spine_view(c.shape, X.window());
  int k = hom_table(c.shape)->class_of(w);
  if (k < 0) return -1;
  int cell = sv.inclusion.sub.find(word_str(hom_table(c.shape)->morphisms()[k].word));
  return cell < 0 ? -1 : c.filling[cell];
}

namespace {

int degenerate_value(const SortedFamily& X, const PastingCell& c) {
  const SpineView& sv = spine_view(c.shape, X.window());
  return sv.degenerate_cell < 0 ? -1 : c.filling[sv.degenerate_cell];
}

}  // namespace

std::string pasting_str(const SortedFamily& X, const PastingCell& c) {
  std::string s = c.shape.str() + "[";
  if (c.shape.is_degenerate()) {
    int d = degenerate_value(X, c);
    s += d < 0 ? "" : X.base.cell(d).name;
  } else {
    bool first = true;
    for (const auto& p : c.shape.node_addresses()) {
      if (!first) s += ",";
      first = false;
      s += X.base.cell(pasting_node_cell(X, c, p)).name;
    }
  }
  return s + "]";
}

// ---------------------------------------------------------------- free cells

std::vector<Opetope> pasting_shapes(const Opetope& w, std::size_t max_nodes) {
  int n = w.dim();
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "pastings need dimension >= 1");
  // size of nu = nodes + sum of decoration sizes; exact for n <= 2, generous above
  std::size_t bound = n == 1   ? max_nodes
                      : n == 2 ? 2 * max_nodes + w.size()
                               : max_nodes * (w.size() + 2) + w.size();
  std::vector<Opetope> out;
  for (const auto& nu : enumerate_opetopes(n + 1, bound))
    if (nu.node_count() <= max_nodes && target(nu) == w) out.push_back(nu);
  return out;
}

std::vector<PastingCell> free_cells(const SortedFamily& X, const Opetope& w, std::size_t max_nodes) {
  if (w.dim() != X.n) throw Error(ErrorKind::ShapeMismatch, "free cells live in dimension n");
  std::vector<PastingCell> out;
  for (const auto& nu : pasting_shapes(w, max_nodes)) {
    const SpineView& sv = spine_view(nu, X.window());
    for (auto& f : maps(sv.inclusion.sub, X.base)) out.push_back(PastingCell{nu, std::move(f)});
  }
  return out;
}

// ---------------------------------------------------------------- monad

Assembly assemble(const Opetope& outer, const std::map<Address, Opetope>& inner) {
  Assembly a;
  a.xi = Opetope::corolla(outer);
  if (outer.is_degenerate()) {
    if (!inner.empty()) throw Error(ErrorKind::ShapeMismatch, "degenerate outer pasting has no nodes");
    a.result = outer;
    return a;
  }
  if (inner.size() != outer.node_count()) throw Error(ErrorKind::ShapeMismatch, "one inner pasting per node");
  for (const auto& p : outer.node_addresses()) {
    auto it = inner.find(p);
    if (it == inner.end()) throw Error(ErrorKind::ShapeMismatch, "no inner pasting at " + p.str());
    if (!(target(it->second) == source(outer, p)))
      throw Error(ErrorKind::ShapeMismatch, "inner pasting at " + p.str() + " has the wrong target");
    a.xi = graft_corolla(a.xi, Address().push(p), it->second);
  }
  a.result = target(a.xi);
  const auto& P = readdress(a.xi);
  for (const auto& [p, beta] : inner)
    if (!beta.is_degenerate())
      for (const auto& l : beta.node_addresses()) a.node_of[{p, l}] = P.at(Address().push(p).push(l));
  return a;
}

bool nested_compatible(const SortedFamily& X, const NestedPasting& np, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  const Opetope& nu = np.outer;
  if (nu.is_degenerate()) {
    if (!np.inner.empty()) return fail("degenerate outer pasting has no nodes");
    if (X.window().contains(nu.phi().dim()) &&
        (np.degenerate_cell < 0 || !(X.base.cell(np.degenerate_cell).shape == nu.phi())))
      return fail("missing degenerate cell");
    return true;
  }
  if (np.inner.size() != nu.node_count()) return fail("one inner pasting per node");
  auto table = hom_table(nu);
  std::map<int, int> value;  // class in O[nu] -> cell of X
  for (const auto& [p, c] : np.inner) {
    if (!nu.has_node(p)) return fail(p.str() + " is not a node");
    Opetope sp = source(nu, p);
    if (!(c.output() == sp)) return fail("inner pasting at " + p.str() + " has the wrong output");
    for (const auto& m : hom_table(sp)->morphisms()) {
      if (m.word.empty() || !X.window().contains(m.dom.dim())) continue;
      int v = pasting_value(X, c, prepend(Face::t(), m.word));
      if (v < 0) return fail("face " + word_str(m.word) + " of the inner pasting at " + p.str() + " is undefined");
      int k = table->class_of(prepend(Face::s(p), m.word));
      auto [it, fresh] = value.emplace(k, v);
      if (!fresh && it->second != v)
        return fail("inner pastings disagree on " + word_str(table->morphisms()[k].word));
    }
  }
  return true;
}

namespace {

// The cell on the degenerate face of the assembled result, found by factoring
// t.(t.t) through the degenerate inner pastings.
int locate_degenerate(const Assembly& a, const std::map<Address, std::pair<Opetope, int>>& candidates) {
  auto table = hom_table(a.xi);
  auto result_deg = hom_table(a.result)->normal({Face::t(), Face::t()}).word;
  int want = table->class_of(prepend(Face::t(), result_deg));
  int found = -1;
  for (const auto& [p, sc] : candidates) {
    const auto& [beta, cell] = sc;
    auto beta_deg = hom_table(beta)->normal({Face::t(), Face::t()}).word;
    if (table->class_of(prepend(Face::s(Address().push(p)), beta_deg)) != want) continue;
    if (found >= 0 && found != cell) throw Error(ErrorKind::NotAMap, "degenerate inner pastings disagree");
    found = cell;
  }
  if (found < 0) throw Error(ErrorKind::ShapeMismatch, "degenerate face of " + a.result.str() + " not located");
  return found;
}

}  // namespace

PastingCell monad_unit(const SortedFamily& X, int cell) {
  const Opetope& w = X.base.cell(cell).shape;
  if (w.dim() != X.n) throw Error(ErrorKind::ShapeMismatch, "unit applies to cells of dimension n");
  return make_pasting(X, Opetope::corolla(w), {{root_address(Opetope::corolla(w)), cell}});
}

PastingCell monad_mult(const SortedFamily& X, const NestedPasting& np) {
  std::map<Address, Opetope> shapes;
  for (const auto& [p, c] : np.inner) shapes.emplace(p, c.shape);
  Assembly a = assemble(np.outer, shapes);
  std::string why;
  if (!nested_compatible(X, np, &why)) throw Error(ErrorKind::NotAMap, why);
  if (np.outer.is_degenerate()) return make_pasting(X, a.result, {}, np.degenerate_cell);
  if (a.result.is_degenerate()) {
    if (!X.window().contains(a.result.phi().dim())) return make_pasting(X, a.result, {}, -1);
    std::map<Address, std::pair<Opetope, int>> cand;
    for (const auto& [p, c] : np.inner)
      if (c.shape.is_degenerate()) cand.emplace(p, std::make_pair(c.shape, degenerate_value(X, c)));
    return make_pasting(X, a.result, {}, locate_degenerate(a, cand));
  }
  // Phi(x)(P_xi[[p][l]]) = x_p(l)
  std::map<Address, int> nodes;
  for (const auto& [pl, r] : a.node_of) nodes[r] = pasting_node_cell(X, np.inner.at(pl.first), pl.second);
  return make_pasting(X, a.result, nodes);
}

PastingCell mult_inner_first(const SortedFamily& X, const NestedPasting3& np) {
  NestedPasting two{np.outer, {}, np.degenerate_cell};
  for (const auto& [p, inner] : np.inner) two.inner.emplace(p, monad_mult(X, inner));
  return monad_mult(X, two);
}

PastingCell mult_outer_first(const SortedFamily& X, const NestedPasting3& np) {
  if (np.outer.is_degenerate()) return monad_mult(X, NestedPasting{np.outer, {}, np.degenerate_cell});
  std::map<Address, Opetope> shapes;
  for (const auto& [p, inner] : np.inner) shapes.emplace(p, inner.outer);
  Assembly a = assemble(np.outer, shapes);
  NestedPasting two{a.result, {}, -1};
  for (const auto& [pq, r] : a.node_of) two.inner.emplace(r, np.inner.at(pq.first).inner.at(pq.second));
  if (a.result.is_degenerate() && X.window().contains(a.result.phi().dim())) {
    std::map<Address, std::pair<Opetope, int>> cand;
    for (const auto& [p, inner] : np.inner)
      if (inner.outer.is_degenerate()) cand.emplace(p, std::make_pair(inner.outer, inner.degenerate_cell));
    two.degenerate_cell = locate_degenerate(a, cand);
  }
  return monad_mult(X, two);
}

namespace {

std::size_t nodes_of(const NestedPasting& np) {
  std::size_t n = np.outer.node_count();
  for (const auto& [p, c] : np.inner) n += c.shape.node_count();
  return n;
}

template <class Option, class Build>
void product(const std::vector<Address>& nodes, const std::vector<std::vector<Option>>& options,
             std::function<std::size_t(const Option&)> weight, std::size_t budget, Build&& emit) {
  std::vector<const Option*> pick(nodes.size(), nullptr);
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) -> bool {
    if (i == nodes.size()) return emit(pick);
    for (const auto& o : options[i]) {
      std::size_t w = weight(o);
      if (w > left) continue;
      pick[i] = &o;
      if (!rec(i + 1, left - w)) return false;
    }
    return true;
  };
  rec(0, budget);
}

std::vector<NestedPasting> degenerate_nested(const SortedFamily& X, const Opetope& nu) {
  std::vector<NestedPasting> out;
  if (!X.window().contains(nu.phi().dim())) {
    out.push_back({nu, {}, -1});
    return out;
  }
  for (int c : X.base.cells_of(nu.phi())) out.push_back({nu, {}, c});
  return out;
}

}  // namespace

std::vector<NestedPasting> nested_pastings(const SortedFamily& X, const Opetope& w, std::size_t max_nodes) {
  std::vector<NestedPasting> out;
  for (const auto& nu : pasting_shapes(w, max_nodes)) {
    if (nu.is_degenerate()) {
      for (auto& np : degenerate_nested(X, nu)) out.push_back(std::move(np));
      continue;
    }
    auto nodes = nu.node_addresses();
    std::size_t budget = max_nodes - nu.node_count();
    std::vector<std::vector<PastingCell>> options;
    for (const auto& p : nodes) options.push_back(free_cells(X, source(nu, p), budget));
    product<PastingCell>(
        nodes, options, [](const PastingCell& c) { return c.shape.node_count(); }, budget,
        [&](const std::vector<const PastingCell*>& pick) {
          NestedPasting np{nu, {}, -1};
          for (std::size_t i = 0; i < nodes.size(); ++i) np.inner.emplace(nodes[i], *pick[i]);
          if (nested_compatible(X, np)) out.push_back(std::move(np));
          return true;
        });
  }
  return out;
}

std::vector<NestedPasting3> nested_pastings3(const SortedFamily& X, const Opetope& w, std::size_t max_nodes,
                                             std::size_t limit) {
  std::vector<NestedPasting3> out;
  for (const auto& nu : pasting_shapes(w, max_nodes)) {
    if (limit && out.size() >= limit) break;
    if (nu.is_degenerate()) {
      for (auto& np : degenerate_nested(X, nu)) out.push_back({nu, {}, np.degenerate_cell});
      continue;
    }
    auto nodes = nu.node_addresses();
    std::size_t budget = max_nodes - nu.node_count();
    std::vector<std::vector<NestedPasting>> options;
    for (const auto& p : nodes) options.push_back(nested_pastings(X, source(nu, p), budget));
    product<NestedPasting>(nodes, options, nodes_of, budget, [&](const std::vector<const NestedPasting*>& pick) {
      NestedPasting3 np{nu, {}, -1};
      NestedPasting level{nu, {}, -1};
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        np.inner.emplace(nodes[i], *pick[i]);
        level.inner.emplace(nodes[i], monad_mult(X, *pick[i]));
      }
      if (nested_compatible(X, level)) out.push_back(std::move(np));
      return !(limit && out.size() >= limit);
    });
  }
  return out;
}

// ---------------------------------------------------------------- algebras

std::string LawReport::str() const {
  std::ostringstream os;
  os << "unit instances: " << unit_checked << "\nmultiplication instances: " << mult_checked << "\n";
  if (ok()) {
    os << "laws hold\n";
  } else {
    for (const auto& v : violations) os << "violation: " << v << "\n";
  }
  return os.str();
}

LawReport check_algebra_laws(const OAlgebra& A, std::size_t max_nodes) {
  const SortedFamily& X = A.base;
  LawReport r;
  auto comp = [&](const PastingCell& c) -> int {
    auto it = A.comp.find(c);
    return it == A.comp.end() ? -1 : it->second;
  };
  for (std::size_t x = 0; x < X.base.size(); ++x) {
    if (X.base.cell(x).shape.dim() != X.n) continue;
    ++r.unit_checked;
    PastingCell u = monad_unit(X, static_cast<int>(x));
    int y = comp(u);
    if (y != static_cast<int>(x))
      r.violations.push_back("unit: " + pasting_str(X, u) + " -> " + (y < 0 ? "undefined" : X.base.cell(y).name));
  }
  for (const auto& w : X.base.shapes()) {
    if (w.dim() != X.n) continue;
    for (const auto& np : nested_pastings(X, w, max_nodes)) {
      ++r.mult_checked;
      PastingCell flat = monad_mult(X, np);
      int lhs = comp(flat);
      std::map<Address, int> outer_cells;
      bool defined = lhs >= 0;
      for (const auto& [p, c] : np.inner) {
        int v = comp(c);
        defined = defined && v >= 0;
        outer_cells[p] = v;
      }
      std::string where = np.outer.str() + " over " + [&] {
        std::string s;
        for (const auto& [p, c] : np.inner) s += (s.empty() ? "" : " ") + pasting_str(X, c);
        return s;
      }();
      if (!defined) {
        r.violations.push_back("composition undefined at " + where);
        continue;
      }
      int rhs;
      try {
        rhs = comp(make_pasting(X, np.outer, outer_cells, np.degenerate_cell));
      } catch (const Error& e) {
        r.violations.push_back("composites do not glue at " + where + ": " + e.what());
        continue;
      }
      if (lhs != rhs)
        r.violations.push_back("multiplication at " + where + ": " + X.base.cell(lhs).name + " vs " +
                               (rhs < 0 ? "undefined" : X.base.cell(rhs).name));
    }
  }
  return r;
}

// ---------------------------------------------------------------- graphs and categories

SortedFamily Graph::family() const {
  SortedFamily F(1, 1);
  F.base.add_shape(Opetope::point());
  F.base.add_shape(Opetope::arrow());
  for (const auto& v : vertices) F.base.add_cell(Opetope::point(), v);
  for (const auto& e : edges) {
    int c = F.base.add_cell(Opetope::arrow(), e.name);
    F.base.set_face(c, Face::s(Address::star()), e.src);
    F.base.set_face(c, Face::t(), e.tgt);
  }
  return F;
}

Graph Graph::parse(const std::string& text) {
  Graph g;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto vertex = [&](const std::string& v) {
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
      if (g.vertices[i] == v) return static_cast<int>(i);
    return -1;
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    for (char& ch : line)
      if (ch == ':') ch = ' ';
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    auto err = [&](const std::string& m) {
      throw Error(ErrorKind::ParseError, m + " (line " + std::to_string(lineno) + ")");
    };
    if (kw == "vertex") {
      std::string v;
      while (ls >> v) {
        if (vertex(v) >= 0) err("duplicate vertex " + v);
        g.vertices.push_back(v);
      }
    } else if (kw == "edge") {
      std::string f, a, arrow, b;
      if (!(ls >> f >> a >> arrow >> b) || arrow != "->") err("expected 'edge f: a -> b'");
      int s = vertex(a), t = vertex(b);
      if (s < 0 || t < 0) err("unknown vertex");
      for (const auto& e : g.edges)
        if (e.name == f) err("duplicate edge " + f);
      g.edges.push_back({f, s, t});
    } else {
      err("unknown keyword " + kw);
    }
  }
  return g;
}

std::string Graph::dump() const {
  std::string s = "vertex";
  for (const auto& v : vertices) s += " " + v;
  s += "\n";
  for (const auto& e : edges) s += "edge " + e.name + ": " + vertices[e.src] + " -> " + vertices[e.tgt] + "\n";
  return s;
}

int FiniteCategory::find_object(const std::string& name) const {
  for (std::size_t i = 0; i < objects.size(); ++i)
    if (objects[i] == name) return static_cast<int>(i);
  return -1;
}

int FiniteCategory::find_mor(const std::string& name) const {
  for (std::size_t i = 0; i < mors.size(); ++i)
    if (mors[i].name == name) return static_cast<int>(i);
  return -1;
}

int FiniteCategory::compose(int g, int f) const {
  if (mors.at(f).tgt != mors.at(g).src)
    throw Error(ErrorKind::NotComposable, mors[g].name + " after " + mors[f].name);
  auto it = comp.find({g, f});
  if (it != comp.end()) return it->second;
  if (id[mors[f].tgt] == g) return f;
  if (id[mors[g].src] == f) return g;
  throw Error(ErrorKind::NotACategory, "no composite " + mors[g].name + "." + mors[f].name);
}

void FiniteCategory::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::NotACategory, m); };
  if (id.size() != objects.size()) bad("every object needs an identity");
  for (std::size_t a = 0; a < objects.size(); ++a) {
    int i = id[a];
    if (i < 0 || i >= static_cast<int>(mors.size()) || mors[i].src != static_cast<int>(a) ||
        mors[i].tgt != static_cast<int>(a))
      bad("bad identity for " + objects[a]);
  }
  for (const auto& [gf, h] : comp) {
    auto [g, f] = gf;
    if (mors[f].tgt != mors[g].src) bad("composite of non-composable " + mors[g].name + "." + mors[f].name);
    if (mors[h].src != mors[f].src || mors[h].tgt != mors[g].tgt)
      bad(mors[g].name + "." + mors[f].name + " = " + mors[h].name + " has the wrong type");
  }
  for (std::size_t f = 0; f < mors.size(); ++f) {
    int fi = static_cast<int>(f);
    if (compose(id[mors[f].tgt], fi) != fi || compose(fi, id[mors[f].src]) != fi)
      bad("identity law fails at " + mors[f].name);
  }
  for (std::size_t f = 0; f < mors.size(); ++f)
    for (std::size_t g = 0; g < mors.size(); ++g) {
      if (mors[f].tgt != mors[g].src) continue;
      int gf = compose(static_cast<int>(g), static_cast<int>(f));
      for (std::size_t h = 0; h < mors.size(); ++h) {
        if (mors[g].tgt != mors[h].src) continue;
        int a = compose(static_cast<int>(h), gf);
        int b = compose(compose(static_cast<int>(h), static_cast<int>(g)), static_cast<int>(f));
        if (a != b)
          bad("associativity fails at " + mors[h].name + "." + mors[g].name + "." + mors[f].name + ": " +
              mors[a].name + " vs " + mors[b].name);
      }
    }
}

FiniteCategory FiniteCategory::parse(const std::string& text) {
  FiniteCategory C;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<std::pair<std::string, std::string>> ids;
  std::vector<std::tuple<std::string, std::string, std::string, int>> comps;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    for (char& ch : line)
      if (ch == ':' || ch == '=') ch = ' ';
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    auto err = [&](const std::string& m) {
      throw Error(ErrorKind::ParseError, m + " (line " + std::to_string(lineno) + ")");
    };
    if (kw == "obj") {
      std::string o;
      while (ls >> o) {
        if (C.find_object(o) >= 0) err("duplicate object " + o);
        C.objects.push_back(o);
      }
    } else if (kw == "mor") {
      std::string f, a, arrow, b;
      if (!(ls >> f >> a >> arrow >> b) || arrow != "->") err("expected 'mor f: a -> b'");
      int s = C.find_object(a), t = C.find_object(b);
      if (s < 0 || t < 0) err("unknown object");
      if (C.find_mor(f) >= 0) err("duplicate morphism " + f);
      C.mors.push_back({f, s, t});
    } else if (kw == "id") {
      std::string a, f;
      if (!(ls >> a >> f)) err("expected 'id a = f'");
      ids.emplace_back(a, f);
    } else if (kw == "comp") {
      std::string gf, h;
      if (!(ls >> gf >> h)) err("expected 'comp g.f = h'");
      auto dot = gf.find('.');
      if (dot == std::string::npos) err("expected 'comp g.f = h'");
      comps.emplace_back(gf.substr(0, dot), gf.substr(dot + 1), h, lineno);
    } else {
      err("unknown keyword " + kw);
    }
  }
  C.id.assign(C.objects.size(), -1);
  for (const auto& [a, f] : ids) {
    int o = C.find_object(a);
    if (o < 0) throw Error(ErrorKind::ParseError, "unknown object " + a);
    int m = C.find_mor(f);
    if (m < 0) {
      m = static_cast<int>(C.mors.size());
      C.mors.push_back({f, o, o});
    }
    C.id[o] = m;
  }
  for (std::size_t o = 0; o < C.objects.size(); ++o)
    if (C.id[o] < 0) {
      C.id[o] = static_cast<int>(C.mors.size());
      C.mors.push_back({"id_" + C.objects[o], static_cast<int>(o), static_cast<int>(o)});
    }
  for (const auto& [g, f, h, ln] : comps) {
    int gi = C.find_mor(g), fi = C.find_mor(f), hi = C.find_mor(h);
    if (gi < 0 || fi < 0 || hi < 0)
      throw Error(ErrorKind::ParseError, "unknown morphism (line " + std::to_string(ln) + ")");
    C.comp[{gi, fi}] = hi;
  }
  C.validate();
  return C;
}

std::string FiniteCategory::dump() const {
  std::ostringstream os;
  os << "obj";
  for (const auto& o : objects) os << " " << o;
  os << "\n";
  for (std::size_t f = 0; f < mors.size(); ++f)
    os << "mor " << mors[f].name << ": " << objects[mors[f].src] << " -> " << objects[mors[f].tgt] << "\n";
  for (std::size_t o = 0; o < objects.size(); ++o) os << "id " << objects[o] << " = " << mors[id[o]].name << "\n";
  for (const auto& [gf, h] : comp)
    os << "comp " << mors[gf.first].name << "." << mors[gf.second].name << " = " << mors[h].name << "\n";
  return os.str();
}

FiniteCategory FiniteCategory::free(const Graph& g) {
  std::size_t V = g.vertices.size();
  std::vector<int> state(V, 0);
  std::function<void(int)> dfs = [&](int v) {
    state[v] = 1;
    for (const auto& e : g.edges) {
      if (e.src != v) continue;
      if (state[e.tgt] == 1) throw Error(ErrorKind::InfiniteNerve, "cycle through " + g.vertices[e.tgt]);
      if (state[e.tgt] == 0) dfs(e.tgt);
    }
    state[v] = 2;
  };
  for (std::size_t v = 0; v < V; ++v)
    if (!state[v]) dfs(static_cast<int>(v));
  FiniteCategory C;
  C.objects = g.vertices;
  for (std::size_t v = 0; v < V; ++v) {
    C.id.push_back(static_cast<int>(C.mors.size()));
    C.mors.push_back({"id_" + g.vertices[v], static_cast<int>(v), static_cast<int>(v)});
  }
  // paths as edge sequences, named g.f in composition order
  std::map<std::vector<int>, int> path_mor;
  std::vector<std::vector<int>> frontier;
  for (std::size_t e = 0; e < g.edges.size(); ++e) frontier.push_back({static_cast<int>(e)});
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& p : frontier) {
      std::string name;
      for (int e : p) name = name.empty() ? g.edges[e].name : g.edges[e].name + "." + name;
      path_mor[p] = static_cast<int>(C.mors.size());
      C.mors.push_back({name, g.edges[p.front()].src, g.edges[p.back()].tgt});
      for (std::size_t e = 0; e < g.edges.size(); ++e)
        if (g.edges[e].src == g.edges[p.back()].tgt) {
          auto q = p;
          q.push_back(static_cast<int>(e));
          next.push_back(q);
        }
    }
    frontier = std::move(next);
  }
  for (const auto& [p, f] : path_mor)
    for (const auto& [q, h] : path_mor) {
      if (g.edges[p.back()].tgt != g.edges[q.front()].src) continue;
      auto pq = p;
      pq.insert(pq.end(), q.begin(), q.end());
      C.comp[{h, f}] = path_mor.at(pq);
    }
  return C;
}

FiniteCategory FiniteCategory::terminal() {
  FiniteCategory C;
  C.objects = {"o"};
  C.mors = {{"id_o", 0, 0}};
  C.id = {0};
  return C;
}

namespace {

SortedFamily category_graph(const FiniteCategory& C) {
  Graph g;
  g.vertices = C.objects;
  for (const auto& m : C.mors) g.edges.push_back({m.name, m.src, m.tgt});
  return g.family();
}

}  // namespace

OAlgebra category_algebra(const FiniteCategory& C, std::size_t max_nodes) {
  C.validate();
  OAlgebra A;
  A.base = category_graph(C);
  A.max_nodes = max_nodes;
  int V = static_cast<int>(C.objects.size());
  for (auto& c : free_cells(A.base, Opetope::arrow(), max_nodes)) {
    int value;
    if (c.shape.is_degenerate()) {
      value = V + C.id[degenerate_value(A.base, c)];
    } else {
      std::size_t m = c.shape.node_count();
      value = -1;
      // node [*^i] is the arrow m-1-i counted from the source
      for (std::size_t a = 0; a < m; ++a) {
        int f = pasting_node_cell(A.base, c, stars(m - 1 - a)) - V;
        value = value < 0 ? f : C.compose(f, value);
      }
      value += V;
    }
    A.comp.emplace(std::move(c), value);
  }
  return A;
}

// ---------------------------------------------------------------- Delta and h

std::string MonotoneMap::str() const {
  std::string s = "[" + std::to_string(dom) + "]->[" + std::to_string(cod) + "] ";
  for (std::size_t i = 0; i < image.size(); ++i) s += (i ? "," : "") + std::to_string(image[i]);
  return s;
}

MonotoneMap compose(const MonotoneMap& f, const MonotoneMap& g) {
  if (g.cod != f.dom) throw Error(ErrorKind::NotComposable, f.str() + " after " + g.str());
  MonotoneMap r{g.dom, f.cod, {}};
  for (int v : g.image) r.image.push_back(f.image[v]);
  return r;
}

MonotoneMap identity_map(int m) {
  MonotoneMap r{m, m, {}};
  for (int i = 0; i <= m; ++i) r.image.push_back(i);
  return r;
}

std::string LambdaObject::str() const { return kind + "[" + shape.str() + "]"; }

LambdaObject h_object(const Opetope& w, int k, int n) {
  k = std::min(k, n);
  int d = w.dim();
  if (d < n - k || d > n + 2) throw Error(ErrorKind::WindowViolation, w.str() + " outside [n-k, n+2]");
  if (d <= n) return {"Z O", w};
  if (d == n + 1) return {"Z S", w};
  return {"Z S", target(w)};
}

int h_ordinal(const Opetope& w) {
  switch (w.dim()) {
    case 0:
      return 0;
    case 1:
      return 1;
    case 2:
      return static_cast<int>(w.node_count());
    case 3:
      return static_cast<int>(target(w).node_count());
    default:
      throw Error(ErrorKind::WindowViolation, w.str() + " outside [0, 3]");
  }
}

namespace {

// Vertex positions of each node of a 3-opetope along t xi, visiting the inputs
// of a node from the source end of its decoration.
std::map<Address, std::vector<int>> vertex_positions(const Opetope& xi) {
  std::map<Address, std::vector<int>> pos;
  std::function<int(const Address&, int)> visit = [&](const Address& p, int offset) {
    std::size_t k = xi.nodes().at(p).node_count();
    std::vector<int> v{offset};
    int count = 0;
    for (std::size_t a = 0; a < k; ++a) {
      Address child = p.push(stars(k - 1 - a));
      count += xi.has_node(child) ? visit(child, offset + count) : 1;
      v.push_back(offset + count);
    }
    pos[p] = std::move(v);
    return count;
  };
  visit(Address(), 0);
  return pos;
}

}  // namespace

MonotoneMap h_morphism(const Opetope& w, const Face& g) {
  int m = h_ordinal(w);
  if (g.is_target ? w.dim() < 1 : !w.has_node(g.addr))
    throw Error(ErrorKind::AddressNotANode, g.str() + " into " + w.str());
  switch (w.dim()) {
    case 1:
      return {0, 1, {g.is_target ? 1 : 0}};
    case 2:
      if (g.is_target) return {1, m, {0, m}};
      return {1, m, {m - 1 - static_cast<int>(g.addr.size()), m - static_cast<int>(g.addr.size())}};
    case 3: {
      if (g.is_target) return identity_map(m);
      auto pos = vertex_positions(w);
      const auto& v = pos.at(g.addr);
      return {static_cast<int>(v.size()) - 1, m, v};
    }
    default:
      throw Error(ErrorKind::WindowViolation, w.str() + " outside [1, 3]");
  }
}

std::map<Address, std::vector<Address>> h_node_map(const Opetope& xi, const Address& p) {
  if (!xi.has_node(p) || xi.dim() < 3) throw Error(ErrorKind::AddressNotANode, p.str() + " in " + xi.str());
  const auto& P = readdress(xi);
  std::map<Address, std::vector<Address>> out;
  for (const auto& q : source(xi, p).node_addresses()) {
    Address pq = p.push(q);
    auto& dst = out[q];
    for (const auto& [j, r] : P)
      if (pq.is_prefix_of(j)) dst.push_back(r);
    std::sort(dst.begin(), dst.end());
  }
  return out;
}

MonotoneMap h_diagram(const Diagram& d) { return h_morphism(d.xi, Face::s(d.node)); }

Diagram diagram_compose(const Diagram& d1, const Diagram& d2) {
  if (!d2.xi.has_node(d2.node) || !(target(d1.xi) == source(d2.xi, d2.node)))
    throw Error(ErrorKind::NotComposable, "target of the first diagram is not the chosen source of the second");
  return Diagram{substitute(d2.xi, d2.node, d1.xi), d2.node.concat(d1.node)};
}

Diagram diagram_for(const MonotoneMap& f) {
  int m = f.dom, m2 = f.cod;
  Opetope inner = Opetope::corolla(Opetope::integer(m));
  for (int a = 0; a < m; ++a) {
    int len = f.image[a + 1] - f.image[a];
    if (len == 1) continue;
    Address leaf = Address().push(stars(m - 1 - a));
    inner = graft_corolla(inner, leaf, len == 0 ? Opetope::integer(0) : Opetope::integer(len));
  }
  int pre = f.image[0], post = m2 - f.image[m];
  if (pre == 0 && post == 0) return Diagram{inner, Address()};
  int K = pre + 1 + post;
  Address at = Address().push(stars(K - 1 - pre));
  return Diagram{graft(Opetope::corolla(Opetope::integer(K)), at, inner), at};
}

std::vector<MonotoneMap> monotone_maps(int m, int m2) {
  std::vector<MonotoneMap> out;
  std::vector<int> v(m + 1, 0);
  std::function<void(int, int)> rec = [&](int i, int lo) {
    if (i > m) {
      out.push_back({m, m2, v});
      return;
    }
    for (int x = lo; x <= m2; ++x) {
      v[i] = x;
      rec(i + 1, x);
    }
  };
  rec(0, 0);
  return out;
}

std::set<MonotoneMap> h_generated_maps(std::size_t max_size, int max_ordinal) {
  std::set<MonotoneMap> seen;
  std::vector<MonotoneMap> work;
  auto add = [&](const MonotoneMap& f) {
    if (f.dom > max_ordinal || f.cod > max_ordinal) return;
    if (seen.insert(f).second) work.push_back(f);
  };
  for (int d = 0; d <= 3; ++d)
    for (const auto& w : enumerate_opetopes(d, max_size)) {
      add(identity_map(h_ordinal(w)));
      for (const auto& g : faces(w)) add(h_morphism(w, g));
    }
  while (!work.empty()) {
    MonotoneMap f = work.back();
    work.pop_back();
    std::vector<MonotoneMap> fresh;
    for (const auto& g : seen) {
      if (g.cod == f.dom) fresh.push_back(compose(f, g));
      if (f.cod == g.dom) fresh.push_back(compose(g, f));
    }
    for (const auto& h : fresh) add(h);
  }
  return seen;
}

// ---------------------------------------------------------------- nerves

FinOpSet nerve_category(const FiniteCategory& C, std::size_t max_size) {
  C.validate();
  FinOpSet N(Window{0, 3});
  for (int d = 0; d <= 3; ++d)
    for (const auto& w : enumerate_opetopes(d, max_size)) N.add_shape_closed(w);

  // a chain of length m: m composable morphisms from the source, or one object when m = 0
  using Chain = std::vector<int>;
  auto chains = [&](int m) {
    std::vector<Chain> out;
    if (m == 0) {
      for (std::size_t o = 0; o < C.objects.size(); ++o) out.push_back({static_cast<int>(o)});
      return out;
    }
    std::function<void(Chain&)> rec = [&](Chain& c) {
      if (static_cast<int>(c.size()) == m) {
        out.push_back(c);
        return;
      }
      for (std::size_t f = 0; f < C.mors.size(); ++f) {
        if (!c.empty() && C.mors[c.back()].tgt != C.mors[f].src) continue;
        c.push_back(static_cast<int>(f));
        rec(c);
        c.pop_back();
      }
    };
    Chain c;
    rec(c);
    return out;
  };
  auto object_at = [&](const Chain& c, int m, int i) {
    if (m == 0) return c[0];
    return i < m ? C.mors[c[i]].src : C.mors[c[m - 1]].tgt;
  };
  auto restrict_chain = [&](const Chain& c, int m, const MonotoneMap& f) {
    if (f.dom == 0) return Chain{object_at(c, m, f.image[0])};
    Chain r;
    for (int i = 0; i < f.dom; ++i) {
      int a = f.image[i], b = f.image[i + 1];
      int g = C.id[object_at(c, m, a)];
      for (int j = a; j < b; ++j) g = C.compose(c[j], g);
      r.push_back(g);
    }
    return r;
  };

  std::map<std::pair<Opetope, Chain>, int> cell;
  int tag3 = 0;
  for (const auto& w : N.shapes()) {
    int m = h_ordinal(w);
    std::string tag = w.dim() == 2 ? "I" + std::to_string(m) : w.dim() == 3 ? "x" + std::to_string(tag3++) : "";
    for (const auto& c : chains(m)) {
      std::string name;
      if (w.dim() == 0) {
        name = C.objects[c[0]];
      } else if (w.dim() == 1) {
        name = C.mors[c[0]].name;
      } else {
        name = tag + ":";
        for (std::size_t i = 0; i < c.size(); ++i)
          name += (i ? "," : "") + (m == 0 ? C.objects[c[i]] : C.mors[c[i]].name);
      }
      cell[{w, c}] = N.add_cell(w, name);
    }
  }
  for (const auto& [wc, id] : cell) {
    const auto& [w, c] = wc;
    int m = h_ordinal(w);
    for (const auto& g : faces(w)) {
      Opetope d = face_domain(w, g);
      N.set_face(id, g, cell.at({d, restrict_chain(c, m, h_morphism(w, g))}));
    }
  }
  return N;
}

std::string NerveReport::str() const {
  auto line = [](const char* name, const ClassCheck& c) {
    std::string s = std::string(name) + ": " + (c.holds ? "holds" : "fails") + " (" + std::to_string(c.tested) +
                    " shapes)";
    if (c.failure) {
      s += "\n  at " + c.failure->shape + ": " + c.failure->problem + " for";
      for (const auto& [a, x] : c.failure->witness) s += " " + a + "->" + x;
    }
    return s + "\n";
  };
  return line("S2", s2) + line("S3", s3) + line("B3", b3);
}

NerveReport nerve_axioms_check(const FinOpSet& N) {
  if (!(N.window() == Window{0, 3})) throw Error(ErrorKind::WindowViolation, "nerves live over [0, 3]");
  NerveReport r;
  r.s2 = class_orthogonal(InclusionClass::Spine, 2, N);
  r.s3 = class_orthogonal(InclusionClass::Spine, 3, N);
  r.b3 = class_orthogonal(InclusionClass::Boundary, 3, N);
  return r;
}

}  // namespace opetopes
