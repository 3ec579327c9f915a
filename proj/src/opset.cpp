#include "opetopes/opset.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "opetopes/error.hpp"

namespace opetopes {

int face_index(const Opetope& shape, const Face& f) {
  auto fs = faces(shape);
  for (std::size_t i = 0; i < fs.size(); ++i)
    if (fs[i] == f) return static_cast<int>(i);
  return -1;
}

bool in_window(const Window& w, const Opetope& shape) { return w.contains(shape.dim()); }

const std::vector<int>& FinOpSet::cells_of(const Opetope& shape) const {
  static const std::vector<int> none;
  auto it = by_shape_.find(shape);
  return it == by_shape_.end() ? none : it->second;
}

void FinOpSet::add_shape(const Opetope& shape) {
  if (!in_window(window_, shape))
    throw Error(ErrorKind::WindowViolation, shape.str() + " outside [" + std::to_string(window_.lo) + "," +
                                                std::to_string(window_.hi) + "]");
  shapes_.insert(shape);
}

void FinOpSet::add_shape_closed(const Opetope& shape) {
  if (!in_window(window_, shape) || shapes_.count(shape)) return;
  shapes_.insert(shape);
  for (const auto& f : faces(shape)) add_shape_closed(face_domain(shape, f));
}

int FinOpSet::add_cell(const Opetope& shape, std::string name) {
  add_shape(shape);
  int id = static_cast<int>(cells_.size());
  if (name.empty()) name = "c" + std::to_string(id);
  if (!by_name_.emplace(name, id).second) throw Error(ErrorKind::InvalidArgument, "duplicate cell name " + name);
  cells_.push_back(Cell{shape, std::move(name), std::vector<int>(faces(shape).size(), -1)});
  by_shape_[shape].push_back(id);
  return id;
}

void FinOpSet::set_face(int cell, const Face& f, int to) {
  int i = face_index(cells_.at(cell).shape, f);
  if (i < 0) throw Error(ErrorKind::AddressNotANode, f.str() + " is not a face of " + cells_[cell].shape.str());
  cells_[cell].faces[i] = to;
}

int FinOpSet::face(int cell, const Face& f) const {
  int i = face_index(cells_.at(cell).shape, f);
  if (i < 0) throw Error(ErrorKind::AddressNotANode, f.str() + " is not a face of " + cells_[cell].shape.str());
  return cells_[cell].faces[i];
}

int FinOpSet::restrict(int cell, const FaceWord& w) const {
  for (const auto& f : w) {
    if (cell < 0) return -1;
    cell = face(cell, f);
  }
  return cell;
}

int FinOpSet::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? -1 : it->second;
}

Report FinOpSet::check() const {
  Report r;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const Cell& x = cells_[c];
    auto fs = faces(x.shape);
    for (std::size_t i = 0; i < fs.size(); ++i) {
      Opetope d = face_domain(x.shape, fs[i]);
      if (!in_window(window_, d)) continue;
      int y = x.faces[i];
      if (y < 0) {
        r.issues.push_back({"missing-face", x.name, fs[i].str()});
      } else if (!(cells_[y].shape == d)) {
        r.issues.push_back({"face-shape", x.name, fs[i].str() + " lands in " + cells_[y].name});
      }
    }
  }
  if (!r.ok()) return r;
  for (const auto& x : cells_) {
    if (x.shape.dim() < 2 || !window_.contains(x.shape.dim() - 2)) continue;
    int id = find(x.name);
    for (const auto& sq : relation_squares(x.shape)) {
      int a = restrict(id, {sq.g1, sq.g2});
      int b = restrict(id, {sq.h1, sq.h2});
      if (a != b)
        r.issues.push_back({sq.name, x.name, sq.g1.str() + "." + sq.g2.str() + " vs " + sq.h1.str() + "." + sq.h2.str()});
    }
  }
  return r;
}

std::string FinOpSet::dump() const {
  std::ostringstream os;
  os << "window " << window_.lo << " " << window_.hi << "\n";
  for (const auto& s : shapes_) {
    os << "shape " << s.str() << " cells";
    for (int c : cells_of(s)) os << " " << cells_[c].name;
    os << "\n";
  }
  for (const auto& s : shapes_) {
    auto fs = faces(s);
    for (int c : cells_of(s))
      for (std::size_t i = 0; i < fs.size(); ++i)
        if (cells_[c].faces[i] >= 0)
          os << "face " << cells_[c].name << " " << fs[i].str() << " -> " << cells_[cells_[c].faces[i]].name << "\n";
  }
  return os.str();
}

namespace {

Face parse_face(const std::string& tok) {
  if (tok == "t") return Face::t();
  if (tok.size() >= 2 && tok[0] == 's') return Face::s(Address::parse(tok.substr(1)));
  throw Error(ErrorKind::ParseError, "bad generator " + tok);
}

}  // namespace

FinOpSet FinOpSet::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::optional<Window> win;
  struct PendingShape {
    Opetope shape;
    std::vector<std::string> cells;
  };
  std::vector<PendingShape> shapes;
  struct PendingFace {
    std::string from, gen, to;
    int line;
  };
  std::vector<PendingFace> fcs;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    auto where = [&] { return " (line " + std::to_string(lineno) + ")"; };
    if (kw == "window") {
      Window w;
      if (!(ls >> w.lo >> w.hi) || w.lo > w.hi) throw Error(ErrorKind::ParseError, "bad window" + where());
      win = w;
    } else if (kw == "shape") {
      auto pos = line.find(" cells");
      auto start = line.find("shape") + 5;
      if (pos == std::string::npos) throw Error(ErrorKind::ParseError, "missing 'cells'" + where());
      PendingShape ps{parse_opetope(line.substr(start, pos - start)), {}};
      std::istringstream cs(line.substr(pos + 6));
      std::string c;
      while (cs >> c) ps.cells.push_back(c);
      shapes.push_back(std::move(ps));
    } else if (kw == "face") {
      PendingFace f;
      std::string arrow;
      if (!(ls >> f.from >> f.gen >> arrow >> f.to) || arrow != "->")
        throw Error(ErrorKind::ParseError, "bad face line" + where());
      f.line = lineno;
      fcs.push_back(f);
    } else {
      throw Error(ErrorKind::ParseError, "unknown keyword " + kw + where());
    }
  }
  if (!win) {
    Window w{1 << 20, -1};
    for (const auto& s : shapes) {
      w.lo = std::min(w.lo, s.shape.dim());
      w.hi = std::max(w.hi, s.shape.dim());
    }
    if (shapes.empty()) w = Window{0, 0};
    win = w;
  }
  FinOpSet X(*win);
  for (const auto& s : shapes) {
    X.add_shape(s.shape);
    for (const auto& c : s.cells) X.add_cell(s.shape, c);
  }
  for (const auto& f : fcs) {
    int a = X.find(f.from), b = X.find(f.to);
    if (a < 0 || b < 0) throw Error(ErrorKind::ParseError, "unknown cell on line " + std::to_string(f.line));
    X.set_face(a, parse_face(f.gen), b);
  }
  return X;
}

bool is_map(const FinOpSet& X, const FinOpSet& Y, const OpSetMap& f, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (f.size() != X.size()) return fail("wrong number of components");
  for (std::size_t c = 0; c < X.size(); ++c) {
    int y = f[c];
    if (y < 0 || y >= static_cast<int>(Y.size())) return fail("cell " + X.cell(c).name + " unmapped");
    if (!(Y.cell(y).shape == X.cell(c).shape)) return fail("cell " + X.cell(c).name + " changes shape");
    const auto& xf = X.cell(c).faces;
    const auto& yf = Y.cell(y).faces;
    for (std::size_t i = 0; i < xf.size(); ++i)
      if (xf[i] >= 0 && f[xf[i]] != yf[i]) return fail("naturality fails at " + X.cell(c).name);
  }
  return true;
}

std::vector<int> face_closure(const FinOpSet& X, const std::vector<int>& generators) {
  std::vector<char> seen(X.size(), 0);
  std::deque<int> q(generators.begin(), generators.end());
  while (!q.empty()) {
    int c = q.front();
    q.pop_front();
    if (seen[c]) continue;
    seen[c] = 1;
    for (int f : X.cell(c).faces)
      if (f >= 0 && !seen[f]) q.push_back(f);
  }
  std::vector<int> out;
  for (std::size_t c = 0; c < X.size(); ++c)
    if (seen[c]) out.push_back(static_cast<int>(c));
  return out;
}

Inclusion subpresheaf(const FinOpSet& X, const std::vector<int>& keep) {
  Inclusion inc;
  inc.super = X;
  inc.sub = FinOpSet(X.window());
  for (const auto& s : X.shapes()) inc.sub.add_shape(s);
  std::vector<int> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> to_sub(X.size(), -1);
  for (int c : sorted) {
    to_sub[c] = inc.sub.add_cell(X.cell(c).shape, X.cell(c).name);
    inc.map.push_back(c);
  }
  for (int c : sorted) {
    const auto& fs = X.cell(c).faces;
    auto gens = faces(X.cell(c).shape);
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (fs[i] < 0) continue;
      if (to_sub[fs[i]] < 0)
        throw Error(ErrorKind::NotAMap, "cell set not closed under faces at " + X.cell(c).name);
      inc.sub.set_face(to_sub[c], gens[i], to_sub[fs[i]]);
    }
  }
  return inc;
}

FinOpSet remove_cells(const FinOpSet& X, const std::vector<int>& cells) {
  std::vector<char> gone(X.size(), 0);
  for (int c : cells) gone[c] = 1;
  std::vector<int> order(X.size());
  for (std::size_t c = 0; c < X.size(); ++c) order[c] = static_cast<int>(c);
  std::stable_sort(order.begin(), order.end(),
                   [&](int p, int q) { return X.cell(p).shape.dim() < X.cell(q).shape.dim(); });
  for (int c : order)
    for (int f : X.cell(c).faces)
      if (f >= 0 && gone[f]) gone[c] = 1;
  std::vector<int> keep;
  for (std::size_t c = 0; c < X.size(); ++c)
    if (!gone[c]) keep.push_back(static_cast<int>(c));
  return subpresheaf(X, keep).sub;
}

FinOpSet representable(const Opetope& w, std::optional<Window> window) {
  Window win = window.value_or(Window{0, w.dim()});
  auto table = hom_table(w);
  const auto& ms = table->morphisms();
  FinOpSet X(win);
  std::vector<int> cell_of(ms.size(), -1);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (!in_window(win, ms[i].dom)) continue;
    X.add_shape(ms[i].dom);
    cell_of[i] = X.add_cell(ms[i].dom, word_str(ms[i].word));
  }
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (cell_of[i] < 0) continue;
    for (const auto& f : faces(ms[i].dom)) {
      FaceWord wd = ms[i].word;
      wd.push_back(f);
      int j = cell_of[table->class_of(wd)];
      if (j >= 0) X.set_face(cell_of[i], f, j);
    }
  }
  return X;
}

std::vector<int> spine_cells(const Opetope& w) {
  FinOpSet R = representable(w);
  std::vector<int> out;
  if (w.dim() == 0) return out;
  int t = R.find(word_str({Face::t()}));
  std::vector<int> state(R.size(), 0);  // 0 unknown, 1 reaches t, 2 does not
  std::function<bool(int)> reaches = [&](int c) -> bool {
    if (state[c]) return state[c] == 1;
    bool r = c == t;
    for (int f : R.cell(c).faces)
      if (!r && f >= 0 && reaches(f)) r = true;
    state[c] = r ? 1 : 2;
    return r;
  };
  for (std::size_t c = 1; c < R.size(); ++c)
    if (!reaches(static_cast<int>(c))) out.push_back(static_cast<int>(c));
  return out;
}

namespace {

Inclusion restricted(const Opetope& w, std::optional<Window> window, const std::vector<int>& keep_full) {
  FinOpSet R = representable(w, window);
  FinOpSet full = representable(w);
  std::set<std::string> names;
  for (int c : keep_full) names.insert(full.cell(c).name);
  std::vector<int> keep;
  for (std::size_t c = 0; c < R.size(); ++c)
    if (names.count(R.cell(c).name)) keep.push_back(static_cast<int>(c));
  return subpresheaf(R, keep);
}

}  // namespace

Inclusion boundary(const Opetope& w, std::optional<Window> window) {
  FinOpSet full = representable(w);
  std::vector<int> keep;
  for (std::size_t c = 1; c < full.size(); ++c) keep.push_back(static_cast<int>(c));
  return restricted(w, window, keep);
}

Inclusion spine(const Opetope& w, std::optional<Window> window) { return restricted(w, window, spine_cells(w)); }

Inclusion empty_inclusion(const Opetope& w, std::optional<Window> window) { return restricted(w, window, {}); }

namespace {

struct MapSearch {
  const FinOpSet& X;
  const FinOpSet& Y;
  std::vector<int> a;
  std::vector<int> trail;
  std::vector<int> order;
  std::size_t limit;
  std::size_t found = 0;
  std::function<void(const std::vector<int>&)> emit;

  bool assign(int x, int y) {
    if (a[x] == y) return true;
    if (a[x] != -1) return false;
    if (!(X.cell(x).shape == Y.cell(y).shape)) return false;
    a[x] = y;
    trail.push_back(x);
    const auto& xf = X.cell(x).faces;
    const auto& yf = Y.cell(y).faces;
    for (std::size_t i = 0; i < xf.size(); ++i) {
      if (xf[i] < 0) continue;
      if (yf[i] < 0 || !assign(xf[i], yf[i])) return false;
    }
    return true;
  }

  void undo(std::size_t to) {
    while (trail.size() > to) {
      a[trail.back()] = -1;
      trail.pop_back();
    }
  }

  bool done() const { return limit && found >= limit; }

  void run(std::size_t k) {
    if (done()) return;
    while (k < order.size() && a[order[k]] != -1) ++k;
    if (k == order.size()) {
      ++found;
      if (emit) emit(a);
      return;
    }
    int x = order[k];
    for (int y : Y.cells_of(X.cell(x).shape)) {
      std::size_t mark = trail.size();
      if (assign(x, y)) run(k + 1);
      undo(mark);
      if (done()) return;
    }
  }
};

std::size_t search(const FinOpSet& X, const FinOpSet& Y, const OpSetMap& fixed, std::size_t limit,
                   std::function<void(const std::vector<int>&)> emit) {
  MapSearch s{X, Y, std::vector<int>(X.size(), -1), {}, {}, limit, 0, std::move(emit)};
  for (std::size_t c = 0; c < X.size(); ++c) s.order.push_back(static_cast<int>(c));
  // higher cells first: their faces are then forced
  std::stable_sort(s.order.begin(), s.order.end(),
                   [&](int p, int q) { return X.cell(p).shape.dim() > X.cell(q).shape.dim(); });
  for (std::size_t c = 0; c < fixed.size() && c < X.size(); ++c) {
    if (fixed[c] < 0) continue;
    if (!s.assign(static_cast<int>(c), fixed[c])) return 0;
  }
  s.run(0);
  return s.found;
}

}  // namespace

std::vector<OpSetMap> maps(const FinOpSet& X, const FinOpSet& Y, const OpSetMap& fixed, std::size_t limit) {
  std::vector<OpSetMap> out;
  search(X, Y, fixed, limit, [&](const std::vector<int>& a) { out.push_back(a); });
  return out;
}

std::size_t count_maps(const FinOpSet& X, const FinOpSet& Y, const OpSetMap& fixed, std::size_t limit) {
  return search(X, Y, fixed, limit, nullptr);
}

std::optional<LiftFailure> orthogonality_failure(const Inclusion& i, const FinOpSet& X) {
  if (!(i.super.window() == X.window()))
    throw Error(ErrorKind::WindowViolation, "inclusion and target use different windows");
  for (const auto& c : i.super.cells())
    if (!X.shapes().count(c.shape))
      throw Error(ErrorKind::WindowViolation, "shape " + c.shape.str() + " is not covered by the target set");
  std::optional<LiftFailure> failure;
  std::string shape_name;
  for (const auto& c : i.super.cells())
    if (c.name == "id") shape_name = c.shape.str();
  search(i.sub, X, {}, 0, [&](const std::vector<int>& a) {
    if (failure) return;
    OpSetMap fixed(i.super.size(), -1);
    for (std::size_t k = 0; k < a.size(); ++k) fixed[i.map[k]] = a[k];
    std::size_t n = count_maps(i.super, X, fixed, 2);
    if (n == 1) return;
    LiftFailure f;
    f.shape = shape_name;
    f.problem = n == 0 ? "no extension" : "several extensions";
    for (std::size_t k = 0; k < a.size(); ++k) f.witness.emplace_back(i.sub.cell(k).name, X.cell(a[k]).name);
    failure = f;
  });
  return failure;
}

bool orthogonal(const Inclusion& i, const FinOpSet& X) { return !orthogonality_failure(i, X).has_value(); }

Pushout pushout(const FinOpSet& X, const Inclusion& a_in_b, const OpSetMap& f) {
  if (!is_map(a_in_b.sub, X, f)) throw Error(ErrorKind::NotAMap, "attaching map is not natural");
  Pushout p;
  p.result = X;
  for (const auto& s : a_in_b.super.shapes())
    if (in_window(X.window(), s)) p.result.add_shape(s);
  p.from_x.resize(X.size());
  for (std::size_t c = 0; c < X.size(); ++c) p.from_x[c] = static_cast<int>(c);
  const FinOpSet& B = a_in_b.super;
  p.from_b.assign(B.size(), -1);
  for (std::size_t k = 0; k < a_in_b.map.size(); ++k) p.from_b[a_in_b.map[k]] = f[k];
  std::size_t fresh = 0;
  for (std::size_t b = 0; b < B.size(); ++b) {
    if (p.from_b[b] >= 0) continue;
    std::string name = "n" + std::to_string(X.size() + fresh++);
    while (p.result.find(name) >= 0) name += "'";
    p.from_b[b] = p.result.add_cell(B.cell(b).shape, name);
  }
  for (std::size_t b = 0; b < B.size(); ++b) {
    int r = p.from_b[b];
    if (r < static_cast<int>(X.size())) continue;
    auto gens = faces(B.cell(b).shape);
    const auto& fs = B.cell(b).faces;
    for (std::size_t i = 0; i < fs.size(); ++i)
      if (fs[i] >= 0) p.result.set_face(r, gens[i], p.from_b[fs[i]]);
  }
  return p;
}

SpineDecomposition spine_cell_decomposition(const Opetope& xi) {
  if (xi.dim() < 2) throw Error(ErrorKind::InvalidArgument, "spine decomposition needs dimension >= 2");
  SpineDecomposition d;
  d.xi = xi;
  auto table = hom_table(xi);
  FinOpSet R = representable(xi);
  auto cell_of_word = [&](const FaceWord& w) { return R.find(word_str(table->normal(w).word)); };
  Opetope txi = target(xi);
  const auto& t_ms = hom_table(txi)->morphisms();
  std::set<int> present;
  for (int c : spine_cells(txi)) {
    FaceWord w{Face::t()};
    const auto& m = t_ms[c];
    w.insert(w.end(), m.word.begin(), m.word.end());
    int r = cell_of_word(w);
    d.initial.push_back(r);
    present.insert(r);
  }
  std::sort(d.initial.begin(), d.initial.end());
  if (xi.is_degenerate()) return d;
  std::vector<Address> order = xi.node_addresses();
  std::reverse(order.begin(), order.end());
  for (const auto& p : order) {
    SpineStep step{p, source(xi, p), {}};
    Inclusion S = spine(step.shape);
    const auto& nu_ms = hom_table(step.shape)->morphisms();
    for (std::size_t k = 0; k < S.sub.size(); ++k) {
      FaceWord w{Face::s(p)};
      const auto& m = nu_ms[S.map[k]];
      w.insert(w.end(), m.word.begin(), m.word.end());
      int r = cell_of_word(w);
      if (!present.count(r))
        throw Error(ErrorKind::NotAMap, "attaching cell " + R.cell(r).name + " is not yet present at " + p.str());
      step.attach.push_back(r);
    }
    for (const auto& m : nu_ms) {
      FaceWord w{Face::s(p)};
      w.insert(w.end(), m.word.begin(), m.word.end());
      present.insert(cell_of_word(w));
    }
    d.steps.push_back(std::move(step));
  }
  return d;
}

std::pair<FinOpSet, OpSetMap> replay_spine_decomposition(const SpineDecomposition& d) {
  FinOpSet R = representable(d.xi);
  auto table = hom_table(d.xi);
  Inclusion start = subpresheaf(R, d.initial);
  FinOpSet X = start.sub;
  OpSetMap label = start.map;
  for (const auto& step : d.steps) {
    Inclusion S = spine(step.shape);
    std::map<int, int> x_of_label;
    for (std::size_t c = 0; c < label.size(); ++c) x_of_label[label[c]] = static_cast<int>(c);
    OpSetMap f;
    for (int r : step.attach) f.push_back(x_of_label.at(r));
    Pushout po = pushout(X, S, f);
    OpSetMap next(po.result.size(), -1);
    for (std::size_t c = 0; c < X.size(); ++c) next[po.from_x[c]] = label[c];
    const auto& nu_ms = hom_table(step.shape)->morphisms();
    for (std::size_t b = 0; b < S.super.size(); ++b) {
      if (next[po.from_b[b]] >= 0) continue;
      FaceWord w{Face::s(step.node)};
      const auto& m = nu_ms[b];
      w.insert(w.end(), m.word.begin(), m.word.end());
      next[po.from_b[b]] = R.find(word_str(table->normal(w).word));
    }
    X = std::move(po.result);
    label = std::move(next);
  }
  return {X, label};
}

ClassCheck class_orthogonal(InclusionClass kind, int dim, const FinOpSet& X) {
  ClassCheck out;
  for (const auto& w : X.shapes()) {
    if (w.dim() != dim) continue;
    Inclusion inc = kind == InclusionClass::Spine      ? spine(w, X.window())
                    : kind == InclusionClass::Boundary ? boundary(w, X.window())
                                                       : empty_inclusion(w, X.window());
    ++out.tested;
    auto f = orthogonality_failure(inc, X);
    if (f) {
      if (f->shape.empty()) f->shape = w.str();
      out.holds = false;
      out.failure = f;
      return out;
    }
  }
  return out;
}

std::string HLiftReport::str() const {
  auto b = [](const ClassCheck& c) { return std::string(c.holds ? "holds" : "fails") + " (" + std::to_string(c.tested) + " shapes)"; };
  std::ostringstream os;
  os << "S_n: " << b(s_n) << "\nS_n+1: " << b(s_n1) << "\nB_n+1: " << b(b_n1) << "\nB_n+2: " << b(b_n2)
     << "\nS_n+2: " << b(s_n2) << "\nimplication 1: " << (implication1 ? "ok" : "VIOLATED")
     << "\nimplication 2: " << (implication2 ? "ok" : "VIOLATED") << "\n";
  return os.str();
}

HLiftReport hlift_check(const FinOpSet& X, int n) {
  if (!X.window().contains(n) || !X.window().contains(n + 2))
    throw Error(ErrorKind::WindowViolation, "window must cover [n, n+2]");
  HLiftReport r;
  r.s_n = class_orthogonal(InclusionClass::Spine, n, X);
  r.s_n1 = class_orthogonal(InclusionClass::Spine, n + 1, X);
  r.b_n1 = class_orthogonal(InclusionClass::Boundary, n + 1, X);
  r.b_n2 = class_orthogonal(InclusionClass::Boundary, n + 2, X);
  r.s_n2 = class_orthogonal(InclusionClass::Spine, n + 2, X);
  bool ante = r.s_n.holds && r.s_n1.holds;
  r.implication1 = !ante || r.b_n1.holds;
  r.implication2 = !(ante && r.b_n2.holds) || r.s_n2.holds;
  return r;
}

FinOpSet terminal_opset(Window w, std::size_t max_size) {
  FinOpSet X(w);
  for (int d = w.lo; d <= w.hi; ++d)
    for (const auto& s : enumerate_opetopes(d, max_size)) X.add_shape_closed(s);
  std::map<Opetope, int> cell;
  for (const auto& s : X.shapes()) cell[s] = X.add_cell(s, "*" + s.str());
  for (const auto& s : X.shapes())
    for (const auto& f : faces(s)) {
      Opetope d = face_domain(s, f);
      if (in_window(w, d)) X.set_face(cell[s], f, cell.at(d));
    }
  return X;
}

}  // namespace opetopes
