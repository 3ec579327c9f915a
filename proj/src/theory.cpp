#include "opetopes/theory.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "opetopes/error.hpp"

namespace opetopes {

// ---------------------------------------------------------------- direct categories

namespace {

bool is_identity(const FiniteCategory& C, int f) { return C.id[C.mors[f].src] == f; }

std::vector<int> object_dims(const FiniteCategory& C) {
  std::vector<int> dim(C.objects.size(), -1);
  std::vector<char> busy(C.objects.size(), 0);
  std::function<int(int)> go = [&](int c) {
    if (dim[c] >= 0) return dim[c];
    if (busy[c]) throw Error(ErrorKind::InvalidArgument, "category is not direct");
    busy[c] = 1;
    int d = 0;
    for (std::size_t f = 0; f < C.mors.size(); ++f)
      if (C.mors[f].tgt == c && !is_identity(C, static_cast<int>(f))) d = std::max(d, go(C.mors[f].src) + 1);
    busy[c] = 0;
    return dim[c] = d;
  };
  for (std::size_t c = 0; c < C.objects.size(); ++c) go(static_cast<int>(c));
  return dim;
}

// Non-identity morphisms into c, by dimension of their source.
std::vector<int> cover_of(const FiniteCategory& C, const std::vector<int>& dims, int c) {
  std::vector<int> out;
  for (std::size_t f = 0; f < C.mors.size(); ++f)
    if (C.mors[f].tgt == c && !is_identity(C, static_cast<int>(f))) out.push_back(static_cast<int>(f));
  std::stable_sort(out.begin(), out.end(),
                   [&](int a, int b) { return dims[C.mors[a].src] < dims[C.mors[b].src]; });
  return out;
}

}  // namespace

std::string LfdReport::str(const FiniteCategory& C) const {
  std::ostringstream os;
  if (!direct) {
    os << "not direct; cycle:";
    for (const auto& c : cycle) os << " " << c;
    os << "\n";
  }
  for (const auto& i : issues) os << "issue: " << i << "\n";
  if (direct)
    for (std::size_t c = 0; c < C.objects.size(); ++c) {
      os << C.objects[c] << ": dim " << dims[c] << ", cover {";
      for (std::size_t i = 0; i < covers[c].size(); ++i) os << (i ? ", " : "") << C.mors[covers[c][i]].name;
      os << "}\n";
    }
  return os.str();
}

LfdReport validate_lfd(const FiniteCategory& C) {
  LfdReport r;
  try {
    C.validate();
  } catch (const Error& e) {
    r.issues.push_back(e.what());
    return r;
  }
  std::size_t n = C.objects.size();
  // cycle search on the relation c < d
  std::vector<int> state(n, 0), parent(n, -1);
  std::function<bool(int)> dfs = [&](int c) -> bool {
    state[c] = 1;
    for (std::size_t f = 0; f < C.mors.size(); ++f) {
      if (C.mors[f].src != c || is_identity(C, static_cast<int>(f))) continue;
      int d = C.mors[f].tgt;
      if (state[d] == 1) {
        r.cycle.push_back(C.objects[d]);
        for (int x = c; x != d && x >= 0; x = parent[x]) r.cycle.push_back(C.objects[x]);
        std::reverse(r.cycle.begin(), r.cycle.end());
        return true;
      }
      if (state[d] == 0) {
        parent[d] = c;
        if (dfs(d)) return true;
      }
    }
    state[c] = 2;
    return false;
  };
  for (std::size_t c = 0; c < n && r.cycle.empty(); ++c)
    if (!state[c] && dfs(static_cast<int>(c))) break;
  if (!r.cycle.empty()) {
    r.direct = false;
    return r;
  }
  r.dims = object_dims(C);
  for (std::size_t c = 0; c < n; ++c) {
    r.covers.push_back(cover_of(C, r.dims, static_cast<int>(c)));
    std::set<int> cov(r.covers.back().begin(), r.covers.back().end());
    for (int f : r.covers.back())
      for (std::size_t g = 0; g < C.mors.size(); ++g)
        if (C.mors[g].tgt == C.mors[f].src && !cov.count(C.compose(f, static_cast<int>(g))))
          r.issues.push_back("cover of " + C.objects[c] + " is not saturated at " + C.mors[f].name);
  }
  return r;
}

FiniteCategory globe_category() {
  return FiniteCategory::parse("obj D0 D1\nmor s: D0 -> D1\nmor t: D0 -> D1\n");
}

FiniteCategory semi_simplex_category(int n) {
  FiniteCategory C;
  std::map<std::pair<int, std::vector<int>>, int> by_image;  // (cod, image) -> morphism
  for (int i = 0; i <= n; ++i) C.objects.push_back("S" + std::to_string(i));
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      // subsets of size i+1 of [0..j]
      std::vector<int> pick(j + 1, 0);
      std::fill(pick.begin(), pick.begin() + i + 1, 1);
      std::vector<std::vector<int>> images;
      do {
        std::vector<int> img;
        for (int k = 0; k <= j; ++k)
          if (pick[k]) img.push_back(k);
        images.push_back(img);
      } while (std::prev_permutation(pick.begin(), pick.end()));
      std::sort(images.begin(), images.end());
      for (const auto& img : images) {
        std::string name = i == j ? "id_S" + std::to_string(i) : "d" + std::to_string(j) + "_";
        if (i != j)
          for (int k : img) name += std::to_string(k);
        by_image[{j, img}] = static_cast<int>(C.mors.size());
        C.mors.push_back({name, i, j});
      }
    }
  C.id.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    std::vector<int> img(i + 1);
    std::iota(img.begin(), img.end(), 0);
    C.id[i] = by_image.at({i, img});
  }
  std::map<int, std::vector<int>> image_of;
  for (const auto& [key, f] : by_image) image_of[f] = key.second;
  for (std::size_t f = 0; f < C.mors.size(); ++f)
    for (std::size_t g = 0; g < C.mors.size(); ++g) {
      if (C.mors[f].tgt != C.mors[g].src) continue;
      std::vector<int> img;
      for (int k : image_of[f]) img.push_back(image_of[g][k]);
      C.comp[{static_cast<int>(g), static_cast<int>(f)}] = by_image.at({C.mors[g].tgt, img});
    }
  C.validate();
  return C;
}

std::optional<CategoryIso> category_isomorphism(const FiniteCategory& C, const FiniteCategory& D) {
  std::size_t n = C.objects.size();
  if (n != D.objects.size() || C.mors.size() != D.mors.size()) return std::nullopt;
  auto hom_count = [](const FiniteCategory& K, int a, int b) {
    int k = 0;
    for (const auto& m : K.mors)
      if (m.src == a && m.tgt == b) ++k;
    return k;
  };
  CategoryIso iso;
  iso.objects.assign(n, -1);
  std::vector<char> used_obj(n, 0);
  std::vector<int> nonid;
  for (std::size_t f = 0; f < C.mors.size(); ++f)
    if (!is_identity(C, static_cast<int>(f))) nonid.push_back(static_cast<int>(f));

  std::function<bool(std::size_t)> assign_mors;
  std::vector<char> used_mor(D.mors.size(), 0);
  auto consistent = [&](int f) {
    for (int g : nonid) {
      if (iso.mors[g] < 0) continue;
      for (int pair = 0; pair < 2; ++pair) {
        int a = pair ? g : f, b = pair ? f : g;  // a after b
        if (C.mors[b].tgt != C.mors[a].src) continue;
        int ab = C.compose(a, b);
        if (iso.mors[ab] < 0) continue;
        if (D.compose(iso.mors[a], iso.mors[b]) != iso.mors[ab]) return false;
      }
    }
    return true;
  };
  assign_mors = [&](std::size_t i) -> bool {
    if (i == nonid.size()) return true;
    int f = nonid[i];
    int s = iso.objects[C.mors[f].src], t = iso.objects[C.mors[f].tgt];
    for (std::size_t g = 0; g < D.mors.size(); ++g) {
      if (used_mor[g] || D.mors[g].src != s || D.mors[g].tgt != t || is_identity(D, static_cast<int>(g))) continue;
      iso.mors[f] = static_cast<int>(g);
      used_mor[g] = 1;
      if (consistent(f) && assign_mors(i + 1)) return true;
      used_mor[g] = 0;
      iso.mors[f] = -1;
    }
    return false;
  };
  std::function<bool(std::size_t)> assign_obj = [&](std::size_t c) -> bool {
    if (c == n) {
      iso.mors.assign(C.mors.size(), -1);
      std::fill(used_mor.begin(), used_mor.end(), 0);
      for (std::size_t o = 0; o < n; ++o) {
        iso.mors[C.id[o]] = D.id[iso.objects[o]];
        used_mor[D.id[iso.objects[o]]] = 1;
      }
      return assign_mors(0);
    }
    for (std::size_t d = 0; d < n; ++d) {
      if (used_obj[d]) continue;
      bool ok = true;
      for (std::size_t e = 0; e <= c && ok; ++e) {
        int de = e == c ? static_cast<int>(d) : iso.objects[e];
        ok = hom_count(C, static_cast<int>(c), static_cast<int>(e)) == hom_count(D, static_cast<int>(d), de) &&
             hom_count(C, static_cast<int>(e), static_cast<int>(c)) == hom_count(D, de, static_cast<int>(d));
      }
      if (!ok) continue;
      iso.objects[c] = static_cast<int>(d);
      used_obj[d] = 1;
      if (assign_obj(c + 1)) return true;
      used_obj[d] = 0;
      iso.objects[c] = -1;
    }
    return false;
  };
  if (!assign_obj(0)) return std::nullopt;
  return iso;
}

// ---------------------------------------------------------------- presheaves

Presheaf::Presheaf(const FiniteCategory* C) : cat(C) {
  if (C) {
    cells.resize(C->objects.size());
    act.resize(C->mors.size());
  }
}

int Presheaf::add_cell(int object, const std::string& name) {
  int idx = static_cast<int>(cells[object].size());
  cells[object].push_back(name);
  for (std::size_t f = 0; f < cat->mors.size(); ++f)
    if (cat->mors[f].tgt == object) act[f].push_back(cat->id[object] == static_cast<int>(f) ? idx : -1);
  return idx;
}

std::size_t Presheaf::total() const {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.size();
  return n;
}

Report Presheaf::check() const {
  Report r;
  const FiniteCategory& C = *cat;
  for (std::size_t f = 0; f < C.mors.size(); ++f) {
    const auto& m = C.mors[f];
    if (act[f].size() != cells[m.tgt].size()) {
      r.issues.push_back({"action", m.name, "wrong number of entries"});
      continue;
    }
    for (std::size_t x = 0; x < act[f].size(); ++x) {
      int y = act[f][x];
      if (y < 0 || y >= static_cast<int>(cells[m.src].size()))
        r.issues.push_back({"action", cells[m.tgt][x], "restriction along " + m.name + " missing"});
      else if (is_identity(C, static_cast<int>(f)) && y != static_cast<int>(x))
        r.issues.push_back({"identity", cells[m.tgt][x], "identity acts non-trivially"});
    }
  }
  if (!r.ok()) return r;
  for (const auto& [gf, h] : C.comp) {
    auto [g, f] = gf;
    for (std::size_t x = 0; x < cells[C.mors[g].tgt].size(); ++x)
      if (act[h][x] != act[f][act[g][x]])
        r.issues.push_back({"functoriality", cells[C.mors[g].tgt][x],
                            "restriction along " + C.mors[h].name + " differs from " + C.mors[g].name + " then " +
                                C.mors[f].name});
  }
  return r;
}

std::string Presheaf::dump() const {
  std::ostringstream os;
  const FiniteCategory& C = *cat;
  for (std::size_t o = 0; o < cells.size(); ++o)
    for (const auto& x : cells[o]) os << "cell " << x << " : " << C.objects[o] << "\n";
  for (std::size_t f = 0; f < C.mors.size(); ++f) {
    if (is_identity(C, static_cast<int>(f))) continue;
    for (std::size_t x = 0; x < act[f].size(); ++x)
      os << "act " << cells[C.mors[f].tgt][x] << " " << C.mors[f].name << " = " << cells[C.mors[f].src][act[f][x]]
         << "\n";
  }
  return os.str();
}

Presheaf Presheaf::parse(const FiniteCategory* C, const std::string& text) {
  Presheaf X(C);
  std::map<std::string, std::pair<int, int>> where;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<std::tuple<std::string, std::string, std::string, int>> acts;
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
    if (kw == "cell") {
      std::string x, o;
      if (!(ls >> x >> o)) err("expected 'cell x : object'");
      int oi = C->find_object(o);
      if (oi < 0) err("unknown object " + o);
      if (where.count(x)) err("duplicate cell " + x);
      where[x] = {oi, X.add_cell(oi, x)};
    } else if (kw == "act") {
      std::string x, f, y;
      if (!(ls >> x >> f >> y)) err("expected 'act x f = y'");
      acts.emplace_back(x, f, y, lineno);
    } else {
      err("unknown keyword " + kw);
    }
  }
  for (const auto& [x, f, y, ln] : acts) {
    auto err = [&](const std::string& m) {
      throw Error(ErrorKind::ParseError, m + " (line " + std::to_string(ln) + ")");
    };
    int fi = C->find_mor(f);
    if (fi < 0) err("unknown morphism " + f);
    auto xi = where.find(x), yi = where.find(y);
    if (xi == where.end() || yi == where.end()) err("unknown cell");
    if (xi->second.first != C->mors[fi].tgt || yi->second.first != C->mors[fi].src) err("ill-typed action");
    X.act[fi][xi->second.second] = yi->second.second;
  }
  auto r = X.check();
  if (!r.ok()) throw Error(ErrorKind::NotAMap, r.str());
  return X;
}

bool is_presheaf_map(const Presheaf& A, const Presheaf& X, const PresheafMap& f, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  const FiniteCategory& C = *A.cat;
  if (f.size() != A.cells.size()) return fail("wrong number of components");
  for (std::size_t o = 0; o < f.size(); ++o) {
    if (f[o].size() != A.cells[o].size()) return fail("component at " + C.objects[o] + " has the wrong size");
    for (int y : f[o])
      if (y < 0 || y >= static_cast<int>(X.cells[o].size())) return fail("component at " + C.objects[o] + " undefined");
  }
  for (std::size_t m = 0; m < C.mors.size(); ++m) {
    int s = C.mors[m].src, t = C.mors[m].tgt;
    for (std::size_t x = 0; x < A.cells[t].size(); ++x)
      if (f[s][A.act[m][x]] != X.act[m][f[t][x]]) return fail("not natural along " + C.mors[m].name);
  }
  return true;
}

std::vector<PresheafMap> presheaf_maps(const Presheaf& A, const Presheaf& X, std::size_t limit, bool injective) {
  const FiniteCategory& C = *A.cat;
  auto dims = object_dims(C);
  std::vector<std::pair<int, int>> order;
  for (std::size_t o = 0; o < A.cells.size(); ++o)
    for (std::size_t x = 0; x < A.cells[o].size(); ++x) order.emplace_back(static_cast<int>(o), static_cast<int>(x));
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return dims[a.first] > dims[b.first]; });
  PresheafMap f(A.cells.size());
  std::vector<std::vector<char>> used(X.cells.size());
  for (std::size_t o = 0; o < A.cells.size(); ++o) {
    f[o].assign(A.cells[o].size(), -1);
    used[o].assign(X.cells[o].size(), 0);
  }
  std::vector<std::pair<int, int>> trail;
  std::function<bool(int, int, int)> assign = [&](int o, int x, int y) -> bool {
    if (f[o][x] == y) return true;
    if (f[o][x] != -1) return false;
    if (injective && used[o][y]) return false;
    f[o][x] = y;
    if (injective) used[o][y] = 1;
    trail.emplace_back(o, x);
    for (std::size_t m = 0; m < C.mors.size(); ++m)
      if (C.mors[m].tgt == o && !is_identity(C, static_cast<int>(m)))
        if (!assign(C.mors[m].src, A.act[m][x], X.act[m][y])) return false;
    return true;
  };
  auto undo = [&](std::size_t to) {
    while (trail.size() > to) {
      auto [o, x] = trail.back();
      if (injective) used[o][f[o][x]] = 0;
      f[o][x] = -1;
      trail.pop_back();
    }
  };
  std::vector<PresheafMap> out;
  std::function<void(std::size_t)> run = [&](std::size_t k) {
    if (limit && out.size() >= limit) return;
    while (k < order.size() && f[order[k].first][order[k].second] != -1) ++k;
    if (k == order.size()) {
      out.push_back(f);
      return;
    }
    auto [o, x] = order[k];
    for (std::size_t y = 0; y < X.cells[o].size(); ++y) {
      std::size_t mark = trail.size();
      if (assign(o, x, static_cast<int>(y))) run(k + 1);
      undo(mark);
      if (limit && out.size() >= limit) return;
    }
  };
  run(0);
  return out;
}

std::optional<PresheafMap> presheaf_isomorphism(const Presheaf& A, const Presheaf& X) {
  for (std::size_t o = 0; o < A.cells.size(); ++o)
    if (A.cells[o].size() != X.cells[o].size()) return std::nullopt;
  auto ms = presheaf_maps(A, X, 1, true);
  if (ms.empty()) return std::nullopt;
  return ms.front();
}

Presheaf representable_c(const FiniteCategory& C, int c) {
  Presheaf X(&C);
  std::vector<int> index(C.mors.size(), -1);
  for (std::size_t f = 0; f < C.mors.size(); ++f)
    if (C.mors[f].tgt == c) index[f] = X.add_cell(C.mors[f].src, C.mors[f].name);
  for (std::size_t g = 0; g < C.mors.size(); ++g) {
    int d = C.mors[g].tgt;
    for (std::size_t f = 0; f < C.mors.size(); ++f)
      if (C.mors[f].tgt == c && C.mors[f].src == d) X.act[g][index[f]] = index[C.compose(static_cast<int>(f), static_cast<int>(g))];
  }
  return X;
}

PresheafInclusion boundary_c(const FiniteCategory& C, int c) {
  PresheafInclusion inc{Presheaf(&C), representable_c(C, c), {}};
  inc.map.resize(C.objects.size());
  std::map<std::pair<int, int>, int> sub_index;
  for (std::size_t o = 0; o < C.objects.size(); ++o)
    for (std::size_t x = 0; x < inc.super.cells[o].size(); ++x) {
      if (static_cast<int>(o) == c && inc.super.cells[o][x] == C.mors[C.id[c]].name) continue;
      sub_index[{static_cast<int>(o), static_cast<int>(x)}] = inc.sub.add_cell(static_cast<int>(o), inc.super.cells[o][x]);
      inc.map[o].push_back(static_cast<int>(x));
    }
  for (std::size_t g = 0; g < C.mors.size(); ++g) {
    int d = C.mors[g].tgt, s = C.mors[g].src;
    for (std::size_t x = 0; x < inc.sub.cells[d].size(); ++x)
      inc.sub.act[g][x] = sub_index.at({s, inc.super.act[g][inc.map[d][x]]});
  }
  return inc;
}

Presheaf random_presheaf(const FiniteCategory& C, std::mt19937& rng, int max_cells_per_object) {
  auto dims = object_dims(C);
  std::vector<int> objs(C.objects.size());
  std::iota(objs.begin(), objs.end(), 0);
  std::stable_sort(objs.begin(), objs.end(), [&](int a, int b) { return dims[a] < dims[b]; });
  Presheaf X(&C);
  int counter = 0;
  for (int c : objs) {
    int k = std::uniform_int_distribution<int>(0, max_cells_per_object)(rng);
    auto bd = boundary_c(C, c);
    for (int i = 0; i < k; ++i) {
      auto options = presheaf_maps(bd.sub, X, 256);
      if (options.empty()) break;
      const auto& a = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
      int x = X.add_cell(c, "x" + std::to_string(counter++));
      for (std::size_t f = 0; f < C.mors.size(); ++f) {
        if (C.mors[f].tgt != c || is_identity(C, static_cast<int>(f))) continue;
        // the cell f of the boundary
        int s = C.mors[f].src;
        for (std::size_t j = 0; j < bd.sub.cells[s].size(); ++j)
          if (bd.sub.cells[s][j] == C.mors[f].name) X.act[f][x] = a[s][j];
      }
    }
  }
  return X;
}

// ---------------------------------------------------------------- contexts

std::string Context::str() const {
  const FiniteCategory& C = *cat;
  auto dims = object_dims(C);
  std::string s = "(";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Step& st = steps[i];
    s += (i ? ", " : "") + st.name + " : " + C.objects[st.object];
    if (!st.attach.empty()) {
      s += "(";
      for (std::size_t k = 0; k < st.attach.size(); ++k) s += (k ? "," : "") + steps[st.attach[k]].name;
      s += ")";
    }
  }
  return s + ")";
}

std::vector<std::pair<int, int>> realize_index(const Context& G) {
  std::vector<std::pair<int, int>> out;
  std::vector<int> count(G.cat->objects.size(), 0);
  for (const auto& st : G.steps) out.emplace_back(st.object, count[st.object]++);
  return out;
}

Presheaf realize(const Context& G) {
  const FiniteCategory& C = *G.cat;
  auto dims = object_dims(C);
  Presheaf X(&C);
  auto idx = realize_index(G);
  for (std::size_t i = 0; i < G.steps.size(); ++i) {
    const Step& st = G.steps[i];
    auto cover = cover_of(C, dims, st.object);
    if (st.attach.size() != cover.size())
      throw Error(ErrorKind::NotAMap, "attachment of " + st.name + " has the wrong size");
    int x = X.add_cell(st.object, st.name);
    for (std::size_t k = 0; k < cover.size(); ++k) {
      int j = st.attach[k];
      if (j < 0 || j >= static_cast<int>(i) || idx[j].first != C.mors[cover[k]].src)
        throw Error(ErrorKind::NotAMap, "attachment of " + st.name + " is ill-typed at " + C.mors[cover[k]].name);
      X.act[cover[k]][x] = idx[j].second;
    }
  }
  return X;
}

void validate_context(const Context& G) {
  auto r = realize(G).check();
  if (!r.ok()) throw Error(ErrorKind::NotAMap, r.str());
}

namespace {

Context context_in_order(const Presheaf& X, const std::vector<std::pair<int, int>>& order) {
  const FiniteCategory& C = *X.cat;
  auto dims = object_dims(C);
  Context G{&C, {}};
  std::map<std::pair<int, int>, int> step_of;
  for (const auto& [o, x] : order) {
    Step st{X.cells[o][x], o, {}};
    for (int f : cover_of(C, dims, o)) st.attach.push_back(step_of.at({C.mors[f].src, X.act[f][x]}));
    step_of[{o, x}] = static_cast<int>(G.steps.size());
    G.steps.push_back(std::move(st));
  }
  return G;
}

}  // namespace

ContextOfPresheaf presheaf_to_context(const Presheaf& X) {
  const FiniteCategory& C = *X.cat;
  auto dims = object_dims(C);
  std::vector<std::pair<int, int>> order;
  for (std::size_t o = 0; o < C.objects.size(); ++o)
    for (std::size_t x = 0; x < X.cells[o].size(); ++x) order.emplace_back(static_cast<int>(o), static_cast<int>(x));
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return dims[a.first] < dims[b.first]; });
  return ContextOfPresheaf{context_in_order(X, order), order};
}

std::vector<Context> all_contexts(const Presheaf& X, std::size_t limit) {
  const FiniteCategory& C = *X.cat;
  std::vector<std::pair<int, int>> cells;
  for (std::size_t o = 0; o < C.objects.size(); ++o)
    for (std::size_t x = 0; x < X.cells[o].size(); ++x) cells.emplace_back(static_cast<int>(o), static_cast<int>(x));
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> below;
  for (const auto& [o, x] : cells)
    for (std::size_t f = 0; f < C.mors.size(); ++f)
      if (C.mors[f].tgt == o && !is_identity(C, static_cast<int>(f)))
        below[{o, x}].emplace_back(C.mors[f].src, X.act[f][x]);
  std::vector<Context> out;
  std::set<std::pair<int, int>> placed;
  std::vector<std::pair<int, int>> order;
  std::function<void()> rec = [&] {
    if (limit && out.size() >= limit) return;
    if (order.size() == cells.size()) {
      out.push_back(context_in_order(X, order));
      return;
    }
    for (const auto& c : cells) {
      if (placed.count(c)) continue;
      bool ready = true;
      for (const auto& b : below[c]) ready = ready && placed.count(b);
      if (!ready) continue;
      placed.insert(c);
      order.push_back(c);
      rec();
      order.pop_back();
      placed.erase(c);
    }
  };
  rec();
  return out;
}

Context ctx_ft(const Context& G) {
  if (G.steps.empty()) throw Error(ErrorKind::EmptyContext, "ft of the empty context");
  Context F = G;
  F.steps.pop_back();
  return F;
}

PresheafMap ctx_pr(const Context& G) {
  Context F = ctx_ft(G);
  Presheaf A = realize(F);
  PresheafMap m(A.cells.size());
  for (std::size_t o = 0; o < A.cells.size(); ++o)
    for (std::size_t x = 0; x < A.cells[o].size(); ++x) m[o].push_back(static_cast<int>(x));
  return m;
}

Pullback ctx_pullback(const Context& G, const Context& D, const PresheafMap& f) {
  Context F = ctx_ft(G);
  Presheaf A = realize(F), B = realize(D);
  std::string why;
  if (!is_presheaf_map(A, B, f, &why)) throw Error(ErrorKind::NotAMap, why);
  auto idx_f = realize_index(F);
  auto idx_d = realize_index(D);
  std::map<std::pair<int, int>, int> step_d;
  for (std::size_t i = 0; i < idx_d.size(); ++i) step_d[idx_d[i]] = static_cast<int>(i);
  const Step& last = G.steps.back();
  Step moved{last.name, last.object, {}};
  for (int j : last.attach) {
    auto [o, x] = idx_f[j];
    moved.attach.push_back(step_d.at({o, f[o][x]}));
  }
  Pullback pb{D, {}};
  pb.context.steps.push_back(moved);
  Presheaf R = realize(pb.context);
  pb.connect.resize(A.cells.size());
  for (std::size_t o = 0; o < A.cells.size(); ++o) pb.connect[o] = f[o];
  pb.connect[last.object].push_back(static_cast<int>(R.cells[last.object].size()) - 1);
  return pb;
}

// ---------------------------------------------------------------- syntax

std::string Term::str(const std::vector<std::string>& names) const {
  if (is_var) return var >= 0 && var < static_cast<int>(names.size()) ? names[var] : head;
  std::string s = head + "(";
  for (std::size_t i = 0; i < args.size(); ++i) s += (i ? ", " : "") + args[i].str(names);
  return s + ")";
}

bool Term::operator==(const Term& o) const {
  if (is_var != o.is_var) return false;
  if (is_var) return var == o.var;
  return head == o.head && args == o.args;
}

std::string SortExpr::str(const std::vector<std::string>& names) const {
  if (args.empty()) return type;
  std::string s = type + "(";
  for (std::size_t i = 0; i < args.size(); ++i) s += (i ? ", " : "") + args[i].str(names);
  return s + ")";
}

const TypeDecl* Signature::find(const std::string& name) const {
  for (const auto& t : types)
    if (t.name == name) return &t;
  return nullptr;
}

int Signature::index(const std::string& name) const {
  for (std::size_t i = 0; i < types.size(); ++i)
    if (types[i].name == name) return static_cast<int>(i);
  return -1;
}

const TermDecl* Theory::find_op(const std::string& name) const {
  for (const auto& o : ops)
    if (o.name == name) return &o;
  return nullptr;
}

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Colon, Equals, Turnstile, LBracket, RBracket, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
};

std::vector<std::vector<Token>> tokenize_statements(const std::string& text) {
  std::vector<std::vector<Token>> stmts(1);
  int line = 1;
  auto err = [&](const std::string& m) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + m);
  };
  for (std::size_t i = 0; i < text.size();) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == '\n' || c == ';') {
      if (c == '\n') ++line;
      if (!stmts.back().empty()) stmts.emplace_back();
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (text.compare(i, 2, "|-") == 0) {
      stmts.back().push_back({Tok::Turnstile, "|-", line});
      i += 2;
      continue;
    }
    if (text.compare(i, 3, "\xE2\x8A\xA2") == 0) {
      stmts.back().push_back({Tok::Turnstile, "|-", line});
      i += 3;
      continue;
    }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' || text[j] == '\''))
        ++j;
      stmts.back().push_back({Tok::Ident, text.substr(i, j - i), line});
      i = j;
      continue;
    }
    Tok k;
    switch (c) {
      case '(':
        k = Tok::LParen;
        break;
      case ')':
        k = Tok::RParen;
        break;
      case ',':
        k = Tok::Comma;
        break;
      case ':':
        k = Tok::Colon;
        break;
      case '=':
        k = Tok::Equals;
        break;
      case '[':
        k = Tok::LBracket;
        break;
      case ']':
        k = Tok::RBracket;
        break;
      default:
        err(std::string("unexpected character '") + c + "'");
        return {};
    }
    stmts.back().push_back({k, std::string(1, c), line});
    ++i;
  }
  if (stmts.back().empty()) stmts.pop_back();
  for (auto& s : stmts) s.push_back({Tok::End, "", s.empty() ? line : s.back().line});
  return stmts;
}

struct RawTerm {
  std::string name;
  std::vector<RawTerm> args;
  bool parens = false;
};

Term make_var(int i, const std::string& name) {
  Term t;
  t.is_var = true;
  t.var = i;
  t.head = name;
  return t;
}

Term subst_term(const Term& t, const std::vector<Term>& theta) {
  if (t.is_var) return theta.at(t.var);
  Term r = t;
  for (auto& a : r.args) a = subst_term(a, theta);
  return r;
}

SortExpr subst_sort(const SortExpr& s, const std::vector<Term>& theta) {
  SortExpr r = s;
  for (auto& a : r.args) a = subst_term(a, theta);
  return r;
}

class Elaborator {
 public:
  explicit Elaborator(Theory& T, bool allow_terms) : T_(T), allow_terms_(allow_terms) {}

  void statement(const std::vector<Token>& toks) {
    toks_ = &toks;
    pos_ = 0;
    std::string label;
    if (peek().kind == Tok::LBracket) {
      ++pos_;
      label = expect(Tok::Ident, "label").text;
      expect(Tok::RBracket, "']'");
    }
    ctx_.clear();
    names_.clear();
    parse_context();
    expect(Tok::Turnstile, "'|-'");
    // classify the right-hand side
    bool is_type = toks.size() >= 2 && toks[toks.size() - 2].kind == Tok::Ident && toks[toks.size() - 2].text == "type";
    bool is_eq = false;
    int depth = 0;
    for (std::size_t i = pos_; i < toks.size(); ++i) {
      if (toks[i].kind == Tok::LParen) ++depth;
      if (toks[i].kind == Tok::RParen) --depth;
      if (toks[i].kind == Tok::Equals && depth == 0) is_eq = true;
    }
    if (is_type) {
      type_decl();
    } else if (is_eq) {
      if (!allow_terms_) fail(ErrorKind::ParseError, "equation in a signature");
      equation(label);
    } else {
      if (!allow_terms_) fail(ErrorKind::ParseError, "term declaration in a signature");
      term_decl();
    }
    expect(Tok::End, "end of statement");
  }

 private:
  Theory& T_;
  bool allow_terms_;
  const std::vector<Token>* toks_ = nullptr;
  std::size_t pos_ = 0;
  std::vector<Binding> ctx_;
  std::vector<std::string> names_;

  const Token& peek() const { return (*toks_)[pos_]; }
  [[noreturn]] void fail(ErrorKind k, const std::string& m) const {
    throw Error(k, "line " + std::to_string(peek().line) + ": " + m);
  }
  const Token& expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail(ErrorKind::ParseError, "expected " + what + ", got '" + peek().text + "'");
    return (*toks_)[pos_++];
  }

  bool is_symbol(const std::string& s) const { return T_.sig.find(s) || T_.find_op(s); }
  int var_index(const std::string& s) const {
    for (std::size_t i = names_.size(); i-- > 0;)
      if (names_[i] == s) return static_cast<int>(i);
    return -1;
  }

  RawTerm raw_term() {
    RawTerm r;
    r.name = expect(Tok::Ident, "identifier").text;
    if (peek().kind == Tok::LParen) {
      ++pos_;
      r.parens = true;
      if (peek().kind != Tok::RParen) {
        r.args.push_back(raw_term());
        while (peek().kind == Tok::Comma) {
          ++pos_;
          r.args.push_back(raw_term());
        }
      }
      expect(Tok::RParen, "')'");
    }
    return r;
  }

  void parse_context() {
    while (peek().kind != Tok::Turnstile) {
      std::vector<std::string> group;
      group.push_back(expect(Tok::Ident, "variable").text);
      // names separated by commas or blanks
      while (peek().kind == Tok::Ident || peek().kind == Tok::Comma) {
        if (peek().kind == Tok::Comma) ++pos_;
        group.push_back(expect(Tok::Ident, "variable").text);
      }
      expect(Tok::Colon, "':'");
      RawTerm sort = raw_term();
      SortExpr s = context_sort(sort);
      for (const auto& v : group) {
        if (is_symbol(v)) fail(ErrorKind::FreshnessViolation, "variable " + v + " clashes with a declared symbol");
        if (var_index(v) >= 0) fail(ErrorKind::FreshnessViolation, "variable " + v + " bound twice");
        ctx_.push_back({v, s});
        names_.push_back(v);
      }
      if (peek().kind == Tok::Comma) {
        ++pos_;
        continue;
      }
      if (peek().kind != Tok::Turnstile) fail(ErrorKind::ParseError, "expected ',' or '|-'");
    }
  }

  // Sorts in contexts only apply type symbols to variables.
  SortExpr context_sort(const RawTerm& r) {
    const TypeDecl* td = T_.sig.find(r.name);
    if (!td) {
      if (T_.find_op(r.name)) fail(ErrorKind::IllFormedContext, "context-constraint: " + r.name + " is a term symbol");
      fail(ErrorKind::IllFormedContext, "unknown type " + r.name);
    }
    SortExpr s{r.name, {}};
    for (const auto& a : r.args) {
      if (a.parens || T_.find_op(a.name))
        fail(ErrorKind::IllFormedContext, "context-constraint: term symbol " + a.name + " in a context");
      int v = var_index(a.name);
      if (v < 0) fail(ErrorKind::IllFormedContext, "unbound variable " + a.name);
      s.args.push_back(make_var(v, a.name));
    }
    check_sort(s);
    return s;
  }

  // The arguments of s fit the context of its type.
  void check_sort(const SortExpr& s) {
    const TypeDecl* td = T_.sig.find(s.type);
    if (s.args.size() != td->context.size())
      fail(ErrorKind::IllFormedContext, s.type + " expects " + std::to_string(td->context.size()) + " arguments");
    for (std::size_t j = 0; j < s.args.size(); ++j) {
      SortExpr want = subst_sort(td->context[j].sort, s.args);
      SortExpr got = infer(s.args[j]);
      if (!(want == got))
        fail(ErrorKind::IllFormedContext, "argument " + s.args[j].str(names_) + " of " + s.type + " has sort " +
                                              got.str(names_) + ", expected " + want.str(names_));
    }
  }

  Term elaborate(const RawTerm& r) {
    int v = var_index(r.name);
    if (v >= 0 && !r.parens) return make_var(v, r.name);
    const TermDecl* op = T_.find_op(r.name);
    if (!op) fail(ErrorKind::IllFormedContext, "unknown symbol " + r.name);
    if (r.args.size() != op->explicit_args.size())
      fail(ErrorKind::IllFormedContext, r.name + " expects " + std::to_string(op->explicit_args.size()) + " arguments");
    Term t{r.name, {}, false, -1};
    for (const auto& a : r.args) t.args.push_back(elaborate(a));
    infer(t);
    return t;
  }

  // Matches the declared context of an operation against its actual arguments.
  std::vector<Term> instantiate(const TermDecl& op, const Term& t) {
    std::vector<std::optional<Term>> theta(op.context.size());
    std::function<void(int, const Term&)> bind = [&](int v, const Term& x) {
      if (theta[v] && !(*theta[v] == x))
        fail(ErrorKind::IllFormedContext, "in " + t.str(names_) + ": " + op.context[v].name + " is both " +
                                              theta[v]->str(names_) + " and " + x.str(names_));
      if (theta[v]) return;
      theta[v] = x;
      SortExpr got = infer(x);
      const SortExpr& pat = op.context[v].sort;
      if (got.type != pat.type)
        fail(ErrorKind::IllFormedContext, "in " + t.str(names_) + ": " + x.str(names_) + " has sort " +
                                              got.str(names_) + ", expected " + pat.type);
      for (std::size_t j = 0; j < pat.args.size(); ++j) bind(pat.args[j].var, got.args[j]);
    };
    for (std::size_t i = 0; i < op.explicit_args.size(); ++i) bind(op.explicit_args[i], t.args[i]);
    std::vector<Term> out;
    for (std::size_t v = 0; v < theta.size(); ++v) {
      if (!theta[v]) fail(ErrorKind::IllFormedContext, "cannot infer " + op.context[v].name + " in " + t.str(names_));
      out.push_back(*theta[v]);
    }
    return out;
  }

  SortExpr infer(const Term& t) {
    if (t.is_var) return ctx_.at(t.var).sort;
    const TermDecl* op = T_.find_op(t.head);
    return subst_sort(op->output, instantiate(*op, t));
  }

  SortExpr general_sort(const RawTerm& r) {
    if (!T_.sig.find(r.name)) fail(ErrorKind::IllFormedContext, "unknown type " + r.name);
    SortExpr s{r.name, {}};
    for (const auto& a : r.args) s.args.push_back(elaborate(a));
    check_sort(s);
    return s;
  }

  void fresh(const std::string& name) {
    if (is_symbol(name)) fail(ErrorKind::FreshnessViolation, "symbol " + name + " is not fresh");
    if (var_index(name) >= 0) fail(ErrorKind::FreshnessViolation, "symbol " + name + " is a variable of its context");
  }

  void type_decl() {
    std::string name = expect(Tok::Ident, "type name").text;
    fresh(name);
    if (peek().kind == Tok::LParen) {
      ++pos_;
      std::vector<std::string> vars;
      if (peek().kind != Tok::RParen) {
        vars.push_back(expect(Tok::Ident, "variable").text);
        while (peek().kind == Tok::Comma) {
          ++pos_;
          vars.push_back(expect(Tok::Ident, "variable").text);
        }
      }
      expect(Tok::RParen, "')'");
      if (vars != names_)
        fail(ErrorKind::IllFormedContext, "the arguments of " + name + " must list its context variables in order");
    }
    expect(Tok::Ident, "'type'");
    int grade = 0;
    for (const auto& b : ctx_) grade = std::max(grade, T_.sig.find(b.sort.type)->grade + 1);
    T_.sig.types.push_back({name, ctx_, grade});
  }

  void term_decl() {
    std::string name = expect(Tok::Ident, "operation name").text;
    fresh(name);
    expect(Tok::LParen, "'('");
    std::vector<int> args;
    if (peek().kind != Tok::RParen) {
      do {
        if (!args.empty()) ++pos_;
        std::string v = expect(Tok::Ident, "variable").text;
        int i = var_index(v);
        if (i < 0) fail(ErrorKind::IllFormedContext, "unbound variable " + v);
        if (std::find(args.begin(), args.end(), i) != args.end())
          fail(ErrorKind::IllFormedContext, "variable " + v + " passed twice");
        args.push_back(i);
      } while (peek().kind == Tok::Comma);
    }
    expect(Tok::RParen, "')'");
    expect(Tok::Colon, "':'");
    RawTerm out = raw_term();
    // every variable must be recoverable from the explicit arguments
    std::vector<char> known(ctx_.size(), 0);
    std::function<void(int)> learn = [&](int v) {
      if (known[v]) return;
      known[v] = 1;
      for (const auto& a : ctx_[v].sort.args) learn(a.var);
    };
    for (int a : args) learn(a);
    for (std::size_t v = 0; v < ctx_.size(); ++v)
      if (!known[v]) fail(ErrorKind::IllFormedContext, "variable " + ctx_[v].name + " of " + name + " cannot be inferred");
    TermDecl d{name, ctx_, args, general_sort(out), 0};
    d.output_dim = T_.sig.find(d.output.type)->grade;
    T_.ops.push_back(std::move(d));
  }

  void equation(const std::string& label) {
    RawTerm l = raw_term();
    expect(Tok::Equals, "'='");
    RawTerm r = raw_term();
    expect(Tok::Colon, "':'");
    RawTerm s = raw_term();
    Equation e{label.empty() ? "eq" + std::to_string(T_.eqns.size() + 1) : label, ctx_, elaborate(l), elaborate(r),
               general_sort(s)};
    for (const Term* side : {&e.lhs, &e.rhs}) {
      SortExpr got = infer(*side);
      if (!(got == e.sort))
        fail(ErrorKind::IllFormedContext, side->str(names_) + " has sort " + got.str(names_) + ", not " +
                                              e.sort.str(names_));
    }
    T_.eqns.push_back(std::move(e));
  }
};

std::vector<std::string> names_of(const std::vector<Binding>& ctx) {
  std::vector<std::string> n;
  for (const auto& b : ctx) n.push_back(b.name);
  return n;
}

std::string context_str(const std::vector<Binding>& ctx) {
  auto names = names_of(ctx);
  std::string s;
  for (std::size_t i = 0; i < ctx.size(); ++i) s += (i ? ", " : "") + ctx[i].name + " : " + ctx[i].sort.str(names);
  return s.empty() ? "|-" : s + " |-";
}

}  // namespace

Signature parse_signature(const std::string& text) {
  Theory T;
  Elaborator el(T, false);
  for (const auto& st : tokenize_statements(text)) el.statement(st);
  return T.sig;
}

Theory parse_theory(const std::string& text) {
  Theory T;
  Elaborator el(T, true);
  for (const auto& st : tokenize_statements(text)) el.statement(st);
  return T;
}

std::string signature_str(const Signature& S) {
  std::string s;
  for (const auto& t : S.types) {
    s += context_str(t.context) + " " + t.name;
    if (!t.context.empty()) {
      s += "(";
      for (std::size_t i = 0; i < t.context.size(); ++i) s += (i ? ", " : "") + t.context[i].name;
      s += ")";
    }
    s += " type\n";
  }
  return s;
}

std::string theory_str(const Theory& T) {
  std::string s = signature_str(T.sig);
  for (const auto& o : T.ops) {
    auto names = names_of(o.context);
    s += context_str(o.context) + " " + o.name + "(";
    for (std::size_t i = 0; i < o.explicit_args.size(); ++i) s += (i ? ", " : "") + names[o.explicit_args[i]];
    s += ") : " + o.output.str(names) + "\n";
  }
  for (const auto& e : T.eqns) {
    auto names = names_of(e.context);
    s += "[" + e.label + "] " + context_str(e.context) + " " + e.lhs.str(names) + " = " + e.rhs.str(names) + " : " +
         e.sort.str(names) + "\n";
  }
  return s;
}

FiniteCategory signature_to_lfd(const Signature& S) {
  FiniteCategory C;
  // full context of A: its declared context followed by a variable of sort A
  struct Entry {
    int type;
    std::vector<int> args;
    std::string name;
  };
  std::vector<std::vector<Entry>> full(S.types.size());
  std::vector<std::vector<int>> mor_at(S.types.size());  // entry -> morphism
  for (std::size_t a = 0; a < S.types.size(); ++a) {
    const auto& td = S.types[a];
    C.objects.push_back(td.name);
    for (const auto& b : td.context) {
      Entry e{S.index(b.sort.type), {}, b.name};
      for (const auto& t : b.sort.args) e.args.push_back(t.var);
      full[a].push_back(e);
    }
    Entry self{static_cast<int>(a), {}, ""};
    for (std::size_t i = 0; i < td.context.size(); ++i) self.args.push_back(static_cast<int>(i));
    full[a].push_back(self);
  }
  C.id.resize(S.types.size());
  for (std::size_t a = 0; a < S.types.size(); ++a)
    for (std::size_t i = 0; i < full[a].size(); ++i) {
      bool last = i + 1 == full[a].size();
      int m = static_cast<int>(C.mors.size());
      C.mors.push_back({last ? "id_" + S.types[a].name : S.types[a].name + "_" + full[a][i].name, full[a][i].type,
                        static_cast<int>(a)});
      mor_at[a].push_back(m);
      if (last) C.id[a] = m;
    }
  // (A, i) after (B, j): the context morphism of entry i sends the last entry of B to i
  // and the earlier ones to the arguments of i
  for (std::size_t a = 0; a < S.types.size(); ++a)
    for (std::size_t i = 0; i < full[a].size(); ++i) {
      int b = full[a][i].type;
      for (std::size_t j = 0; j < full[b].size(); ++j) {
        int image = j + 1 == full[b].size() ? static_cast<int>(i) : full[a][i].args[j];
        C.comp[{mor_at[a][i], mor_at[b][j]}] = mor_at[a][image];
      }
    }
  C.validate();
  return C;
}

namespace {

std::string identifier(std::string s) {
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) c = '_';
  if (s.empty()) s = "_";
  return s;
}

}  // namespace

Signature lfd_to_signature(const FiniteCategory& C) {
  auto rep = validate_lfd(C);
  if (!rep.ok()) throw Error(ErrorKind::NotACategory, "not a locally finite direct category");
  std::vector<int> objs(C.objects.size());
  std::iota(objs.begin(), objs.end(), 0);
  std::stable_sort(objs.begin(), objs.end(), [&](int a, int b) { return rep.dims[a] < rep.dims[b]; });
  Signature S;
  std::vector<std::string> tname(C.objects.size());
  std::set<std::string> used;
  for (int c : objs) {
    std::string n = identifier(C.objects[c]);
    while (used.count(n)) n += "'";
    used.insert(n);
    tname[c] = n;
  }
  for (int c : objs) {
    const auto& cover = rep.covers[c];
    std::map<int, int> pos;  // morphism -> variable position
    TypeDecl td{tname[c], {}, rep.dims[c]};
    std::set<std::string> vused(used);
    for (std::size_t k = 0; k < cover.size(); ++k) {
      int f = cover[k];
      int src = C.mors[f].src;
      std::string v = identifier(C.mors[f].name);
      while (vused.count(v)) v += "'";
      vused.insert(v);
      SortExpr s{tname[src], {}};
      for (int g : rep.covers[src]) {
        int fg = C.compose(f, g);
        s.args.push_back(make_var(pos.at(fg), td.context[pos.at(fg)].name));
      }
      pos[f] = static_cast<int>(k);
      td.context.push_back({v, s});
    }
    S.types.push_back(std::move(td));
  }
  return S;
}

// ---------------------------------------------------------------- models

namespace {

std::vector<Token> tokenize_flat(const std::string& text) {
  std::vector<Token> out;
  int line = 1;
  for (std::size_t i = 0; i < text.size();) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == '\n') {
      out.push_back({Tok::End, "\n", line++});
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (text.compare(i, 2, "->") == 0) {
      out.push_back({Tok::Turnstile, "->", line});
      i += 2;
      continue;
    }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' || text[j] == '\''))
        ++j;
      out.push_back({Tok::Ident, text.substr(i, j - i), line});
      i = j;
      continue;
    }
    std::string sym(1, c);
    Tok k = Tok::Comma;
    if (c == '(' || c == ')' || c == ',' || c == ';' || c == '{' || c == '}') k = Tok::Comma;
    else if (c == '=') k = Tok::Equals;
    else if (c == ':') k = Tok::Colon;
    else throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": unexpected character '" + sym + "'");
    // brackets and separators only delimit lists here
    out.push_back({k, sym, line});
    ++i;
  }
  out.push_back({Tok::End, "\n", line});
  return out;
}

}  // namespace

Model Model::parse(const std::string& text) {
  Model M;
  auto toks = tokenize_flat(text);
  std::size_t i = 0;
  auto err = [&](const std::string& m) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(toks[i].line) + ": " + m);
  };
  auto skip_newlines = [&] {
    while (i < toks.size() && toks[i].kind == Tok::End) ++i;
  };
  // identifiers up to a token of kind stop, across separators
  auto idents_until = [&](Tok stop, bool cross_lines) {
    std::vector<std::string> out;
    while (i < toks.size() && toks[i].kind != stop) {
      if (toks[i].kind == Tok::End && !cross_lines) break;
      if (toks[i].kind == Tok::Ident) out.push_back(toks[i].text);
      ++i;
    }
    return out;
  };
  skip_newlines();
  while (i < toks.size()) {
    if (toks[i].kind != Tok::Ident) err("expected 'sort' or 'op'");
    std::string kw = toks[i++].text;
    if (kw == "sort") {
      auto head = idents_until(Tok::Equals, false);
      if (i >= toks.size() || toks[i].kind != Tok::Equals || head.empty()) err("expected 'sort T(args) = {...}'");
      ++i;
      auto elems = idents_until(Tok::End, false);
      std::vector<std::string> index(head.begin() + 1, head.end());
      auto& s = M.sorts[head[0]];
      for (const auto& e : elems) {
        auto it = s.find(e);
        if (it != s.end() && it->second != index) err("element " + e + " lies in two instances of " + head[0]);
        s[e] = index;
      }
    } else if (kw == "op") {
      if (toks[i].kind != Tok::Ident) err("expected operation name");
      std::string name = toks[i++].text;
      auto rest = idents_until(Tok::Colon, false);
      if (rest.empty() || rest.back() != "table" || toks[i].kind != Tok::Colon) err("expected 'op f(args) table:'");
      ++i;
      auto& table = M.ops[name];
      // entries: args -> result, separated by newlines or ';'
      while (i < toks.size()) {
        while (i < toks.size() && (toks[i].kind == Tok::End || (toks[i].kind == Tok::Comma && toks[i].text == ";")))
          ++i;
        if (i >= toks.size()) break;
        if (toks[i].kind == Tok::Ident && (toks[i].text == "sort" || toks[i].text == "op")) break;
        std::vector<std::string> args;
        while (i < toks.size() && toks[i].kind != Tok::Turnstile) {
          if (toks[i].kind == Tok::End || toks[i].text == ";") err("expected '->' in table entry");
          if (toks[i].kind == Tok::Ident) args.push_back(toks[i].text);
          ++i;
        }
        if (i >= toks.size()) err("expected '->'");
        ++i;
        if (i >= toks.size() || toks[i].kind != Tok::Ident) err("expected result after '->'");
        std::string result = toks[i++].text;
        if (table.count(args) && table[args] != result) err("conflicting table entries for " + name);
        table[args] = result;
      }
      continue;
    } else {
      err("unknown keyword " + kw);
    }
    skip_newlines();
  }
  return M;
}

std::string Model::dump() const {
  std::ostringstream os;
  for (const auto& [type, elems] : sorts) {
    std::map<std::vector<std::string>, std::vector<std::string>> by_index;
    for (const auto& [e, idx] : elems) by_index[idx].push_back(e);
    for (const auto& [idx, es] : by_index) {
      os << "sort " << type;
      if (!idx.empty()) {
        os << "(";
        for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? ", " : "") << idx[k];
        os << ")";
      }
      os << " = {";
      for (std::size_t k = 0; k < es.size(); ++k) os << (k ? ", " : "") << es[k];
      os << "}\n";
    }
  }
  for (const auto& [name, table] : ops) {
    os << "op " << name << " table:\n";
    for (const auto& [args, r] : table) {
      os << " ";
      for (const auto& a : args) os << " " << a;
      os << " -> " << r << "\n";
    }
  }
  return os.str();
}

std::string ModelReport::str() const {
  std::ostringstream os;
  for (const auto& i : issues) os << "issue: " << i << "\n";
  for (const auto& e : failed_equations) os << "equation fails: " << e << "\n";
  os << (ok() ? "PASS" : "FAIL") << " (" << environments << " environments)\n";
  return os.str();
}

namespace {

using Env = std::vector<std::string>;

struct ModelEval {
  const Theory& T;
  const Model& M;

  const std::map<std::string, std::vector<std::string>>& elements(const std::string& type) const {
    static const std::map<std::string, std::vector<std::string>> none;
    auto it = M.sorts.find(type);
    return it == M.sorts.end() ? none : it->second;
  }

  std::optional<std::string> eval(const Term& t, const Env& env) const {
    if (t.is_var) return env[t.var];
    const TermDecl* op = T.find_op(t.head);
    std::vector<std::string> key;
    for (const auto& a : t.args) {
      auto v = eval(a, env);
      if (!v) return std::nullopt;
      key.push_back(*v);
    }
    auto it = M.ops.find(op->name);
    if (it == M.ops.end()) return std::nullopt;
    auto jt = it->second.find(key);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
  }

  // Elements of sort s under env, with their index tuples checked.
  bool member(const std::string& x, const SortExpr& s, const Env& env) const {
    const auto& el = elements(s.type);
    auto it = el.find(x);
    if (it == el.end()) return false;
    if (it->second.size() != s.args.size()) return false;
    for (std::size_t j = 0; j < s.args.size(); ++j) {
      auto v = eval(s.args[j], env);
      if (!v || *v != it->second[j]) return false;
    }
    return true;
  }

  // All environments of a context, in canonical order; stops when f returns false.
  void environments(const std::vector<Binding>& ctx, const std::function<bool(const Env&)>& f) const {
    Env env(ctx.size());
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
      if (i == ctx.size()) return f(env);
      for (const auto& [x, idx] : elements(ctx[i].sort.type)) {
        if (!member(x, ctx[i].sort, env)) continue;
        env[i] = x;
        if (!rec(i + 1)) return false;
      }
      return true;
    };
    rec(0);
  }

  static std::string env_str(const std::vector<Binding>& ctx, const Env& env) {
    std::string s = "{";
    for (std::size_t i = 0; i < ctx.size(); ++i) s += (i ? ", " : "") + ctx[i].name + "=" + env[i];
    return s + "}";
  }
};

}  // namespace

ModelReport check_model(const Theory& T, const Model& M) {
  ModelReport r;
  ModelEval ev{T, M};
  for (const auto& [type, elems] : M.sorts) {
    const TypeDecl* td = T.sig.find(type);
    if (!td) {
      r.issues.push_back("unknown sort " + type);
      continue;
    }
    for (const auto& [x, idx] : elems) {
      if (idx.size() != td->context.size()) {
        r.issues.push_back(x + " : " + type + " has " + std::to_string(idx.size()) + " indices");
        continue;
      }
      for (std::size_t j = 0; j < idx.size(); ++j)
        if (!ev.member(idx[j], td->context[j].sort, idx)) {
          r.issues.push_back("index " + idx[j] + " of " + x + " : " + type + " is not in sort " +
                             td->context[j].sort.str(names_of(td->context)));
          break;
        }
    }
  }
  for (const auto& [name, table] : M.ops)
    if (!T.find_op(name)) r.issues.push_back("unknown operation " + name);
  for (const auto& op : T.ops) {
    std::size_t used = 0;
    ev.environments(op.context, [&](const Env& env) {
      ++r.environments;
      std::vector<std::string> key;
      for (int a : op.explicit_args) key.push_back(env[a]);
      Term call{op.name, {}, false, -1};
      for (int a : op.explicit_args) call.args.push_back(make_var(a, op.context[a].name));
      auto v = ev.eval(call, env);
      if (!v) {
        r.issues.push_back(op.name + " undefined at " + ModelEval::env_str(op.context, env));
        return true;
      }
      ++used;
      if (!ev.member(*v, op.output, env))
        r.issues.push_back(op.name + " at " + ModelEval::env_str(op.context, env) + " gives " + *v +
                           ", which is not in " + op.output.str(names_of(op.context)));
      return true;
    });
    auto it = M.ops.find(op.name);
    if (it != M.ops.end() && it->second.size() > used)
      r.issues.push_back(op.name + " has table entries outside its domain");
  }
  for (const auto& e : T.eqns) {
    auto names = names_of(e.context);
    ev.environments(e.context, [&](const Env& env) {
      ++r.environments;
      auto a = ev.eval(e.lhs, env), b = ev.eval(e.rhs, env);
      if (a && b && *a == *b) return true;
      r.failed_equations.push_back(e.label + ": " + e.lhs.str(names) + " = " + e.rhs.str(names) + " at " +
                                   ModelEval::env_str(e.context, env) + " (" + (a ? *a : "undefined") + " vs " +
                                   (b ? *b : "undefined") + ")");
      return false;
    });
  }
  return r;
}

}  // namespace opetopes
