#include "opetopes/ocat.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include "opetopes/error.hpp"

namespace opetopes {

std::string Face::str() const { return is_target ? "t" : "s" + addr.str(); }

std::string word_str(const FaceWord& w) {
  if (w.empty()) return "id";
  std::string s;
  for (const auto& f : w) {
    if (!s.empty()) s += ".";
    s += f.str();
  }
  return s;
}

std::string OMorphism::str() const { return word_str(word) + " : " + dom.str() + " -> " + cod.str(); }

std::vector<Face> faces(const Opetope& w) {
  std::vector<Face> out;
  if (w.dim() == 0) return out;
  for (const auto& a : w.node_addresses()) out.push_back(Face::s(a));
  out.push_back(Face::t());
  return out;
}

Opetope face_domain(const Opetope& w, const Face& f) { return f.is_target ? target(w) : source(w, f.addr); }

Opetope word_domain(const Opetope& w, const FaceWord& word) {
  Opetope cur = w;
  for (const auto& f : word) cur = face_domain(cur, f);
  return cur;
}

std::vector<RelationSquare> relation_squares(const Opetope& w) {
  std::vector<RelationSquare> out;
  if (w.dim() < 2) return out;
  if (w.is_degenerate()) {
    Opetope tw = target(w);
    out.push_back({"Degen", Face::t(), Face::s(root_address(tw)), Face::t(), Face::t()});
    return out;
  }
  for (const auto& [b, d] : w.nodes()) {
    if (b.empty()) continue;
    Address p = b.prefix(b.size() - 1);
    out.push_back({"Inner", Face::s(b), Face::t(), Face::s(p), Face::s(b.back())});
  }
  out.push_back({"Glob1", Face::s(Address()), Face::t(), Face::t(), Face::t()});
  const auto& P = readdress(w);
  for (const auto& [j, c] : leaves(w)) {
    Address p = j.prefix(j.size() - 1);
    out.push_back({"Glob2", Face::s(p), Face::s(j.back()), Face::t(), Face::s(P.at(j))});
  }
  return out;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  int add() {
    parent.push_back(static_cast<int>(parent.size()));
    return parent.back();
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

HomTable::HomTable(const Opetope& root) : root_(root) {
  std::vector<Opetope> dom;
  words_.push_back({});
  dom.push_back(root);
  index_.emplace(FaceWord{}, 0);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    for (const auto& f : faces(dom[i])) {
      FaceWord w = words_[i];
      w.push_back(f);
      index_.emplace(w, static_cast<int>(words_.size()));
      dom.push_back(face_domain(dom[i], f));
      words_.push_back(std::move(w));
    }
  }
  UnionFind uf;
  for (std::size_t i = 0; i < words_.size(); ++i) uf.add();
  std::map<Opetope, std::vector<RelationSquare>> squares;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const FaceWord& w = words_[i];
    if (w.size() < 2) continue;
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
      const Opetope& at = dom[index_.at(FaceWord(w.begin(), w.begin() + k))];
      auto it = squares.find(at);
      if (it == squares.end()) it = squares.emplace(at, relation_squares(at)).first;
      for (const auto& sq : it->second) {
        if (!(w[k] == sq.g1 && w[k + 1] == sq.g2)) continue;
        FaceWord v = w;
        v[k] = sq.h1;
        v[k + 1] = sq.h2;
        auto j = index_.find(v);
        if (j == index_.end())
          throw Error(ErrorKind::InvalidArgument, "relation " + sq.name + " leaves the face words of " + root.str());
        uf.unite(static_cast<int>(i), j->second);
      }
    }
  }
  // normal form: the smallest word of each class
  std::map<int, int> best;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    int r = uf.find(static_cast<int>(i));
    auto it = best.find(r);
    if (it == best.end() || words_[i] < words_[it->second]) best[r] = static_cast<int>(i);
  }
  std::vector<int> reps;
  for (const auto& [r, i] : best) reps.push_back(i);
  std::sort(reps.begin(), reps.end(), [&](int a, int b) {
    if (words_[a].size() != words_[b].size()) return words_[a].size() < words_[b].size();
    return words_[a] < words_[b];
  });
  std::map<int, int> morph_of_root;
  for (int i : reps) {
    morph_of_root[uf.find(i)] = static_cast<int>(morphisms_.size());
    morphisms_.push_back(OMorphism{dom[i], root, words_[i]});
  }
  class_.resize(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) class_[i] = morph_of_root.at(uf.find(static_cast<int>(i)));
}

std::vector<OMorphism> HomTable::from(const Opetope& d) const {
  std::vector<OMorphism> out;
  for (const auto& m : morphisms_)
    if (m.dom == d) out.push_back(m);
  return out;
}

int HomTable::class_of(const FaceWord& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return -1;
  return class_[it->second];
}

const OMorphism& HomTable::normal(const FaceWord& word) const {
  int c = class_of(word);
  if (c < 0) throw Error(ErrorKind::NotComposable, word_str(word) + " into " + root_.str());
  return morphisms_[c];
}

namespace {

struct HomMemo {
  std::mutex mu;
  std::unordered_map<Opetope, std::shared_ptr<const HomTable>, OpetopeHash> table;
};

HomMemo& hom_memo() {
  static HomMemo* m = new HomMemo;
  return *m;
}

}  // namespace

std::shared_ptr<const HomTable> hom_table(const Opetope& w) {
  auto& M = hom_memo();
  {
    std::lock_guard<std::mutex> lock(M.mu);
    auto it = M.table.find(w);
    if (it != M.table.end()) return it->second;
  }
  auto t = std::make_shared<const HomTable>(w);
  std::lock_guard<std::mutex> lock(M.mu);
  return M.table.emplace(w, t).first->second;
}

std::vector<OMorphism> hom(const Opetope& psi, const Opetope& w) {
  if (psi.dim() > w.dim()) return {};
  return hom_table(w)->from(psi);
}

OMorphism identity(const Opetope& w) { return OMorphism{w, w, {}}; }

OMorphism generator(const Opetope& w, const Face& f) {
  if (f.is_target ? w.dim() < 1 : !w.has_node(f.addr))
    throw Error(ErrorKind::AddressNotANode, f.str() + " into " + w.str());
  return hom_table(w)->normal({f});
}

OMorphism compose(const OMorphism& f, const OMorphism& g) {
  if (!(f.dom == g.cod)) throw Error(ErrorKind::NotComposable, f.str() + " after " + g.str());
  FaceWord w = f.word;
  w.insert(w.end(), g.word.begin(), g.word.end());
  return hom_table(f.cod)->normal(w);
}

}  // namespace opetopes
