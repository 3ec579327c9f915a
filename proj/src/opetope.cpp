#include "opetopes/opetope.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <memory>
#include <mutex>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "opetopes/error.hpp"

namespace opetopes {

namespace detail {

struct OpNode {
  int dim = 0;
  Kind kind = Kind::Point;
  const OpNode* phi = nullptr;
  std::map<Address, Opetope> nodes;
  std::size_t size = 0;
  std::size_t hash = 0;
};

}  // namespace detail

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::size_t address_hash(const Address& a) {
  if (a.is_star()) return 0x51ed27;
  std::size_t h = 0x3c6ef372 + a.size();
  for (const auto& i : a.items()) h = mix(h, address_hash(i));
  return h;
}

struct InternKey {
  Kind kind;
  const void* phi;
  std::vector<std::pair<Address, const void*>> nodes;
  bool operator==(const InternKey& o) const {
    return kind == o.kind && phi == o.phi && nodes == o.nodes;
  }
};

struct InternKeyHash {
  std::size_t operator()(const InternKey& k) const {
    std::size_t h = std::hash<int>()(static_cast<int>(k.kind));
    h = mix(h, std::hash<const void*>()(k.phi));
    for (const auto& [a, p] : k.nodes) h = mix(mix(h, address_hash(a)), std::hash<const void*>()(p));
    return h;
  }
};

struct InternTable {
  std::mutex mu;
  std::unordered_map<InternKey, std::unique_ptr<detail::OpNode>, InternKeyHash> table;
};

InternTable& interns() {
  static InternTable* t = new InternTable;
  return *t;
}

}  // namespace

Opetope intern(int dim, Kind kind, const Opetope* phi, const std::map<Address, Opetope>* nodes) {
  InternKey key{kind, phi ? phi->id() : nullptr, {}};
  if (nodes)
    for (const auto& [a, o] : *nodes) key.nodes.emplace_back(a, o.id());
  auto& T = interns();
  std::lock_guard<std::mutex> lock(T.mu);
  auto it = T.table.find(key);
  if (it != T.table.end()) return Opetope(it->second.get());
  auto n = std::make_unique<detail::OpNode>();
  n->dim = dim;
  n->kind = kind;
  n->hash = InternKeyHash()(key);
  if (phi) {
    n->phi = static_cast<const detail::OpNode*>(phi->id());
    n->size = n->phi->size;
  }
  if (nodes) {
    n->nodes = *nodes;
    for (const auto& [a, o] : *nodes) n->size += 1 + static_cast<const detail::OpNode*>(o.id())->size;
  }
  const detail::OpNode* raw = n.get();
  T.table.emplace(std::move(key), std::move(n));
  return Opetope(raw);
}

Opetope::Opetope() : node_(point().node_) {}

Opetope Opetope::point() {
  static const Opetope p = intern(0, Kind::Point, nullptr, nullptr);
  return p;
}

Opetope Opetope::arrow() {
  static const Opetope a = intern(1, Kind::Arrow, nullptr, nullptr);
  return a;
}

Opetope Opetope::degenerate(const Opetope& phi) { return intern(phi.dim() + 2, Kind::Degenerate, &phi, nullptr); }

Opetope Opetope::tree(const std::map<Address, Opetope>& nodes) {
  if (nodes.empty()) throw Error(ErrorKind::InvalidArgument, "a tree needs at least one node");
  if (nodes.size() == 1 && nodes.begin()->second.kind() == Kind::Point &&
      (nodes.begin()->first.is_star() || nodes.begin()->first.empty()))
    return arrow();
  auto root = nodes.find(Address());
  int d = (root != nodes.end() ? root->second.dim() : nodes.begin()->second.dim()) + 1;
  return intern(d, Kind::Tree, nullptr, &nodes);
}

Opetope Opetope::corolla(const Opetope& psi) {
  if (psi.kind() == Kind::Point) return arrow();
  return tree({{Address(), psi}});
}

Opetope Opetope::integer(std::size_t k) {
  if (k == 0) return degenerate(point());
  std::map<Address, Opetope> m;
  for (std::size_t i = 0; i < k; ++i) m.emplace(stars(i), arrow());
  return tree(m);
}

Kind Opetope::kind() const { return node_->kind; }
int Opetope::dim() const { return node_->dim; }

Opetope Opetope::phi() const {
  if (node_->kind != Kind::Degenerate) throw Error(ErrorKind::InvalidArgument, "not degenerate: " + str());
  return Opetope(node_->phi);
}

const std::map<Address, Opetope>& Opetope::nodes() const { return node_->nodes; }

std::vector<Address> Opetope::node_addresses() const {
  if (node_->kind == Kind::Arrow) return {Address::star()};
  std::vector<Address> out;
  for (const auto& [a, o] : node_->nodes) out.push_back(a);
  return out;
}

bool Opetope::has_node(const Address& a) const {
  if (node_->kind == Kind::Arrow) return a.is_star();
  return node_->nodes.count(a) > 0;
}

std::size_t Opetope::node_count() const {
  if (node_->kind == Kind::Arrow) return 1;
  return node_->nodes.size();
}

std::size_t Opetope::size() const { return node_->size; }
std::size_t Opetope::hash() const { return node_->hash; }

std::strong_ordering Opetope::operator<=>(const Opetope& o) const {
  if (node_ == o.node_) return std::strong_ordering::equal;
  if (auto c = node_->dim <=> o.node_->dim; c != 0) return c;
  if (auto c = static_cast<int>(node_->kind) <=> static_cast<int>(o.node_->kind); c != 0) return c;
  if (node_->kind == Kind::Degenerate) return Opetope(node_->phi) <=> Opetope(o.node_->phi);
  if (auto c = node_->nodes.size() <=> o.node_->nodes.size(); c != 0) return c;
  auto a = node_->nodes.begin();
  auto b = o.node_->nodes.begin();
  for (; a != node_->nodes.end(); ++a, ++b) {
    if (auto c = a->first <=> b->first; c != 0) return c;
    if (auto c = a->second <=> b->second; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

namespace {

bool is_integer(const Opetope& w, std::size_t* k) {
  if (w.dim() != 2) return false;
  if (w.is_degenerate()) {
    *k = 0;
    return true;
  }
  const auto& ns = w.nodes();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    auto it = ns.find(stars(i));
    if (it == ns.end() || it->second.kind() != Kind::Arrow) return false;
  }
  *k = ns.size();
  return true;
}

}  // namespace

std::string Opetope::str() const {
  std::size_t k = 0;
  switch (kind()) {
    case Kind::Point: return "point";
    case Kind::Arrow: return "arrow";
    case Kind::Degenerate:
      if (is_integer(*this, &k)) return "I0";
      return "{{" + Opetope(node_->phi).str() + "}}";
    case Kind::Tree: {
      if (is_integer(*this, &k)) return "I" + std::to_string(k);
      std::string s = "{";
      for (const auto& [a, o] : node_->nodes) s += " " + a.str() + " <- " + o.str();
      return s + " }";
    }
  }
  return "?";
}

Address root_address(const Opetope& w) { return w.kind() == Kind::Arrow ? Address::star() : Address(); }

Opetope source(const Opetope& w, const Address& p) {
  if (w.kind() == Kind::Arrow) {
    if (!p.is_star()) throw Error(ErrorKind::AddressNotANode, p.str() + " in arrow");
    return Opetope::point();
  }
  auto it = w.nodes().find(p);
  if (it == w.nodes().end()) throw Error(ErrorKind::AddressNotANode, p.str() + " in " + w.str());
  return it->second;
}

std::map<Address, Opetope> leaves(const Opetope& w) {
  if (w.dim() < 2) throw Error(ErrorKind::InvalidArgument, "leaves need dimension >= 2");
  std::map<Address, Opetope> out;
  if (w.is_degenerate()) {
    out.emplace(Address(), w.phi());
    return out;
  }
  for (const auto& [p, d] : w.nodes())
    for (const auto& q : d.node_addresses()) {
      Address c = p.push(q);
      if (!w.nodes().count(c)) out.emplace(c, source(d, q));
    }
  return out;
}

Opetope edge_colour(const Opetope& w, const Address& leaf) {
  if (w.is_degenerate()) {
    if (!leaf.empty()) throw Error(ErrorKind::AddressNotALeaf, leaf.str());
    return w.phi();
  }
  if (leaf.empty()) return root_edge(w);
  Address p = leaf.prefix(leaf.size() - 1);
  return source(source(w, p), leaf.back());
}

Opetope root_edge(const Opetope& w) {
  if (w.is_degenerate()) return w.phi();
  return target(source(w, Address()));
}

namespace {

struct TargetInfo {
  Opetope target;
  std::map<Address, Address> P;
  std::map<Address, Address> Pinv;
};

struct TargetMemo {
  std::mutex mu;
  std::unordered_map<const void*, std::unique_ptr<TargetInfo>> table;
};

TargetMemo& target_memo() {
  static TargetMemo* m = new TargetMemo;
  return *m;
}

const TargetInfo& target_info(const Opetope& w);

TargetInfo compute_target(const Opetope& w) {
  TargetInfo out;
  const int n = w.dim();
  if (w.is_degenerate()) {
    out.target = Opetope::corolla(w.phi());
    out.P.emplace(Address(), root_address(out.target));
  } else if (w.nodes().size() == 1) {
    const Opetope& psi = w.nodes().begin()->second;
    out.target = psi;
    for (const auto& q : psi.node_addresses()) out.P.emplace(Address().push(q), q);
  } else {
    // w = nu o_[l] Y(psi) with [l] the last node address, which has no children
    auto last = std::prev(w.nodes().end());
    const Address l = last->first;
    const Opetope psi = last->second;
    std::map<Address, Opetope> rest = w.nodes();
    rest.erase(l);
    const Opetope nu = Opetope::tree(rest);
    const TargetInfo& inu = target_info(nu);
    const Address a = inu.P.at(l);
    out.target = substitute(inu.target, a, psi);
    auto lv = leaves(w);
    if (n == 2) {
      for (const auto& [j, c] : lv) out.P.emplace(j, Address::star());
    } else {
      const auto& psi_inv = target_info(psi).Pinv;
      for (const auto& [j, c] : lv) {
        if (l.is_prefix_of(j)) {
          out.P.emplace(j, a.concat(j.back()));
          continue;
        }
        const Address& pj = inu.P.at(j);
        if (a.is_prefix_of(pj) && pj.size() > a.size()) {
          const Address& e = pj[a.size()];
          out.P.emplace(j, a.concat(psi_inv.at(e)).concat(pj.suffix(a.size() + 1)));
        } else {
          out.P.emplace(j, pj);
        }
      }
    }
  }
  for (const auto& [j, q] : out.P) out.Pinv.emplace(q, j);
  return out;
}

const TargetInfo& target_info(const Opetope& w) {
  if (w.dim() < 2) throw Error(ErrorKind::InvalidArgument, "readdressing needs dimension >= 2");
  auto& M = target_memo();
  {
    std::lock_guard<std::mutex> lock(M.mu);
    auto it = M.table.find(w.id());
    if (it != M.table.end()) return *it->second;
  }
  auto info = std::make_unique<TargetInfo>(compute_target(w));
  std::lock_guard<std::mutex> lock(M.mu);
  auto [it, fresh] = M.table.emplace(w.id(), std::move(info));
  return *it->second;
}

}  // namespace

Opetope target(const Opetope& w) {
  switch (w.kind()) {
    case Kind::Point: throw Error(ErrorKind::InvalidArgument, "the point has no target");
    case Kind::Arrow: return Opetope::point();
    default: return target_info(w).target;
  }
}

const std::map<Address, Address>& readdress(const Opetope& w) { return target_info(w).P; }
const std::map<Address, Address>& readdress_inverse(const Opetope& w) { return target_info(w).Pinv; }

Opetope graft(const Opetope& nu, const Address& l, const Opetope& T) {
  if (nu.dim() < 2 || T.dim() != nu.dim())
    throw Error(ErrorKind::InvalidArgument, "grafting needs two trees of equal dimension >= 2");
  auto lv = leaves(nu);
  auto it = lv.find(l);
  if (it == lv.end()) throw Error(ErrorKind::AddressNotALeaf, l.str() + " in " + nu.str());
  if (!(it->second == root_edge(T)))
    throw Error(ErrorKind::ColourMismatch,
                "leaf " + l.str() + " is " + it->second.str() + ", root edge is " + root_edge(T).str());
  if (nu.is_degenerate()) return T;
  if (T.is_degenerate()) return nu;
  std::map<Address, Opetope> m = nu.nodes();
  for (const auto& [q, d] : T.nodes()) m.emplace(l.concat(q), d);
  return Opetope::tree(m);
}

Opetope graft_corolla(const Opetope& nu, const Address& l, const Opetope& psi) {
  return graft(nu, l, Opetope::corolla(psi));
}

Opetope substitute(const Opetope& T, const Address& p, const Opetope& U) {
  if (T.dim() != U.dim()) throw Error(ErrorKind::ColourMismatch, "substitution across dimensions");
  if (!T.has_node(p)) throw Error(ErrorKind::AddressNotANode, p.str() + " in " + T.str());
  if (T.kind() == Kind::Arrow) {
    if (U.kind() != Kind::Arrow) throw Error(ErrorKind::ColourMismatch, "arrow substitution");
    return T;
  }
  if (!(target(U) == source(T, p)))
    throw Error(ErrorKind::ColourMismatch,
                "target " + target(U).str() + " differs from source " + source(T, p).str());
  const auto& uinv = readdress_inverse(U);
  std::map<Address, Opetope> m;
  for (const auto& [b, d] : T.nodes()) {
    if (!p.is_prefix_of(b)) {
      m.emplace(b, d);
    } else if (b.size() > p.size()) {
      const Address& e = b[p.size()];
      m.emplace(p.concat(uinv.at(e)).concat(b.suffix(p.size() + 1)), d);
    }
  }
  for (const auto& [u, d] : U.nodes()) m.emplace(p.concat(u), d);
  if (m.empty()) return U;
  return Opetope::tree(m);
}

std::string Report::str() const {
  if (issues.empty()) return "ok";
  std::string s;
  for (const auto& i : issues) {
    if (!s.empty()) s += "\n";
    s += i.kind + " at " + i.at + ": " + i.detail;
  }
  return s;
}

Report validate(const Opetope& w) {
  Report r;
  if (w.kind() != Kind::Tree && w.kind() != Kind::Degenerate) return r;
  if (w.is_degenerate()) {
    Report sub = validate(w.phi());
    for (auto& i : sub.issues) r.issues.push_back({i.kind, "{{" + i.at + "}}", i.detail});
    return r;
  }
  const auto& ns = w.nodes();
  const int n = w.dim();
  if (!ns.count(Address())) r.issues.push_back({"missing-root", "[]", "no node at the root address"});
  for (const auto& [p, d] : ns) {
    if (d.dim() != n - 1)
      r.issues.push_back({"dimension", p.str(), "decoration " + d.str() + " has dimension " +
                                                    std::to_string(d.dim()) + ", expected " + std::to_string(n - 1)});
    Report sub = validate(d);
    for (auto& i : sub.issues) r.issues.push_back({i.kind, p.str() + "/" + i.at, i.detail});
  }
  if (!r.ok()) return r;
  for (const auto& [b, d] : ns) {
    if (b.is_star()) {
      r.issues.push_back({"address", b.str(), "tree nodes need list addresses"});
      continue;
    }
    if (b.empty()) continue;
    Address p = b.prefix(b.size() - 1);
    auto parent = ns.find(p);
    if (parent == ns.end()) {
      r.issues.push_back({"closure", b.str(), "parent " + p.str() + " is not a node"});
      continue;
    }
    if (!parent->second.has_node(b.back())) {
      r.issues.push_back({"closure", b.str(), b.back().str() + " is not a node of " + parent->second.str()});
      continue;
    }
    if (d.dim() >= 1 && !(target(d) == source(parent->second, b.back())))
      r.issues.push_back({"inner", b.str(), "target " + target(d).str() + " differs from edge " +
                                                source(parent->second, b.back()).str()});
  }
  return r;
}

Report check_identities(const Opetope& w) {
  Report r;
  if (w.dim() < 2) return r;
  const Opetope tw = target(w);
  if (w.is_degenerate()) {
    if (!(source(tw, root_address(tw)) == target(tw)))
      r.issues.push_back({"Degen", "[]", "s_[] t differs from t t"});
  } else {
    for (const auto& [b, d] : w.nodes()) {
      if (b.empty()) continue;
      Address p = b.prefix(b.size() - 1);
      if (!(target(d) == source(source(w, p), b.back())))
        r.issues.push_back({"Inner", b.str(), "t s differs from s s"});
    }
    if (!(target(source(w, Address())) == target(tw))) r.issues.push_back({"Glob1", "[]", "t s_[] differs from t t"});
    for (const auto& [j, c] : leaves(w)) {
      const auto& P = readdress(w);
      auto it = P.find(j);
      if (it == P.end()) {
        r.issues.push_back({"Glob2", j.str(), "leaf not readdressed"});
        continue;
      }
      if (!tw.has_node(it->second)) {
        r.issues.push_back({"Glob2", j.str(), "readdressed to " + it->second.str() + ", not a node of the target"});
        continue;
      }
      if (!(c == source(tw, it->second)))
        r.issues.push_back({"Glob2", j.str(), "edge " + c.str() + " differs from " + source(tw, it->second).str()});
    }
  }
  const auto& P = readdress(w);
  auto lv = leaves(w);
  std::set<Address> image;
  for (const auto& [j, q] : P) image.insert(q);
  auto tn = tw.node_addresses();
  if (P.size() != lv.size() || image.size() != P.size() || image != std::set<Address>(tn.begin(), tn.end()))
    r.issues.push_back({"Readdress", "*", "readdressing is not a bijection onto target nodes"});
  return r;
}

namespace {

struct EnumMemo {
  std::mutex mu;
  std::map<std::pair<int, std::size_t>, std::unique_ptr<std::vector<Opetope>>> table;
};

EnumMemo& enum_memo() {
  static EnumMemo* m = new EnumMemo;
  return *m;
}

std::vector<Opetope> compute_enumeration(int n, std::size_t max_size) {
  if (n == 0) return {Opetope::point()};
  if (n == 1) return {Opetope::arrow()};
  std::unordered_set<Opetope, OpetopeHash> seen;
  std::vector<Opetope> out;
  for (const auto& phi : enumerate_opetopes(n - 2, max_size)) {
    Opetope d = Opetope::degenerate(phi);
    if (seen.insert(d).second) out.push_back(d);
  }
  if (max_size >= 1) {
    const auto& decs = enumerate_opetopes(n - 1, max_size - 1);
    std::map<Opetope, std::vector<Opetope>> by_target;
    for (const auto& psi : decs) by_target[target(psi)].push_back(psi);
    std::deque<Opetope> queue;
    for (const auto& psi : decs) {
      Opetope y = Opetope::corolla(psi);
      if (seen.insert(y).second) {
        out.push_back(y);
        queue.push_back(y);
      }
    }
    while (!queue.empty()) {
      Opetope T = queue.front();
      queue.pop_front();
      for (const auto& [l, c] : leaves(T)) {
        auto it = by_target.find(c);
        if (it == by_target.end()) continue;
        for (const auto& psi : it->second) {
          if (T.size() + 1 + psi.size() > max_size) continue;
          Opetope U = graft_corolla(T, l, psi);
          if (seen.insert(U).second) {
            out.push_back(U);
            queue.push_back(U);
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Opetope& a, const Opetope& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

}  // namespace

const std::vector<Opetope>& enumerate_opetopes(int n, std::size_t max_size) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative dimension");
  auto& M = enum_memo();
  auto key = std::make_pair(n, max_size);
  {
    std::lock_guard<std::mutex> lock(M.mu);
    auto it = M.table.find(key);
    if (it != M.table.end()) return *it->second;
  }
  auto v = std::make_unique<std::vector<Opetope>>(compute_enumeration(n, max_size));
  std::lock_guard<std::mutex> lock(M.mu);
  auto [it, fresh] = M.table.emplace(key, std::move(v));
  return *it->second;
}

namespace {

struct OpParser {
  std::string_view s;
  std::size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  [[noreturn]] void fail(const std::string& m) {
    throw Error(ErrorKind::ParseError, m + " at offset " + std::to_string(i));
  }
  bool eat(std::string_view tok) {
    skip();
    if (s.substr(i, tok.size()) == tok) {
      i += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }

  Address addr() {
    skip();
    std::size_t start = i;
    if (i < s.size() && s[i] == '*') {
      ++i;
      return Address::star();
    }
    if (i >= s.size() || s[i] != '[') fail("address expected");
    int depth = 0;
    do {
      if (s[i] == '[') ++depth;
      else if (s[i] == ']') --depth;
      else if (s[i] != '*' && !std::isspace(static_cast<unsigned char>(s[i]))) fail("bad character in address");
      ++i;
    } while (depth > 0 && i < s.size());
    if (depth) fail("unterminated address");
    return Address::parse(s.substr(start, i - start));
  }

  Opetope opetope() {
    skip();
    if (eat("point")) return Opetope::point();
    if (eat("arrow")) return Opetope::arrow();
    if (i < s.size() && s[i] == 'I') {
      ++i;
      skip();
      std::size_t start = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (start == i) fail("natural number expected after I");
      return Opetope::integer(std::stoul(std::string(s.substr(start, i - start))));
    }
    if (eat("{")) {
      skip();
      if (eat("{")) {
        Opetope phi = opetope();
        expect("}");
        expect("}");
        return Opetope::degenerate(phi);
      }
      std::map<Address, Opetope> nodes;
      while (true) {
        skip();
        if (eat("}")) break;
        Address a = addr();
        expect("<-");
        Opetope d = opetope();
        if (!nodes.emplace(a, d).second) fail("duplicate address " + a.str());
      }
      if (nodes.empty()) fail("empty tree");
      return Opetope::tree(nodes);
    }
    fail("opetope expected");
  }
};

}  // namespace

Opetope parse_opetope(std::string_view text) {
  OpParser p{text};
  Opetope o = p.opetope();
  p.skip();
  if (p.i != text.size()) p.fail("trailing input");
  return o;
}

}  // namespace opetopes
