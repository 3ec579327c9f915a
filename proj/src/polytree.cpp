#include "opetopes/polytree.hpp"

#include <algorithm>
#include <functional>

#include "opetopes/error.hpp"

namespace opetopes {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::AddressNotALeaf: return "AddressNotALeaf";
    case ErrorKind::AddressNotANode: return "AddressNotANode";
    case ErrorKind::ColourMismatch: return "ColourMismatch";
    case ErrorKind::ReaddressingNotBijective: return "ReaddressingNotBijective";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotComposable: return "NotComposable";
    case ErrorKind::NotACategory: return "NotACategory";
    case ErrorKind::InfiniteNerve: return "InfiniteNerve";
    case ErrorKind::EmptyContext: return "EmptyContext";
    case ErrorKind::NotAMap: return "NotAMap";
    case ErrorKind::WindowViolation: return "WindowViolation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::FreshnessViolation: return "FreshnessViolation";
    case ErrorKind::IllFormedContext: return "IllFormedContext";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

}  // namespace opetopes

namespace opetopes::polytree {

std::string PolyFun::check() const {
  for (const auto& [b, sig] : nodes) {
    if (!colours.count(sig.target)) return "node " + b + " has unknown target colour " + sig.target;
    for (const auto& [e, c] : sig.inputs)
      if (!colours.count(c)) return "input " + e + " of node " + b + " has unknown colour " + c;
  }
  return {};
}

bool ShortLex::operator()(const TreeAddress& a, const TreeAddress& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

PTree PTree::make_edge(Symbol colour) {
  PTree t;
  t.edge = true;
  t.colour = std::move(colour);
  return t;
}

PTree PTree::corolla(const PolyFun& P, const Symbol& node) {
  auto it = P.nodes.find(node);
  if (it == P.nodes.end()) throw Error(ErrorKind::InvalidArgument, "unknown node " + node);
  std::map<Symbol, PTree> ch;
  for (const auto& [e, c] : it->second.inputs) ch.emplace(e, make_edge(c));
  return make_corolla(node, it->second.target, std::move(ch));
}

PTree PTree::make_corolla(Symbol node, Symbol colour, std::map<Symbol, PTree> children) {
  PTree t;
  t.edge = false;
  t.node = std::move(node);
  t.colour = std::move(colour);
  t.children = std::move(children);
  return t;
}

bool PTree::operator==(const PTree& o) const {
  if (edge != o.edge || colour != o.colour) return false;
  if (edge) return true;
  return node == o.node && children == o.children;
}

bool PTree::operator<(const PTree& o) const {
  if (edge != o.edge) return edge;
  if (colour != o.colour) return colour < o.colour;
  if (edge) return false;
  if (node != o.node) return node < o.node;
  return std::lexicographical_compare(
      children.begin(), children.end(), o.children.begin(), o.children.end(),
      [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first < y.first;
        return x.second < y.second;
      });
}

std::string PTree::str() const {
  if (edge) return "|" + colour;
  std::string s = node;
  bool any = false;
  for (const auto& [e, c] : children)
    if (!c.edge) any = true;
  if (!any) return s;
  s += "(";
  bool first = true;
  for (const auto& [e, c] : children) {
    if (c.edge) continue;
    if (!first) s += " ";
    first = false;
    s += e + ":" + c.str();
  }
  return s + ")";
}

bool tree_valid(const PolyFun& P, const PTree& T, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (!P.colours.count(T.colour)) return fail("unknown colour " + T.colour);
  if (T.edge) return true;
  auto it = P.nodes.find(T.node);
  if (it == P.nodes.end()) return fail("unknown node " + T.node);
  if (it->second.target != T.colour) return fail("root colour of " + T.node + " differs from its target");
  if (it->second.inputs.size() != T.children.size()) return fail("wrong number of children at " + T.node);
  for (const auto& [e, c] : it->second.inputs) {
    auto ch = T.children.find(e);
    if (ch == T.children.end()) return fail("missing input " + e + " at " + T.node);
    if (ch->second.colour != c) return fail("colour mismatch on input " + e);
    if (!tree_valid(P, ch->second, why)) return false;
  }
  return true;
}

namespace {

void walk(const PTree& T, TreeAddress& at, std::map<TreeAddress, Symbol, ShortLex>& nodes,
          std::map<TreeAddress, Symbol, ShortLex>& leaves) {
  if (T.edge) {
    leaves.emplace(at, T.colour);
    return;
  }
  nodes.emplace(at, T.node);
  for (const auto& [e, c] : T.children) {
    at.push_back(e);
    walk(c, at, nodes, leaves);
    at.pop_back();
  }
}

PTree* subtree_mut(PTree& T, const TreeAddress& a) {
  PTree* cur = &T;
  for (const auto& e : a) {
    if (cur->edge) return nullptr;
    auto it = cur->children.find(e);
    if (it == cur->children.end()) return nullptr;
    cur = &it->second;
  }
  return cur;
}

}  // namespace

std::map<TreeAddress, Symbol, ShortLex> node_addresses(const PTree& T) {
  std::map<TreeAddress, Symbol, ShortLex> nodes, leaves;
  TreeAddress at;
  walk(T, at, nodes, leaves);
  return nodes;
}

std::map<TreeAddress, Symbol, ShortLex> leaf_addresses(const PTree& T) {
  std::map<TreeAddress, Symbol, ShortLex> nodes, leaves;
  TreeAddress at;
  walk(T, at, nodes, leaves);
  return leaves;
}

std::size_t node_count(const PTree& T) {
  if (T.edge) return 0;
  std::size_t n = 1;
  for (const auto& [e, c] : T.children) n += node_count(c);
  return n;
}

const PTree* subtree_at(const PTree& T, const TreeAddress& a) {
  return subtree_mut(const_cast<PTree&>(T), a);
}

PTree graft(const PTree& S, const TreeAddress& leaf, const PTree& T) {
  PTree out = S;
  PTree* at = subtree_mut(out, leaf);
  if (!at || !at->edge) throw Error(ErrorKind::AddressNotALeaf, address_str(leaf));
  if (at->colour != T.colour)
    throw Error(ErrorKind::ColourMismatch, "leaf " + address_str(leaf) + " has colour " + at->colour +
                                               ", grafted tree has root colour " + T.colour);
  *at = T;
  return out;
}

PTree graft_all(const PTree& S, const std::vector<std::pair<TreeAddress, PTree>>& grafts) {
  PTree out = S;
  for (const auto& [l, T] : grafts) out = graft(out, l, T);
  return out;
}

PTree substitute(const PTree& T, const TreeAddress& p, const PTree& U,
                 const std::map<TreeAddress, Symbol>& re) {
  const PTree* at = subtree_at(T, p);
  if (!at || at->edge) throw Error(ErrorKind::AddressNotANode, address_str(p));
  if (U.colour != at->colour)
    throw Error(ErrorKind::ColourMismatch, "root colour of the substituted tree differs from node colour");
  auto leaves = leaf_addresses(U);
  if (leaves.size() != re.size() || re.size() != at->children.size())
    throw Error(ErrorKind::ReaddressingNotBijective, "sizes differ");
  std::set<Symbol> hit;
  for (const auto& [l, e] : re) {
    auto lc = leaves.find(l);
    auto ch = at->children.find(e);
    if (lc == leaves.end() || ch == at->children.end() || !hit.insert(e).second)
      throw Error(ErrorKind::ReaddressingNotBijective, "at leaf " + address_str(l));
    if (lc->second != ch->second.colour)
      throw Error(ErrorKind::ColourMismatch, "leaf " + address_str(l) + " vs input " + e);
  }
  PTree filled = U;
  for (const auto& [l, e] : re) *subtree_mut(filled, l) = at->children.at(e);
  PTree out = T;
  *subtree_mut(out, p) = std::move(filled);
  return out;
}

namespace {

// All trees with exactly k nodes and the given root colour.
const std::vector<PTree>& exact(const PolyFun& P, const Symbol& colour, std::size_t k,
                                std::map<std::pair<Symbol, std::size_t>, std::vector<PTree>>& memo) {
  auto key = std::make_pair(colour, k);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  std::vector<PTree> out;
  if (k == 0) {
    out.push_back(PTree::make_edge(colour));
  } else {
    for (const auto& [b, sig] : P.nodes) {
      if (sig.target != colour) continue;
      std::vector<std::pair<Symbol, Symbol>> ins(sig.inputs.begin(), sig.inputs.end());
      std::map<Symbol, PTree> ch;
      std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t left) {
        if (i == ins.size()) {
          if (left == 0) out.push_back(PTree::make_corolla(b, colour, ch));
          return;
        }
        for (std::size_t c = 0; c <= left; ++c) {
          if (i + 1 == ins.size() && c != left) continue;
          for (const auto& sub : exact(P, ins[i].second, c, memo)) {
            ch[ins[i].first] = sub;
            go(i + 1, left - c);
          }
        }
        ch.erase(ins.empty() ? Symbol{} : ins[i].first);
      };
      go(0, k - 1);
    }
  }
  return memo[key] = std::move(out);
}

}  // namespace

std::vector<PTree> enumerate_trees(const PolyFun& P, const Symbol& root_colour, std::size_t max_nodes) {
  std::map<std::pair<Symbol, std::size_t>, std::vector<PTree>> memo;
  std::vector<PTree> out;
  for (std::size_t k = 0; k <= max_nodes; ++k) {
    auto level = exact(P, root_colour, k, memo);
    std::sort(level.begin(), level.end());
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::string address_str(const TreeAddress& a) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += " ";
    s += a[i];
  }
  return s + "]";
}

}  // namespace opetopes::polytree
