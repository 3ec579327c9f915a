#pragma once

// Finitary polynomial functors over finite colour sets and their trees.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace opetopes::polytree {

using Symbol = std::string;

struct NodeSig {
  std::map<Symbol, Symbol> inputs;  // input-edge label -> colour
  Symbol target;
};

struct PolyFun {
  std::set<Symbol> colours;
  std::map<Symbol, NodeSig> nodes;

  // Empty string when well formed, otherwise the first problem found.
  std::string check() const;
};

using TreeAddress = std::vector<Symbol>;

// Shorter addresses first, then lexicographic on labels.
struct ShortLex {
  bool operator()(const TreeAddress& a, const TreeAddress& b) const;
};

struct PTree {
  bool edge = true;
  Symbol colour;  // root colour (for a corolla, the target of its node)
  Symbol node;
  std::map<Symbol, PTree> children;

  static PTree make_edge(Symbol colour);
  static PTree corolla(const PolyFun& P, const Symbol& node);
  static PTree make_corolla(Symbol node, Symbol colour, std::map<Symbol, PTree> children);

  bool operator==(const PTree& o) const;
  bool operator<(const PTree& o) const;
  std::string str() const;
};

bool tree_valid(const PolyFun& P, const PTree& T, std::string* why = nullptr);

std::map<TreeAddress, Symbol, ShortLex> node_addresses(const PTree& T);
std::map<TreeAddress, Symbol, ShortLex> leaf_addresses(const PTree& T);
std::size_t node_count(const PTree& T);

// Subtree rooted at a node or leaf address; nullptr if the address does not exist.
const PTree* subtree_at(const PTree& T, const TreeAddress& a);

PTree graft(const PTree& S, const TreeAddress& leaf, const PTree& T);

// re: leaf address of U -> input label of the node of T at p.
PTree substitute(const PTree& T, const TreeAddress& p, const PTree& U,
                 const std::map<TreeAddress, Symbol>& re);

// Total grafting of several trees onto distinct leaves, applied in the given order.
PTree graft_all(const PTree& S, const std::vector<std::pair<TreeAddress, PTree>>& grafts);

std::vector<PTree> enumerate_trees(const PolyFun& P, const Symbol& root_colour, std::size_t max_nodes);

std::string address_str(const TreeAddress& a);

}  // namespace opetopes::polytree
