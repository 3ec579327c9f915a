#pragma once

// Opetopes of all dimensions, stored as interned values.
// An n-opetope with n >= 2 is a finite map node address -> (n-1)-opetope,
// or the degenerate tree {{phi}} with no nodes.

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "opetopes/address.hpp"

namespace opetopes {

namespace detail {
struct OpNode;
}

enum class Kind { Point, Arrow, Degenerate, Tree };

class Opetope {
 public:
  Opetope();  // the point

  static Opetope point();
  static Opetope arrow();
  static Opetope degenerate(const Opetope& phi);
  // Not validated; see validate().
  static Opetope tree(const std::map<Address, Opetope>& nodes);
  // Y(psi); Y(point) is the arrow.
  static Opetope corolla(const Opetope& psi);
  // The linear 2-opetope with k nodes.
  static Opetope integer(std::size_t k);

  Kind kind() const;
  int dim() const;
  bool is_degenerate() const { return kind() == Kind::Degenerate; }
  Opetope phi() const;  // degenerate only
  const std::map<Address, Opetope>& nodes() const;  // empty unless Tree
  std::vector<Address> node_addresses() const;  // {*} for the arrow
  bool has_node(const Address& a) const;
  std::size_t node_count() const;
  // Nodes counted through every level of nesting; points and arrows count 0.
  std::size_t size() const;

  std::string str() const;
  std::size_t hash() const;
  const void* id() const { return node_; }

  bool operator==(const Opetope& o) const { return node_ == o.node_; }
  std::strong_ordering operator<=>(const Opetope& o) const;

 private:
  explicit Opetope(const detail::OpNode* n) : node_(n) {}
  const detail::OpNode* node_;
  friend struct detail::OpNode;
  friend Opetope intern(int, Kind, const Opetope*, const std::map<Address, Opetope>*);
};

struct OpetopeHash {
  std::size_t operator()(const Opetope& o) const { return o.hash(); }
};

// `*` for the arrow, [] for trees.
Address root_address(const Opetope& w);

Opetope source(const Opetope& w, const Address& p);
Opetope target(const Opetope& w);
// Leaves of w (dim >= 2) onto node addresses of target(w).
const std::map<Address, Address>& readdress(const Opetope& w);
const std::map<Address, Address>& readdress_inverse(const Opetope& w);

// Leaf address -> edge decoration (dim >= 2).
std::map<Address, Opetope> leaves(const Opetope& w);
Opetope edge_colour(const Opetope& w, const Address& leaf);
Opetope root_edge(const Opetope& w);

// nu o_[l] T, where T is a tree of the same dimension as nu.
Opetope graft(const Opetope& nu, const Address& l, const Opetope& T);
Opetope graft_corolla(const Opetope& nu, const Address& l, const Opetope& psi);
// T box_[p] U; the readdressing is forced to be that of U.
Opetope substitute(const Opetope& T, const Address& p, const Opetope& U);

struct Issue {
  std::string kind;
  std::string at;
  std::string detail;
};

struct Report {
  std::vector<Issue> issues;
  bool ok() const { return issues.empty(); }
  std::string str() const;
};

Report validate(const Opetope& w);
// Inner, Glob1, Glob2, Degen, plus bijectivity of the readdressing.
Report check_identities(const Opetope& w);

// All n-opetopes of size() <= max_size, ordered by size then structure.
const std::vector<Opetope>& enumerate_opetopes(int n, std::size_t max_size);

Opetope parse_opetope(std::string_view text);

}  // namespace opetopes

template <>
struct std::hash<opetopes::Opetope> {
  std::size_t operator()(const opetopes::Opetope& o) const { return o.hash(); }
};
