#include <algorithm>
#include <set>

#include "doctest.h"
#include "opetopes/error.hpp"
#include "opetopes/polytree.hpp"
#include "oracle.hpp"

using namespace opetopes;
using namespace opetopes::polytree;

namespace {

PolyFun two_input() {
  PolyFun P;
  P.colours = {"i", "j"};
  P.nodes["b"] = {{{"e1", "i"}, {"e2", "j"}}, "i"};
  P.nodes["c"] = {{{"f1", "j"}}, "i"};
  P.nodes["d"] = {{}, "j"};
  return P;
}

PolyFun unary() {
  PolyFun P;
  P.colours = {"x"};
  P.nodes["u"] = {{{"in", "x"}}, "x"};
  return P;
}

PolyFun binary() {
  PolyFun P;
  P.colours = {"x"};
  P.nodes["m"] = {{{"l", "x"}, {"r", "x"}}, "x"};
  return P;
}

// u on top of u on top of ... (k nodes)
PTree chain(const PolyFun& P, int k) {
  PTree t = PTree::make_edge("x");
  for (int i = 0; i < k; ++i) t = PTree::make_corolla("u", "x", {{"in", t}});
  (void)P;
  return t;
}

}  // namespace

TEST_CASE("node and leaf addresses of small trees") {
  PolyFun P = two_input();
  CHECK(P.check().empty());
  PTree e = PTree::make_edge("i");
  CHECK(node_addresses(e).empty());
  auto el = leaf_addresses(e);
  REQUIRE(el.size() == 1);
  CHECK(el.begin()->first.empty());
  CHECK(el.begin()->second == "i");

  PTree yb = PTree::corolla(P, "b");
  auto nb = node_addresses(yb);
  REQUIRE(nb.size() == 1);
  CHECK(nb.begin()->second == "b");
  auto lb = leaf_addresses(yb);
  CHECK(lb.size() == 2);
  CHECK(lb.at({"e1"}) == "i");
  CHECK(lb.at({"e2"}) == "j");

  // Y(b) grafted with Y(c) at [e1]
  PTree g = graft(yb, {"e1"}, PTree::corolla(P, "c"));
  auto ng = node_addresses(g);
  CHECK(ng.size() == 2);
  CHECK(ng.at({}) == "b");
  CHECK(ng.at({"e1"}) == "c");
  auto lg = leaf_addresses(g);
  CHECK(lg.size() == 2);
  CHECK(lg.at({"e1", "f1"}) == "j");
  CHECK(lg.at({"e2"}) == "j");
}

TEST_CASE("grafting units and errors") {
  PolyFun P = two_input();
  PTree yb = PTree::corolla(P, "b");
  CHECK(graft(PTree::make_edge("i"), {}, yb) == yb);
  CHECK(graft(yb, {"e1"}, PTree::make_edge("i")) == yb);
  CHECK_THROWS_AS(graft(yb, {"zz"}, yb), Error);
  try {
    graft(yb, {"e2"}, yb);
    FAIL("expected a colour mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ColourMismatch);
  }
  try {
    graft(yb, {}, yb);
    FAIL("expected a non-leaf error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AddressNotALeaf);
  }
}

TEST_CASE("substitution") {
  PolyFun P = unary();
  PTree t3 = chain(P, 3);
  // the corolla itself, identity rewiring
  CHECK(substitute(t3, {"in"}, PTree::corolla(P, "u"), {{{"in"}, "in"}}) == t3);
  // at the root of a corolla: result is U
  PTree u2 = chain(P, 2);
  CHECK(substitute(PTree::corolla(P, "u"), {}, u2, {{{"in", "in"}, "in"}}) == u2);
  // middle node of a 3-chain replaced by a 2-chain
  PTree r = substitute(t3, {"in"}, u2, {{{"in", "in"}, "in"}});
  CHECK(node_count(r) == 4);
  CHECK(r == chain(P, 4));
  try {
    substitute(t3, {"in", "in", "in"}, u2, {{{"in", "in"}, "in"}});
    FAIL("expected a non-node error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AddressNotANode);
  }
  try {
    substitute(t3, {"in"}, u2, {});
    FAIL("expected a non-bijective rewiring");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ReaddressingNotBijective);
  }
}

TEST_CASE("enumeration counts") {
  CHECK(enumerate_trees(two_input(), "i", 0).size() == 1);
  CHECK(enumerate_trees(unary(), "x", 3).size() == 4);
  // binary trees with k nodes: Catalan numbers
  std::uint64_t expect = 0;
  for (int k = 0; k <= 5; ++k) {
    expect += oracle::catalan(k);
    auto ts = enumerate_trees(binary(), "x", k);
    CHECK(ts.size() == expect);
    std::set<PTree> unique(ts.begin(), ts.end());
    CHECK(unique.size() == ts.size());
    for (const auto& t : ts) {
      CHECK(tree_valid(binary(), t));
      CHECK(node_count(t) <= static_cast<std::size_t>(k));
    }
  }
}

TEST_CASE("property: leaf count under grafting, address closure, disjointness") {
  PolyFun P = two_input();
  auto all = enumerate_trees(P, "i", 3);
  auto js = enumerate_trees(P, "j", 1);
  auto is = enumerate_trees(P, "i", 1);
  for (const auto& S : all) {
    auto nodes = node_addresses(S);
    auto lv = leaf_addresses(S);
    for (const auto& [a, b] : nodes) {
      CHECK(!lv.count(a));
      for (std::size_t k = 0; k < a.size(); ++k) CHECK(nodes.count(TreeAddress(a.begin(), a.begin() + k)));
    }
    for (const auto& [l, colour] : lv)
      for (const auto& T : colour == "i" ? is : js) {
        PTree G = graft(S, l, T);
        CHECK(leaf_addresses(G).size() == lv.size() - 1 + leaf_addresses(T).size());
        CHECK(tree_valid(P, G));
      }
  }
}

TEST_CASE("property: total grafting is independent of order") {
  PolyFun P = binary();
  PTree base = enumerate_trees(P, "x", 2).back();
  auto lv = leaf_addresses(base);
  REQUIRE(lv.size() == 3);
  std::vector<std::pair<TreeAddress, PTree>> grafts;
  int k = 0;
  for (const auto& [l, c] : lv) grafts.push_back({l, enumerate_trees(P, "x", 2)[k++ % 3]});
  std::sort(grafts.begin(), grafts.end(), [](auto& a, auto& b) { return ShortLex{}(a.first, b.first); });
  PTree first = graft_all(base, grafts);
  do {
    CHECK(graft_all(base, grafts) == first);
  } while (std::next_permutation(grafts.begin(), grafts.end(),
                                 [](auto& a, auto& b) { return ShortLex{}(a.first, b.first); }));
}
