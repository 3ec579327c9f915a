#include <set>

#include "doctest.h"
#include "opetopes/error.hpp"
#include "opetopes/ocat.hpp"

using namespace opetopes;

namespace {

Opetope xi_ex() { return parse_opetope("{ [] <- I3  [[*]] <- I2  [[**]] <- I1 }"); }

Address addr(const char* s) { return Address::parse(s); }

// 3-opetopes of size <= bound, generated by grafting corollas onto leaves and deduplicated.
std::set<Opetope> grown_3_opetopes(std::size_t bound) {
  std::set<Opetope> out{Opetope::degenerate(Opetope::arrow())};
  std::vector<Opetope> frontier;
  for (std::size_t m = 0; m + 1 <= bound; ++m) frontier.push_back(Opetope::corolla(Opetope::integer(m)));
  while (!frontier.empty()) {
    Opetope w = frontier.back();
    frontier.pop_back();
    if (!out.insert(w).second) continue;
    for (const auto& [l, colour] : leaves(w))
      for (std::size_t m = 0; w.size() + m + 1 <= bound; ++m) frontier.push_back(graft_corolla(w, l, Opetope::integer(m)));
  }
  return out;
}

}  // namespace

TEST_CASE("dimensions") {
  CHECK(Opetope::point().dim() == 0);
  CHECK(Opetope::arrow().dim() == 1);
  CHECK(Opetope::integer(3).dim() == 2);
  CHECK(Opetope::integer(0).dim() == 2);
  CHECK(xi_ex().dim() == 3);
  CHECK(Opetope::degenerate(Opetope::arrow()).dim() == 3);
}

TEST_CASE("validation") {
  CHECK(validate(Opetope::arrow()).ok());
  CHECK(validate(Opetope::tree({{Address(), Opetope::arrow()}, {addr("[*]"), Opetope::arrow()}})).ok());
  CHECK(Opetope::tree({{Address(), Opetope::arrow()}, {addr("[*]"), Opetope::arrow()}}) == Opetope::integer(2));
  Report r = validate(Opetope::tree({{addr("[*]"), Opetope::arrow()}}));
  REQUIRE(!r.ok());
  CHECK(r.issues.front().kind == "missing-root");
  // an I2 node grafted at a source of a node that does not exist
  CHECK(!validate(Opetope::tree({{Address(), Opetope::integer(1)}, {addr("[[*]]"), Opetope::integer(1)}})).ok());
  CHECK(validate(xi_ex()).ok());
}

TEST_CASE("sources") {
  CHECK(source(Opetope::arrow(), Address::star()) == Opetope::point());
  CHECK(source(Opetope::integer(3), addr("[**]")) == Opetope::arrow());
  CHECK(source(xi_ex(), addr("[[*]]")) == Opetope::integer(2));
  try {
    source(Opetope::integer(3), addr("[***]"));
    FAIL("expected a non-node error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AddressNotANode);
  }
}

TEST_CASE("targets") {
  CHECK(target(Opetope::arrow()) == Opetope::point());
  CHECK(target(Opetope::corolla(Opetope::integer(3))) == Opetope::integer(3));
  CHECK(target(Opetope::degenerate(Opetope::arrow())) == Opetope::corolla(Opetope::arrow()));
  CHECK(target(Opetope::degenerate(Opetope::point())) == Opetope::arrow());
  CHECK(target(xi_ex()) == Opetope::integer(4));
  for (std::size_t m = 0; m <= 6; ++m) {
    CHECK(target(Opetope::integer(m)) == Opetope::arrow());
    // a linear tree: m source arrows, one leaf at the far end
    CHECK(Opetope::integer(m).node_count() == m);
    CHECK(leaves(Opetope::integer(m)).size() == 1);
  }
}

TEST_CASE("readdressing") {
  auto d = readdress(Opetope::degenerate(Opetope::arrow()));
  REQUIRE(d.size() == 1);
  CHECK(d.begin()->first == Address());
  CHECK(d.begin()->second == Address());
  Opetope psi = Opetope::integer(3);
  for (const auto& [l, p] : readdress(Opetope::corolla(psi))) {
    REQUIRE(l.size() == 1);
    CHECK(p == l[0]);
  }
  auto r = readdress(xi_ex());
  CHECK(r.size() == 4);
  std::set<Address> image;
  for (const auto& [l, p] : r) {
    image.insert(p);
    CHECK(edge_colour(xi_ex(), l) == source(Opetope::integer(4), p));
  }
  CHECK(image.size() == 4);
  for (const auto& p : Opetope::integer(4).node_addresses()) CHECK(image.count(p));
}

TEST_CASE("grafting and substitution") {
  Opetope g = graft_corolla(Opetope::corolla(Opetope::arrow()), addr("[*]"), Opetope::arrow());
  CHECK(validate(g).ok());
  CHECK(g == Opetope::integer(2));
  CHECK(g.node_count() == 2);
  for (const auto& T : {Opetope::integer(3), xi_ex()})
    for (const auto& p : T.node_addresses()) CHECK(substitute(T, p, Opetope::corolla(source(T, p))) == T);
  // the target of xi_ex, rebuilt by explicit substitution into the target of Y(I3)
  Opetope step = substitute(Opetope::integer(3), addr("[*]"), Opetope::integer(2));
  CHECK(step == Opetope::integer(4));
  try {
    graft_corolla(Opetope::integer(2), addr("[*]"), Opetope::arrow());
    FAIL("expected a non-leaf error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AddressNotALeaf);
  }
  try {
    substitute(xi_ex(), Address(), Opetope::corolla(Opetope::integer(2)));
    FAIL("expected a shape mismatch");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::ColourMismatch || e.kind() == ErrorKind::ShapeMismatch));
  }
}

TEST_CASE("opetopic identities") {
  CHECK(check_identities(Opetope::degenerate(Opetope::point())).ok());
  CHECK(check_identities(xi_ex()).ok());
  for (int n = 2; n <= 4; ++n)
    for (const auto& w : enumerate_opetopes(n, 5)) {
      INFO(w.str());
      CHECK(check_identities(w).ok());
    }
}

TEST_CASE("enumeration") {
  REQUIRE(enumerate_opetopes(0, 5).size() == 1);
  CHECK(enumerate_opetopes(0, 5).front() == Opetope::point());
  REQUIRE(enumerate_opetopes(1, 5).size() == 1);
  CHECK(enumerate_opetopes(1, 5).front() == Opetope::arrow());
  for (std::size_t k = 0; k <= 8; ++k) {
    const auto& twos = enumerate_opetopes(2, k);
    REQUIRE(twos.size() == k + 1);
    for (std::size_t m = 0; m <= k; ++m) CHECK(twos[m] == Opetope::integer(m));
  }
  for (std::size_t bound = 0; bound <= 5; ++bound) {
    const auto& threes = enumerate_opetopes(3, bound);
    std::set<Opetope> listed(threes.begin(), threes.end());
    CHECK(listed.size() == threes.size());
    CHECK(listed == grown_3_opetopes(bound));
  }
}

TEST_CASE("text form round trips") {
  for (int n = 0; n <= 4; ++n)
    for (const auto& w : enumerate_opetopes(n, 4)) CHECK(parse_opetope(w.str()) == w);
  CHECK_THROWS_AS(parse_opetope("{ [] <- I3"), Error);
  CHECK(Address::parse("[[*][**]]").str() == "[[*][**]]");
}

TEST_CASE("property: targets lower dimension and stay valid") {
  for (int n = 1; n <= 4; ++n)
    for (const auto& w : enumerate_opetopes(n, 5)) {
      Opetope t = target(w);
      CHECK(t.dim() == n - 1);
      CHECK(validate(t).ok());
    }
}
