#include <functional>
#include <set>

#include "doctest.h"
#include "opetopes/error.hpp"
#include "opetopes/opset.hpp"

using namespace opetopes;

namespace {

Opetope xi_ex() { return parse_opetope("{ [] <- I3  [[*]] <- I2  [[**]] <- I1 }"); }

std::size_t count_shape(const FinOpSet& X, const Opetope& s) { return X.cells_of(s).size(); }

std::set<std::string> names(const FinOpSet& X) {
  std::set<std::string> out;
  for (const auto& c : X.cells()) out.insert(c.name);
  return out;
}

// Names of the cells of O[w] lying in the image of the target, from composites t o m.
std::set<std::string> target_part(const Opetope& w) {
  std::set<std::string> out;
  OMorphism t = generator(w, Face::t());
  for (const auto& m : hom_table(target(w))->morphisms()) out.insert(word_str(compose(t, m).word));
  return out;
}

bool connected(const FinOpSet& X) {
  if (X.size() == 0) return true;
  std::vector<std::vector<int>> adj(X.size());
  for (std::size_t c = 0; c < X.size(); ++c)
    for (int f : X.cell(static_cast<int>(c)).faces)
      if (f >= 0) {
        adj[c].push_back(f);
        adj[f].push_back(static_cast<int>(c));
      }
  std::vector<char> seen(X.size(), 0);
  std::function<void(int)> go = [&](int c) {
    if (seen[c]) return;
    seen[c] = 1;
    for (int d : adj[c]) go(d);
  };
  go(0);
  for (char s : seen)
    if (!s) return false;
  return true;
}

FinOpSet two_parallel_arrows() {
  return FinOpSet::parse(
      "window 0 1\n"
      "shape point cells a b\n"
      "shape arrow cells f g\n"
      "face f s* -> a\nface f t -> b\nface g s* -> a\nface g t -> b\n");
}

}  // namespace

TEST_CASE("representables") {
  FinOpSet p = representable(Opetope::point());
  CHECK(p.size() == 1);
  FinOpSet a = representable(Opetope::arrow());
  CHECK(count_shape(a, Opetope::point()) == 2);
  CHECK(count_shape(a, Opetope::arrow()) == 1);
  FinOpSet i2 = representable(Opetope::integer(2), Window{0, 2});
  CHECK(count_shape(i2, Opetope::point()) == 3);
  CHECK(count_shape(i2, Opetope::arrow()) == 3);
  CHECK(count_shape(i2, Opetope::integer(2)) == 1);
  CHECK(i2.size() == 7);
  CHECK(i2.check().ok());
  CHECK(representable(xi_ex()).check().ok());
}

TEST_CASE("boundaries and spines") {
  Inclusion ba = boundary(Opetope::arrow());
  CHECK(count_shape(ba.sub, Opetope::point()) == 2);
  CHECK(count_shape(ba.sub, Opetope::arrow()) == 0);
  Inclusion s3 = spine(Opetope::integer(3));
  CHECK(count_shape(s3.sub, Opetope::arrow()) == 3);
  CHECK(count_shape(s3.sub, Opetope::point()) == 4);
  CHECK(!names(s3.sub).count("t"));
  for (const auto& phi : {Opetope::point(), Opetope::arrow(), Opetope::integer(2)}) {
    Opetope d = Opetope::degenerate(phi);
    CHECK(spine(d).sub.size() == representable(phi).size());
  }
}

TEST_CASE("maps and the Yoneda count") {
  FinOpSet X = representable(xi_ex());
  for (const auto& s : X.shapes()) {
    INFO(s.str());
    CHECK(count_maps(representable(s, X.window()), X) == count_shape(X, s));
    CHECK(count_shape(X, s) == hom(s, xi_ex()).size());
  }
  FinOpSet par = two_parallel_arrows();
  CHECK(maps(representable(Opetope::point(), par.window()), par).size() == 2);
  CHECK(maps(FinOpSet(par.window()), par).size() == 1);
  for (const auto& m : maps(representable(Opetope::arrow()), par)) CHECK(is_map(representable(Opetope::arrow()), par, m));
}

TEST_CASE("orthogonality") {
  FinOpSet T = terminal_opset(Window{0, 2}, 4);
  for (const auto& w : enumerate_opetopes(2, 4)) {
    CHECK(orthogonal(empty_inclusion(w, T.window()), T));
    CHECK(orthogonal(spine(w, T.window()), T));
    CHECK(orthogonal(boundary(w, T.window()), T));
  }
  FinOpSet par = two_parallel_arrows();
  auto fail = orthogonality_failure(boundary(Opetope::arrow(), par.window()), par);
  REQUIRE(fail.has_value());
  CHECK(!fail->witness.empty());
  // with a single point every boundary map has both loops as extensions
  FinOpSet loops = FinOpSet::parse(
      "window 0 1\nshape point cells a\nshape arrow cells f g\n"
      "face f s* -> a\nface f t -> a\nface g s* -> a\nface g t -> a\n");
  auto twice = orthogonality_failure(boundary(Opetope::arrow(), loops.window()), loops);
  REQUIRE(twice.has_value());
  CHECK(twice->problem == "several extensions");
  // spine of an arrow is its source point: lifts exist but are not unique either
  CHECK(!orthogonal(spine(Opetope::arrow(), par.window()), par));
  CHECK_THROWS_AS(orthogonal(spine(Opetope::integer(2), Window{0, 2}), par), Error);
}

TEST_CASE("spine cell decompositions") {
  CHECK(spine_cell_decomposition(Opetope::degenerate(Opetope::arrow())).steps.empty());
  CHECK(spine_cell_decomposition(Opetope::corolla(Opetope::integer(3))).steps.size() == 1);
  CHECK(spine_cell_decomposition(xi_ex()).steps.size() == 3);
  for (int n = 2; n <= 3; ++n)
    for (const auto& xi : enumerate_opetopes(n, 6)) {
      INFO(xi.str());
      auto d = spine_cell_decomposition(xi);
      CHECK(d.steps.size() == xi.node_count());
      auto [rebuilt, cmp] = replay_spine_decomposition(d);
      CHECK(rebuilt.check().ok());
      FinOpSet R = representable(xi);
      CHECK(is_map(rebuilt, R, cmp));
      std::set<int> image(cmp.begin(), cmp.end());
      auto sc = spine_cells(xi);
      CHECK(image == std::set<int>(sc.begin(), sc.end()));
      CHECK(image.size() == cmp.size());
    }
}

TEST_CASE("lifting implications") {
  HLiftReport t = hlift_check(terminal_opset(Window{0, 3}, 4), 1);
  CHECK(t.s_n.holds);
  CHECK(t.s_n1.holds);
  CHECK(t.b_n1.holds);
  CHECK(t.b_n2.holds);
  CHECK(t.s_n2.holds);
  HLiftReport r = hlift_check(representable(Opetope::integer(2), Window{0, 2}), 0);
  CHECK(r.implication1);
  CHECK(r.implication2);
}

TEST_CASE("text form round trips") {
  FinOpSet X = representable(xi_ex());
  FinOpSet Y = FinOpSet::parse(X.dump());
  CHECK(Y.dump() == X.dump());
  CHECK_THROWS_AS(FinOpSet::parse("window 0 1\nshape arrow cells f\nface f q -> f\n"), Error);
}

TEST_CASE("property: boundary pushout as cell sets") {
  for (int n = 1; n <= 3; ++n)
    for (const auto& w : enumerate_opetopes(n, 5)) {
      INFO(w.str());
      std::set<std::string> sp = names(spine(w).sub);
      std::set<std::string> bd = names(boundary(w).sub);
      std::set<std::string> tp = target_part(w);
      std::set<std::string> meet, join;
      for (const auto& c : sp)
        if (tp.count(c)) meet.insert(c);
      join = sp;
      join.insert(tp.begin(), tp.end());
      std::set<std::string> tp_boundary = tp;
      tp_boundary.erase("t");
      CHECK(meet == tp_boundary);
      CHECK(join == bd);
    }
}

TEST_CASE("property: spine pushout counts and connectedness") {
  for (int n = 2; n <= 3; ++n)
    for (const auto& w : enumerate_opetopes(n, 4)) {
      if (w.is_degenerate()) continue;
      CHECK(connected(spine(w).sub));
      for (const auto& [l, colour] : leaves(w))
        for (const auto& psi : enumerate_opetopes(n - 1, 2)) {
          if (target(psi) != colour) continue;
          Opetope g = graft_corolla(w, l, psi);
          INFO(g.str());
          CHECK(spine(g).sub.size() == spine(w).sub.size() + representable(psi).size() - representable(colour).size());
        }
    }
}
