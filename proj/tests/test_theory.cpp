#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "opetopes/error.hpp"
#include "opetopes/theory.hpp"

using namespace opetopes;

namespace {

const char* cat_theory =
    "|- O type\n"
    "x, y : O |- A(x, y) type\n"
    "x : O |- i(x) : A(x, x)\n"
    "x, y, z : O, g : A(y, z), f : A(x, y) |- c(g, f) : A(x, z)\n"
    "[left_unit] x, y : O, f : A(x, y) |- c(i(y), f) = f : A(x, y)\n"
    "[right_unit] x, y : O, f : A(x, y) |- c(f, i(x)) = f : A(x, y)\n"
    "[assoc] w, x, y, z : O, h : A(y, z), g : A(x, y), f : A(w, x) |- c(h, c(g, f)) = c(c(h, g), f) : A(w, z)\n";

const char* cyclic_model =
    "sort O = {o}\n"
    "sort A(o, o) = {e, r, r2}\n"
    "op i(x) table:\n  o -> e\n"
    "op c(g, f) table:\n"
    "  e e -> e;   e r -> r;   e r2 -> r2\n"
    "  r e -> r;   r r -> r2;  r r2 -> e\n"
    "  r2 e -> r2; r2 r -> e;  r2 r2 -> r\n";

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
  auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

std::size_t cells_over(const Presheaf& X, const std::string& object) {
  return X.cells[X.cat->find_object(object)].size();
}

// (u : D0, v : D0, e : D1(u, v)) over the globe category
Context edge_context(const FiniteCategory* G) {
  Presheaf X(G);
  int d0 = G->find_object("D0"), d1 = G->find_object("D1");
  X.add_cell(d0, "u");
  X.add_cell(d0, "v");
  X.add_cell(d1, "e");
  X.act.assign(G->mors.size(), {});
  for (std::size_t m = 0; m < G->mors.size(); ++m) X.act[m].assign(X.cells[G->mors[m].tgt].size(), 0);
  X.act[G->find_mor("id_D0")] = {0, 1};
  X.act[G->find_mor("id_D1")] = {0};
  X.act[G->find_mor("s")] = {0};
  X.act[G->find_mor("t")] = {1};
  REQUIRE(X.check().ok());
  return presheaf_to_context(X).context;
}

Context points(const FiniteCategory* G, std::vector<std::string> names) {
  Context c{G, {}};
  for (auto& n : names) c.steps.push_back({n, G->find_object("D0"), {}});
  return c;
}

PresheafMap compose_maps(const PresheafMap& g, const PresheafMap& f) {
  PresheafMap out = f;
  for (std::size_t o = 0; o < f.size(); ++o)
    for (auto& v : out[o]) v = g[o][v];
  return out;
}

}  // namespace

TEST_CASE("direct categories") {
  FiniteCategory G = globe_category();
  LfdReport r = validate_lfd(G);
  CHECK(r.ok());
  CHECK(r.dims[G.find_object("D0")] == 0);
  CHECK(r.dims[G.find_object("D1")] == 1);
  CHECK(r.covers[G.find_object("D1")].size() == 2);
  for (int n = 0; n <= 3; ++n) {
    FiniteCategory S = semi_simplex_category(n);
    LfdReport rs = validate_lfd(S);
    CHECK(rs.ok());
    for (int i = 0; i <= n; ++i) {
      int c = S.find_object("S" + std::to_string(i));
      CHECK(rs.dims[c] == i);
      // non-identity injective maps into [i]: sum over j < i of binomial(i + 1, j + 1)
      std::size_t expect = 0, b = 1;
      for (int j = 0; j <= i; ++j) {
        b = b * (i + 1 - j) / (j + 1);
        if (j < i) expect += b;
      }
      CHECK(rs.covers[c].size() == expect);
    }
  }
  FiniteCategory loop = FiniteCategory::parse("obj a\nmor f: a -> a\ncomp f.f = f\n");
  LfdReport bad = validate_lfd(loop);
  CHECK(!bad.direct);
  CHECK(bad.cycle == std::vector<std::string>{"a"});
}

TEST_CASE("boundaries of representables") {
  FiniteCategory G = globe_category();
  int d1 = G.find_object("D1");
  Presheaf y = representable_c(G, d1);
  CHECK(y.check().ok());
  CHECK(cells_over(y, "D0") == 2);
  CHECK(cells_over(y, "D1") == 1);
  PresheafInclusion b = boundary_c(G, d1);
  CHECK(cells_over(b.sub, "D0") == 2);
  CHECK(cells_over(b.sub, "D1") == 0);
  CHECK(is_presheaf_map(b.sub, b.super, b.map));
  FiniteCategory S = semi_simplex_category(2);
  PresheafInclusion b2 = boundary_c(S, S.find_object("S2"));
  CHECK(cells_over(b2.sub, "S0") == 3);
  CHECK(cells_over(b2.sub, "S1") == 3);
  CHECK(cells_over(b2.sub, "S2") == 0);
}

TEST_CASE("contexts of presheaves") {
  FiniteCategory G = globe_category();
  Presheaf empty(&G);
  CHECK(presheaf_to_context(empty).context.steps.empty());

  Presheaf two = Presheaf::parse(&G,
                                 "cell u : D0\ncell v : D0\ncell e1 : D1\ncell e2 : D1\n"
                                 "act e1 s = u\nact e1 t = v\nact e2 s = u\nact e2 t = v\n");
  ContextOfPresheaf c = presheaf_to_context(two);
  CHECK(c.context.str() == "(u : D0, v : D0, e1 : D1(u,v), e2 : D1(u,v))");
  CHECK_NOTHROW(validate_context(c.context));
  CHECK(presheaf_isomorphism(realize(c.context), two).has_value());
  // vertices in either order, then edges in either order
  CHECK(all_contexts(two).size() == 4);

  for (const auto& S : {semi_simplex_category(2), globe_category()})
    for (std::size_t o = 0; o < S.objects.size(); ++o) {
      Presheaf y = representable_c(S, static_cast<int>(o));
      Context cy = presheaf_to_context(y).context;
      CHECK(presheaf_isomorphism(realize(cy), y).has_value());
      CHECK(cy.steps.back().object == static_cast<int>(o));
    }
  CHECK_THROWS_AS(Presheaf::parse(&G, "cell e : D1\nact e s = e\n"), Error);
}

TEST_CASE("display maps and pullbacks") {
  FiniteCategory G = globe_category();
  int d1 = G.find_object("D1");
  Context tri = presheaf_to_context(
                    Presheaf::parse(&G,
                                    "cell x : D0\ncell y : D0\ncell z : D0\ncell f : D1\ncell g : D1\n"
                                    "act f s = x\nact f t = y\nact g s = y\nact g t = z\n"))
                    .context;
  Context ft = ctx_ft(tri);
  CHECK(ft.steps.size() == 4);
  CHECK(ft.str() == "(x : D0, y : D0, z : D0, f : D1(x,y))");
  PresheafMap pr = ctx_pr(tri);
  CHECK(is_presheaf_map(realize(ft), realize(tri), pr));
  try {
    ctx_ft(Context{&G, {}});
    FAIL("expected EmptyContext");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyContext);
  }

  Context edge = edge_context(&G);
  Context base = ctx_ft(edge);
  PresheafMap id{{0, 1}, {}};
  Pullback same = ctx_pullback(edge, base, id);
  CHECK(same.context == edge);

  // collapsing both ends onto one vertex turns the edge into a loop
  Context one = points(&G, {"w"});
  Pullback loop = ctx_pullback(edge, one, PresheafMap{{0, 0}, {}});
  CHECK(loop.context.str() == "(w : D0, e : D1(w,w))");
  Presheaf L = realize(loop.context);
  CHECK(L.cells[d1].size() == 1);
  CHECK(L.restrict(0, G.find_mor("s")) == L.restrict(0, G.find_mor("t")));
  CHECK(is_presheaf_map(realize(edge), L, loop.connect));

  // (g f)* = f* g* on the nose
  Context mid = points(&G, {"a", "b"});
  mid.steps.push_back({"h", d1, {0, 1}});
  Context far = points(&G, {"w"});
  far.steps.push_back({"l", d1, {0, 0}});
  PresheafMap f{{0, 1}, {}};
  PresheafMap g{{0, 0}, {0}};
  CHECK(is_presheaf_map(realize(base), realize(mid), f));
  CHECK(is_presheaf_map(realize(mid), realize(far), g));
  Pullback once = ctx_pullback(edge, far, compose_maps(g, f));
  Pullback twice = ctx_pullback(ctx_pullback(edge, mid, f).context, far, g);
  CHECK(once.context == twice.context);
}

TEST_CASE("parsing signatures and theories") {
  Signature S = parse_signature("|- V type\nx, y : V |- E(x, y) type\n");
  REQUIRE(S.types.size() == 2);
  CHECK(S.types[0].grade == 0);
  CHECK(S.types[1].grade == 1);
  CHECK(S.types[1].context.size() == 2);
  CHECK(parse_signature(signature_str(S)).types.size() == 2);

  Theory T = parse_theory(cat_theory);
  CHECK(T.sig.types.size() == 2);
  CHECK(T.ops.size() == 2);
  REQUIRE(T.eqns.size() == 3);
  CHECK(T.eqns[2].label == "assoc");
  CHECK(T.find_op("c")->explicit_args.size() == 2);
  CHECK(parse_theory(theory_str(T)).eqns.size() == 3);
  CHECK(parse_theory("⊢ V type; x : V ⊢ E(x) type").sig.types.size() == 2);

  auto kind_of = [](const std::string& text) {
    try {
      parse_theory(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  CHECK(kind_of("|- V type\n|- V type\n") == ErrorKind::FreshnessViolation);
  CHECK(kind_of("|- V type\nx, x : V |- E(x, x) type\n") == ErrorKind::FreshnessViolation);
  CHECK(kind_of("|- V type\nx : V |- E(x) type\nx : V, e : E(y) |- F type\n") == ErrorKind::IllFormedContext);
  CHECK(kind_of("|- V type\nx : V |- k(x) : V\ny : V, z : E(k(y)) |- F type\n") == ErrorKind::IllFormedContext);
  CHECK(kind_of("|- V type\nx : V |- E(x, x type\n") == ErrorKind::ParseError);
  CHECK_THROWS_AS(parse_signature("|- V type\n|- v : V\n"), Error);
}

TEST_CASE("signatures and direct categories") {
  Signature S = parse_theory(cat_theory).sig;
  FiniteCategory C = signature_to_lfd(S);
  LfdReport r = validate_lfd(C);
  REQUIRE(r.ok());
  for (const auto& t : S.types) CHECK(r.dims[C.find_object(t.name)] == t.grade);
  // morphisms B -> A match the variables of sort B in (Gamma_A, a : A)
  for (const auto& t : S.types) {
    Presheaf y = representable_c(C, C.find_object(t.name));
    for (const auto& b : S.types) {
      std::size_t vars = b.name == t.name ? 1 : 0;
      for (const auto& bind : t.context) vars += bind.sort.type == b.name;
      CHECK(cells_over(y, b.name) == vars);
    }
  }
  CHECK(category_isomorphism(signature_to_lfd(lfd_to_signature(globe_category())), globe_category()).has_value());
  for (int n = 0; n <= 3; ++n) {
    FiniteCategory D = semi_simplex_category(n);
    Signature back = parse_signature(signature_str(lfd_to_signature(D)));
    CHECK(category_isomorphism(signature_to_lfd(back), D).has_value());
  }
  CHECK(category_isomorphism(globe_category(), semi_simplex_category(1)).has_value());
  CHECK(!category_isomorphism(globe_category(), FiniteCategory::parse("obj a b\nmor f: a -> b\n")).has_value());
}

TEST_CASE("finite models") {
  Theory T = parse_theory(cat_theory);
  ModelReport ok = check_model(T, Model::parse(cyclic_model));
  CHECK(ok.ok());
  CHECK(ok.environments > 0);

  ModelReport broken = check_model(T, Model::parse(replace_once(cyclic_model, "r r -> r2", "r r -> e")));
  CHECK(!broken.ok());
  REQUIRE(broken.failed_equations.size() == 1);
  CHECK(broken.failed_equations.front().rfind("assoc:", 0) == 0);

  ModelReport unit = check_model(T, Model::parse(replace_once(cyclic_model, "e r -> r", "e r -> r2")));
  CHECK(!unit.ok());
  CHECK(std::any_of(unit.failed_equations.begin(), unit.failed_equations.end(),
                    [](const std::string& s) { return s.rfind("left_unit:", 0) == 0; }));

  CHECK(check_model(T, Model::parse("sort O = {}\n")).ok());
  Model M = Model::parse(cyclic_model);
  CHECK(Model::parse(M.dump()).dump() == M.dump());
}

TEST_CASE("property: random presheaves survive the context round trip") {
  std::mt19937 rng(2026);
  std::vector<FiniteCategory> cats{globe_category(), semi_simplex_category(2), semi_simplex_category(3)};
  for (int trial = 0; trial < 20; ++trial) {
    const FiniteCategory& C = cats[trial % cats.size()];
    Presheaf X = random_presheaf(C, rng, 3);
    REQUIRE(X.check().ok());
    ContextOfPresheaf c = presheaf_to_context(X);
    CHECK(c.context.steps.size() == X.total());
    CHECK_NOTHROW(validate_context(c.context));
    Presheaf R = realize(c.context);
    auto iso = presheaf_isomorphism(R, X);
    REQUIRE(iso.has_value());
    // the comparison recorded with the context is itself the isomorphism
    PresheafMap cmp(C.objects.size());
    for (std::size_t o = 0; o < C.objects.size(); ++o) cmp[o].assign(R.cells[o].size(), -1);
    auto idx = realize_index(c.context);
    for (std::size_t s = 0; s < idx.size(); ++s) cmp[idx[s].first][idx[s].second] = c.cell_of_step[s].second;
    CHECK(is_presheaf_map(R, X, cmp));
    CHECK(Presheaf::parse(&C, X.dump()).dump() == X.dump());
  }
}
