// opetopes: command-line front end to the library.
// Exit status: 0 success, 1 a check failed, 2 usage or parse error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "opetopes/error.hpp"
#include "opetopes/theory.hpp"

using namespace opetopes;
using json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string expr;
  std::string file;
  int dim = 2;
  std::size_t max_nodes = 4;
  std::string format = "text";
  std::string window;
  int k = 1;
  int n = 1;
  unsigned seed = 0;  // reserved; nothing depends on it
  std::string addr;
  std::string from;
  std::string kind = "spine";
  std::string category;
  std::string presheaf;
  std::string theory;
  std::string model;
  std::size_t limit = 0;
  bool all = false;
};

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Usage("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string input_text(const Options& o) {
  if (!o.expr.empty()) return o.expr;
  if (!o.file.empty()) return slurp(o.file);
  throw Usage("give --expr or --file");
}

Opetope input_opetope(const Options& o) { return parse_opetope(input_text(o)); }

std::optional<Window> parse_window(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto colon = s.find(':');
  if (colon == std::string::npos) throw Usage("--window expects m:n");
  try {
    Window w{std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
    if (w.lo > w.hi || w.lo < 0) throw Usage("--window expects 0 <= m <= n");
    return w;
  } catch (const std::logic_error&) {
    throw Usage("--window expects m:n");
  }
}

// globe, simplex:N, or a category file.
FiniteCategory load_category(const std::string& spec) {
  if (spec.empty()) throw Usage("give --category");
  if (spec == "globe") return globe_category();
  if (spec.rfind("simplex:", 0) == 0) return semi_simplex_category(std::stoi(spec.substr(8)));
  if (spec == "terminal") return FiniteCategory::terminal();
  return FiniteCategory::parse(slurp(spec));
}

json report_json(const Report& r) {
  json issues = json::array();
  for (const auto& i : r.issues) issues.push_back({{"kind", i.kind}, {"at", i.at}, {"detail", i.detail}});
  return issues;
}

std::string dot_of(const Opetope& w) {
  std::ostringstream os;
  os << "digraph opetope {\n  rankdir=BT;\n";
  switch (w.kind()) {
    case Kind::Point:
      os << "  n0 [label=\"point\"];\n";
      break;
    case Kind::Arrow:
      os << "  n0 [shape=point];\n  n1 [shape=point];\n  n0 -> n1 [label=\"*\"];\n";
      break;
    case Kind::Degenerate:
      os << "  n0 [shape=point];\n  n1 [label=\"" << w.phi().str() << "\", shape=box];\n  n0 -> n1;\n";
      break;
    case Kind::Tree: {
      std::map<Address, int> id;
      for (const auto& [p, d] : w.nodes()) {
        int i = static_cast<int>(id.size());
        id[p] = i;
        os << "  n" << i << " [label=\"" << d.str() << "\", shape=box];\n";
      }
      os << "  out [shape=point];\n  n" << id.at(Address()) << " -> out [label=\"[]\"];\n";
      for (const auto& [p, i] : id)
        if (p.size() > 0) os << "  n" << i << " -> n" << id.at(p.prefix(p.size() - 1)) << " [label=\"" << p.str() << "\"];\n";
      int leaf = 0;
      for (const auto& [l, c] : leaves(w)) {
        os << "  l" << leaf << " [shape=point];\n  l" << leaf << " -> n" << id.at(l.prefix(l.size() - 1))
           << " [label=\"" << l.str() << "\"];\n";
        ++leaf;
      }
      break;
    }
  }
  os << "}\n";
  return os.str();
}

void emit(const Options& o, const json& j, const std::string& text, const std::string& dot = {}) {
  if (o.format == "json")
    std::cout << j.dump(2) << "\n";
  else if (o.format == "dot") {
    if (dot.empty()) throw Usage("--format dot is not available for this command");
    std::cout << dot;
  } else
    std::cout << text;
}

// ---- opetope

int opetope_validate(const Options& o) {
  Opetope w = input_opetope(o);
  Report r = validate(w);
  emit(o, {{"opetope", w.str()}, {"dim", w.dim()}, {"valid", r.ok()}, {"issues", report_json(r)}},
       r.ok() ? "valid " + std::to_string(w.dim()) + "-opetope " + w.str() + "\n" : r.str() + "\n",
       r.ok() ? dot_of(w) : std::string());
  return r.ok() ? 0 : 1;
}

int opetope_target(const Options& o) {
  Opetope w = input_opetope(o);
  Opetope t = target(w);
  emit(o, {{"opetope", w.str()}, {"target", t.str()}}, t.str() + "\n", dot_of(t));
  return 0;
}

int opetope_source(const Options& o) {
  Opetope w = input_opetope(o);
  if (o.addr.empty()) throw Usage("give --addr");
  Opetope s = source(w, Address::parse(o.addr));
  emit(o, {{"opetope", w.str()}, {"address", o.addr}, {"source", s.str()}}, s.str() + "\n", dot_of(s));
  return 0;
}

int opetope_faces(const Options& o) {
  Opetope w = input_opetope(o);
  json arr = json::array();
  std::string text;
  for (const auto& f : faces(w)) {
    Opetope d = face_domain(w, f);
    arr.push_back({{"face", f.str()}, {"domain", d.str()}});
    text += f.str() + " : " + d.str() + "\n";
  }
  emit(o, {{"opetope", w.str()}, {"faces", arr}}, text);
  return 0;
}

int opetope_enumerate(const Options& o) {
  const auto& all = enumerate_opetopes(o.dim, o.max_nodes);
  json arr = json::array();
  std::string text;
  for (const auto& w : all) {
    arr.push_back(w.str());
    text += w.str() + "\n";
  }
  emit(o, {{"dim", o.dim}, {"max_nodes", o.max_nodes}, {"opetopes", arr}}, text);
  return 0;
}

int opetope_hom(const Options& o) {
  Opetope w = input_opetope(o);
  std::vector<OMorphism> ms;
  if (o.from.empty())
    ms = hom_table(w)->morphisms();
  else
    ms = hom(parse_opetope(o.from), w);
  json arr = json::array();
  std::string text;
  for (const auto& m : ms) {
    arr.push_back({{"from", m.dom.str()}, {"word", word_str(m.word)}});
    text += m.dom.str() + " --" + word_str(m.word) + "--> " + m.cod.str() + "\n";
  }
  emit(o, {{"opetope", w.str()}, {"morphisms", arr}}, text);
  return 0;
}

int opetope_identities(const Options& o) {
  std::vector<Opetope> targets;
  if (!o.expr.empty() || !o.file.empty())
    targets.push_back(input_opetope(o));
  else
    for (int d = 0; d <= o.dim; ++d)
      for (const auto& w : enumerate_opetopes(d, o.max_nodes)) targets.push_back(w);
  json arr = json::array();
  std::string text;
  std::size_t failures = 0;
  for (const auto& w : targets) {
    Report r = check_identities(w);
    if (!r.ok()) {
      ++failures;
      arr.push_back({{"opetope", w.str()}, {"issues", report_json(r)}});
      text += w.str() + ":\n" + r.str() + "\n";
    }
  }
  text += std::to_string(targets.size()) + " opetopes checked, " + std::to_string(failures) + " failures\n";
  emit(o, {{"checked", targets.size()}, {"failures", arr}}, text);
  return failures ? 1 : 0;
}

// ---- opset

json inclusion_json(const Inclusion& i) {
  return {{"sub", i.sub.dump()}, {"super", i.super.dump()}, {"map", i.map}};
}

std::string inclusion_text(const Inclusion& i) {
  std::string s = i.sub.dump() + "# into\n";
  for (std::size_t c = 0; c < i.map.size(); ++c)
    s += "# " + i.sub.cell(static_cast<int>(c)).name + " -> " + i.super.cell(i.map[c]).name + "\n";
  return s;
}

int opset_spine(const Options& o) {
  auto inc = spine(input_opetope(o), parse_window(o.window));
  emit(o, inclusion_json(inc), inclusion_text(inc));
  return 0;
}

int opset_boundary(const Options& o) {
  auto inc = boundary(input_opetope(o), parse_window(o.window));
  emit(o, inclusion_json(inc), inclusion_text(inc));
  return 0;
}

FinOpSet load_opset(const Options& o) {
  if (!o.file.empty()) return FinOpSet::parse(slurp(o.file));
  auto w = parse_window(o.window);
  if (!w) throw Usage("give --file or --window");
  return terminal_opset(*w, o.max_nodes);
}

int opset_orthogonal(const Options& o) {
  if (o.expr.empty()) throw Usage("give --expr for the shape");
  FinOpSet X = load_opset(o);
  Opetope w = parse_opetope(o.expr);
  Inclusion inc;
  if (o.kind == "spine")
    inc = spine(w, X.window());
  else if (o.kind == "boundary")
    inc = boundary(w, X.window());
  else if (o.kind == "empty")
    inc = empty_inclusion(w, X.window());
  else
    throw Usage("--kind is spine, boundary or empty");
  auto fail = orthogonality_failure(inc, X);
  json j{{"shape", w.str()}, {"kind", o.kind}, {"orthogonal", !fail}};
  std::string text = fail ? "not orthogonal: " + fail->problem + "\n" : "orthogonal\n";
  if (fail) {
    json wit = json::array();
    for (const auto& [a, x] : fail->witness) {
      wit.push_back({a, x});
      text += "  " + a + " -> " + x + "\n";
    }
    j["problem"] = fail->problem;
    j["witness"] = wit;
  }
  emit(o, j, text);
  return fail ? 1 : 0;
}

json class_json(const ClassCheck& c) {
  json j{{"holds", c.holds}, {"tested", c.tested}};
  if (c.failure) j["failure"] = {{"shape", c.failure->shape}, {"problem", c.failure->problem}};
  return j;
}

int opset_hlift(const Options& o) {
  FinOpSet X = load_opset(o);
  HLiftReport r = hlift_check(X, o.n);
  json j{{"S_n", class_json(r.s_n)},     {"S_n+1", class_json(r.s_n1)},  {"B_n+1", class_json(r.b_n1)},
         {"B_n+2", class_json(r.b_n2)},  {"S_n+2", class_json(r.s_n2)},  {"implication1", r.implication1},
         {"implication2", r.implication2}};
  emit(o, j, r.str());
  return r.implication1 && r.implication2 ? 0 : 1;
}

// ---- oalg

int oalg_free(const Options& o) {
  if (o.file.empty()) throw Usage("give --file with a graph");
  Graph g = Graph::parse(slurp(o.file));
  SortedFamily X = g.family();
  Opetope w = o.expr.empty() ? Opetope::arrow() : parse_opetope(o.expr);
  auto cells = free_cells(X, w, o.max_nodes);
  json arr = json::array();
  std::string text;
  for (const auto& c : cells) {
    arr.push_back(pasting_str(X, c));
    text += pasting_str(X, c) + "\n";
  }
  text += std::to_string(cells.size()) + " cells\n";
  emit(o, {{"shape", w.str()}, {"cells", arr}}, text);
  return 0;
}

int oalg_laws(const Options& o) {
  FiniteCategory C = load_category(o.category.empty() ? o.file : o.category);
  OAlgebra A = category_algebra(C, o.max_nodes);
  LawReport r = check_algebra_laws(A, o.max_nodes);
  emit(o, {{"unit_checked", r.unit_checked}, {"mult_checked", r.mult_checked}, {"violations", r.violations}},
       r.str());
  return r.ok() ? 0 : 1;
}

int oalg_h(const Options& o) {
  Opetope w = input_opetope(o);
  LambdaObject obj = h_object(w, o.k, o.n);
  json j{{"opetope", w.str()}, {"object", obj.str()}};
  std::string text = obj.str() + "\n";
  if (o.k == 1 && o.n == 1 && w.dim() <= 3) {
    j["ordinal"] = h_ordinal(w);
    text = "[" + std::to_string(h_ordinal(w)) + "] = " + text;
    json maps = json::array();
    if (w.dim() > 0)
      for (const auto& f : faces(w)) {
        MonotoneMap m = h_morphism(w, f);
        maps.push_back({{"face", f.str()}, {"map", m.str()}});
        text += f.str() + " : " + m.str() + "\n";
      }
    j["faces"] = maps;
  }
  emit(o, j, text);
  return 0;
}

int oalg_nerve(const Options& o) {
  FiniteCategory C = load_category(o.category.empty() ? o.file : o.category);
  FinOpSet N = nerve_category(C, o.max_nodes);
  emit(o, {{"cells", N.size()}, {"opset", N.dump()}}, N.dump());
  return 0;
}

int oalg_nerve_check(const Options& o) {
  FinOpSet N;
  if (!o.category.empty())
    N = nerve_category(load_category(o.category), o.max_nodes);
  else if (!o.file.empty())
    N = FinOpSet::parse(slurp(o.file));
  else
    throw Usage("give --category or --file");
  NerveReport r = nerve_axioms_check(N);
  emit(o, {{"S2", class_json(r.s2)}, {"S3", class_json(r.s3)}, {"B3", class_json(r.b3)}, {"ok", r.ok()}}, r.str());
  return r.ok() ? 0 : 1;
}

// ---- theory

json theory_json(const Theory& T) {
  json types = json::array(), ops = json::array(), eqns = json::array();
  for (const auto& t : T.sig.types) types.push_back({{"name", t.name}, {"grade", t.grade}});
  for (const auto& op : T.ops) ops.push_back({{"name", op.name}, {"output_dim", op.output_dim}});
  for (const auto& e : T.eqns) eqns.push_back(e.label);
  return {{"types", types}, {"ops", ops}, {"equations", eqns}, {"text", theory_str(T)}};
}

int theory_parse(const Options& o) {
  Theory T = parse_theory(input_text(o));
  emit(o, theory_json(T), theory_str(T));
  return 0;
}

int theory_lfd(const Options& o) {
  FiniteCategory C = o.category.empty() ? signature_to_lfd(parse_theory(input_text(o)).sig) : load_category(o.category);
  LfdReport r = validate_lfd(C);
  json dims = json::object();
  if (r.direct)
    for (std::size_t c = 0; c < C.objects.size(); ++c) dims[C.objects[c]] = r.dims[c];
  emit(o, {{"direct", r.direct}, {"ok", r.ok()}, {"dims", dims}, {"cycle", r.cycle}, {"issues", r.issues},
           {"category", C.dump()}},
       C.dump() + r.str(C));
  return r.ok() ? 0 : 1;
}

int theory_roundtrip(const Options& o) {
  FiniteCategory C = load_category(o.category.empty() ? o.file : o.category);
  Signature S = lfd_to_signature(C);
  FiniteCategory back = signature_to_lfd(S);
  bool iso = category_isomorphism(C, back).has_value();
  emit(o, {{"signature", signature_str(S)}, {"isomorphic", iso}},
       signature_str(S) + (iso ? "round trip: isomorphic\n" : "round trip: NOT isomorphic\n"));
  return iso ? 0 : 1;
}

int theory_check_model(const Options& o) {
  if (o.theory.empty() || o.model.empty()) throw Usage("give --theory and --model");
  Theory T = parse_theory(slurp(o.theory));
  Model M = Model::parse(slurp(o.model));
  ModelReport r = check_model(T, M);
  emit(o, {{"pass", r.ok()}, {"issues", r.issues}, {"failed_equations", r.failed_equations},
           {"environments", r.environments}},
       r.str());
  return r.ok() ? 0 : 1;
}

int theory_context(const Options& o) {
  FiniteCategory C = load_category(o.category);
  std::string text = !o.presheaf.empty() ? slurp(o.presheaf) : input_text(o);
  Presheaf X = Presheaf::parse(&C, text);
  std::vector<Context> cs;
  if (o.all)
    cs = all_contexts(X, o.limit);
  else
    cs.push_back(presheaf_to_context(X).context);
  json arr = json::array();
  std::string out;
  for (const auto& c : cs) {
    arr.push_back(c.str());
    out += c.str() + "\n";
  }
  emit(o, {{"contexts", arr}}, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Opetopes, opetopic sets and algebras, and dependently sorted theories"};
  app.require_subcommand(1);
  Options o;
  int status = 0;

  auto common = [&](CLI::App* c) {
    c->add_option("--expr", o.expr, "input given inline");
    c->add_option("--file", o.file, "input file");
    c->add_option("--format", o.format, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));
    c->add_option("--seed", o.seed, "reserved, has no effect");
  };
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, int (*fn)(const Options&)) {
    CLI::App* c = parent->add_subcommand(name, help);
    common(c);
    c->callback([&o, &status, fn] { status = fn(o); });
    return c;
  };

  CLI::App* op = app.add_subcommand("opetope", "single opetopes");
  op->require_subcommand(1);
  leaf(op, "validate", "check the tree and its decorations", opetope_validate);
  leaf(op, "target", "the target face", opetope_target);
  leaf(op, "source", "the source at --addr", opetope_source)->add_option("--addr", o.addr, "node address");
  leaf(op, "faces", "generating faces and their domains", opetope_faces);
  auto* en = leaf(op, "enumerate", "opetopes of a dimension up to a size", opetope_enumerate);
  en->add_option("--dim", o.dim, "dimension");
  en->add_option("--max-nodes", o.max_nodes, "bound on nodes counted through all levels");
  leaf(op, "hom", "morphisms into the opetope", opetope_hom)->add_option("--from", o.from, "domain opetope");
  auto* id = leaf(op, "identities", "the opetopic identities", opetope_identities);
  id->add_option("--dim", o.dim, "check every opetope up to this dimension when no input is given");
  id->add_option("--max-nodes", o.max_nodes, "size bound");

  CLI::App* os = app.add_subcommand("opset", "finite opetopic sets");
  os->require_subcommand(1);
  leaf(os, "spine", "the spine inclusion", opset_spine)->add_option("--window", o.window, "m:n");
  leaf(os, "boundary", "the boundary inclusion", opset_boundary)->add_option("--window", o.window, "m:n");
  auto* ort = leaf(os, "orthogonal", "orthogonality of --file against an inclusion", opset_orthogonal);
  ort->add_option("--kind", o.kind, "spine, boundary or empty");
  ort->add_option("--window", o.window, "m:n, for the terminal set when no --file is given");
  ort->add_option("--max-nodes", o.max_nodes, "size bound for the terminal set");
  auto* hl = leaf(os, "hlift", "the lifting implications", opset_hlift);
  hl->add_option("--n", o.n, "base dimension");
  hl->add_option("--window", o.window, "m:n, for the terminal set when no --file is given");
  hl->add_option("--max-nodes", o.max_nodes, "size bound for the terminal set");

  CLI::App* al = app.add_subcommand("oalg", "opetopic algebras");
  al->require_subcommand(1);
  leaf(al, "free", "free cells over a graph", oalg_free)->add_option("--max-nodes", o.max_nodes, "node bound");
  auto* lw = leaf(al, "laws", "algebra laws of a category", oalg_laws);
  lw->add_option("--category", o.category, "globe, simplex:N, terminal or a file");
  lw->add_option("--max-nodes", o.max_nodes, "node bound");
  auto* hh = leaf(al, "h", "the shape functor on an opetope", oalg_h);
  hh->add_option("--k", o.k, "k");
  hh->add_option("--n", o.n, "n");
  auto* nv = leaf(al, "nerve", "the opetopic nerve of a category", oalg_nerve);
  nv->add_option("--category", o.category, "globe, simplex:N, terminal or a file");
  nv->add_option("--max-nodes", o.max_nodes, "size bound on shapes");
  auto* nc = leaf(al, "nerve-check", "the S2, S3 and B3 conditions", oalg_nerve_check);
  nc->add_option("--category", o.category, "globe, simplex:N, terminal or a file");
  nc->add_option("--max-nodes", o.max_nodes, "size bound on shapes");

  CLI::App* th = app.add_subcommand("theory", "direct categories and theories");
  th->require_subcommand(1);
  leaf(th, "parse", "parse and elaborate a theory", theory_parse);
  leaf(th, "lfd", "the category of a signature, or check --category", theory_lfd)
      ->add_option("--category", o.category, "globe, simplex:N, terminal or a file");
  leaf(th, "roundtrip", "category to signature and back", theory_roundtrip)
      ->add_option("--category", o.category, "globe, simplex:N, terminal or a file");
  auto* cm = leaf(th, "check-model", "check a finite model", theory_check_model);
  cm->add_option("--theory", o.theory, "theory file");
  cm->add_option("--model", o.model, "model file");
  auto* cx = leaf(th, "context", "cell contexts of a presheaf", theory_context);
  cx->add_option("--category", o.category, "globe, simplex:N, terminal or a file");
  cx->add_option("--presheaf", o.presheaf, "presheaf file");
  cx->add_flag("--all", o.all, "every attachment order");
  cx->add_option("--limit", o.limit, "bound for --all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Usage& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return status;
}
