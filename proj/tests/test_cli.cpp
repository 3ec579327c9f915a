#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "opetopes/theory.hpp"

using namespace opetopes;
using json = nlohmann::json;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(OPETOPES_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(OPETOPES_DATA_DIR) + "/" + name; }

const std::string xi = "--expr '{ [] <- I3  [[*]] <- I2  [[**]] <- I1 }'";

}  // namespace

TEST_CASE("worked examples") {
  Run t = run("opetope target " + xi);
  CHECK(t.status == 0);
  CHECK(t.out == "I4\n");
  Run e = run("opetope enumerate --dim 2 --max-nodes 5");
  CHECK(e.status == 0);
  CHECK(e.out == "I0\nI1\nI2\nI3\nI4\nI5\n");
  Run m = run("theory check-model --theory " + data("tcat.th") + " --model " + data("c3.mod"));
  CHECK(m.status == 0);
  CHECK(m.out.rfind("PASS", 0) == 0);
}

TEST_CASE("exit codes") {
  CHECK(run("").status == 2);
  CHECK(run("opetope").status == 2);
  CHECK(run("opetope target --expr '{ [] <- I3'").status == 2);
  CHECK(run("opetope source " + xi + " --addr '[[***]]'").status == 2);
  CHECK(run("opetope validate --expr '{ [*] <- arrow }'").status == 1);
  CHECK(run("opetope validate --expr '{ [] <- I1  [[*]] <- I2 }'").status == 1);
  CHECK(run("opetope validate --expr '{ [*] <- arrow }' --format dot").status == 2);
  CHECK(run("opetope identities --dim 3 --max-nodes 4").status == 0);
  CHECK(run("oalg nerve-check --category " + data("three.cat") + " --max-nodes 4").status == 0);
  CHECK(run("theory lfd --category " + data("walk.cat")).status == 0);
  CHECK(run("theory check-model --theory " + data("tcat.th") + " --model " + data("walk3.mod")).status == 0);
  CHECK(run("oalg free --file " + data("cycle.graph") + " --max-nodes 3").status == 0);
  CHECK(run("oalg laws --category " + data("walk.cat") + " --max-nodes 4").status == 0);
  CHECK(run("opset orthogonal --expr arrow --kind boundary --file " + data("globe2.psh")).status == 2);
  CHECK(run("opetope target --expr arrow --format yaml").status == 2);
}

TEST_CASE("check failures exit 1") {
  char path[] = "/tmp/opetopes_cli_XXXXXX";
  int fd = mkstemp(path);
  REQUIRE(fd >= 0);
  std::string bad = "sort O = {o}\nsort A(o, o) = {e, r}\nop i(x) table:\n  o -> e\n"
                    "op c(g, f) table:\n  e e -> e; e r -> r; r e -> e; r r -> e\n";
  REQUIRE(write(fd, bad.data(), bad.size()) == static_cast<ssize_t>(bad.size()));
  close(fd);
  Run r = run("theory check-model --theory " + data("tcat.th") + " --model " + path + " --format json");
  std::remove(path);
  CHECK(r.status == 1);
  json j = json::parse(r.out);
  CHECK(j["pass"] == false);
  CHECK(!j["failed_equations"].empty());
}

TEST_CASE("json output round trips through the parsers") {
  Run t = run("opetope target " + xi + " --format json");
  json jt = json::parse(t.out);
  CHECK(parse_opetope(jt["target"].get<std::string>()).str() == jt["target"]);
  CHECK(parse_opetope(jt["opetope"].get<std::string>()).str() == jt["opetope"]);

  json je = json::parse(run("opetope enumerate --dim 3 --max-nodes 3 --format json").out);
  for (const auto& s : je["opetopes"]) CHECK(parse_opetope(s.get<std::string>()).str() == s);

  json js = json::parse(run("opset spine " + xi + " --format json").out);
  for (const char* key : {"sub", "super"}) {
    std::string text = js[key];
    CHECK(FinOpSet::parse(text).dump() == text);
  }

  json jn = json::parse(run("oalg nerve --category " + data("walk.cat") + " --max-nodes 3 --format json").out);
  std::string nerve = jn["opset"];
  CHECK(FinOpSet::parse(nerve).dump() == nerve);
  CHECK(jn["cells"] == FinOpSet::parse(nerve).size());

  json jp = json::parse(run("theory parse --file " + data("tcat.th") + " --format json").out);
  std::string text = jp["text"];
  CHECK(theory_str(parse_theory(text)) == text);

  json jl = json::parse(run("theory lfd --category " + data("three.cat") + " --format json").out);
  std::string cat = jl["category"];
  CHECK(FiniteCategory::parse(cat).dump() == cat);
}

TEST_CASE("dot output") {
  Run d = run("opetope validate " + xi + " --format dot");
  CHECK(d.status == 0);
  CHECK(d.out.rfind("digraph", 0) == 0);
  CHECK(run("opetope validate " + xi + " --format dot").out == d.out);
  CHECK(run("theory parse --file " + data("tcat.th") + " --format dot").status == 2);
}
