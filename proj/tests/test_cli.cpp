#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "cli.hpp"

using nilforms::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("d prints the exterior derivative", "[cli]") {
  auto r = call({"d", "--form", "-y*dx + x*dy", "--dim", "2"});
  CHECK(r.code == 0);
  CHECK(r.out == "2*dx^dy\n");
  CHECK(call({"d", "--form", "x*dy^dz", "--dim", "3"}).out == "dx^dy^dz\n");
}

TEST_CASE("vcalc examples", "[cli]") {
  CHECK(call({"vcalc", "div", "--fx", "x", "--fy", "y", "--fz", "z"}).out == "3\n");
  CHECK(call({"vcalc", "curl", "--fx", "-y", "--fy", "x", "--fz", "0"}).out == "(0, 0, 2)\n");
  CHECK(call({"vcalc", "grad", "--f", "1"}).out == "(0, 0, 0)\n");
}

TEST_CASE("exit code matrix", "[cli]") {
  CHECK(call({"d", "--form", "f", "--dim", "3"}).code == 2);
  CHECK_FALSE(call({"d", "--form", "f", "--dim", "3"}).err.empty());
  CHECK(call({"d", "--form", "dx + dy^dz"}).code == 2);
  CHECK(call({"d", "--form", "x*dx^dy^dz"}).code == 2);
  CHECK(call({"d", "--form", "x*dx^dy^dz", "--allow-top"}).code == 0);
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"check", "--trials", "0"}).code == 2);
  CHECK(call({"check", "--dim", "2", "--degrees", "0..2"}).code == 2);
  CHECK(call({"check", "--backend", "rational", "--pool", "transcendental"}).code == 2);
  CHECK(call({"check", "--backend", "complex"}).code == 2);
  CHECK(call({"vcalc", "div", "--fx", "x"}).code == 2);
  CHECK(call({"vcalc", "grad", "--f", "x", "--dim", "4"}).code == 2);
  CHECK(call({"stokes", "--form", "x*dy", "--tangents", "1,0,0"}).code == 2);
  CHECK(call({"stokes", "--form", "x*dy", "--base", "1,2"}).code == 2);
  CHECK(call({"stokes"}).code == 2);
  CHECK(call({"eval", "--form", "x*dy", "--at", "1,2,3"}).code == 2);
  CHECK(call({"stokes", "--form", "sin(x)*dy"}).code == 2);
  CHECK(call({"stokes", "--form", "sin(x)*dy", "--backend", "float"}).code == 0);
  CHECK(call({"stokes", "--form", "x*dy"}).code == 0);
  CHECK(call({"stokes", "--form", "x*dy", "--rhs-form", "2*dx^dy"}).code == 1);
  CHECK(call({"check", "--trials", "3"}).code == 0);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("stokes reports the worked example", "[cli]") {
  auto r = call({"stokes", "--form", "x*dy", "--dim", "3", "--json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::ordered_json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["top_residual"] == "0");
  CHECK(j["lhs"].size() == 1);
  CHECK(j["lhs"][0]["monomial"] == std::vector<int>{1, 2});
  CHECK(j["lhs"][0]["value"] == "1");
}

TEST_CASE("stokes on a random 2-form is exact", "[cli]") {
  auto r = call({"stokes", "--random-degree", "2", "--seed", "9", "--json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::ordered_json::parse(r.out);
  CHECK(j["top_residual"] == "0");
  CHECK(j["lower_order_max"] == "0");
}

TEST_CASE("stokes JSON round-trips", "[cli][json]") {
  for (const char* backend : {"rational", "float"}) {
    auto r = call({"stokes", "--form", "x**2*y*dz^dx - 3/7*dy^dz", "--base", "1,1/2,2", "--tangents", "1,2,3;0,1,-1;2,0,1",
                   "--backend", backend, "--json"});
    REQUIRE(r.code == 0);
    auto parsed = nlohmann::ordered_json::parse(r.out);
    auto report = parsed.get<nilforms::cli::StokesReport>();
    CHECK(nlohmann::ordered_json(report).dump(2) + "\n" == r.out);
    CHECK(nlohmann::ordered_json::parse(nlohmann::ordered_json(report).dump()).get<nilforms::cli::StokesReport>() == report);
  }
}

TEST_CASE("identical arguments give byte-identical output", "[cli]") {
  const std::vector<std::vector<std::string>> cases{
      {"check", "--seed", "7", "--trials", "5", "--json"},
      {"check", "--seed", "7", "--trials", "5", "--backend", "float"},
      {"stokes", "--random-degree", "1", "--seed", "3", "--backend", "float", "--json"},
      {"d", "--form", "sin(x*y)*dz", "--json"}};
  for (const auto& args : cases) {
    auto a = call(args), b = call(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("check covers degrees 0..4 in R^5", "[cli]") {
  auto r = call({"check", "--degrees", "0..4", "--dim", "5", "--trials", "3", "--json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::ordered_json::parse(r.out);
  CHECK(j["per_degree"].size() == 5);
  CHECK(j["pass"] == true);
}

TEST_CASE("eval evaluates a form", "[cli]") {
  auto r = call({"eval", "--form", "x*dy^dz", "--at", "2,0,0", "--tangents", "0,1,0;0,0,1"});
  CHECK(r.code == 0);
  CHECK(r.out == "2\n");
  CHECK(call({"eval", "--form", "x**2", "--at", "3,0,0"}).out == "9\n");
}

TEST_CASE("warnings go to stderr", "[cli]") {
  auto r = call({"d", "--form", "x*dx^dx + y*dx^dy"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(r.out.find("warning") == std::string::npos);
}

TEST_CASE("the installed binary follows the same exit codes", "[cli][process]") {
  auto status = [](const std::string& args) {
    int s = std::system((std::string("\"") + NILFORMS_CLI_PATH + "\" " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(status("vcalc div --fx x --fy y --fz z") == 0);
  CHECK(status("stokes --form 'x*dy' --rhs-form '2*dx^dy'") == 1);
  CHECK(status("check --trials 0") == 2);
}
