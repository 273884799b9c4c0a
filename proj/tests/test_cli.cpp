#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qdop/cli.hpp"
#include "qdop/error.hpp"

using namespace qdop;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& body) {
  std::string path = "qdop_test_" + name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("act golden outputs") {
  CHECK(cli({"act", "d1", "x^3"}).out == "(q^2 + q + 1)*x^2\n");
  CHECK(cli({"act", "s1", "x^5"}).out == "q^5*x^5\n");
  CHECK(cli({"act", "d", "1"}).out == "0\n");
  CHECK(cli({"--algebra", "D_laurent_1", "act", "xinv", "x^2"}).out == "x\n");
  auto j = nlohmann::json::parse(cli({"act", "d1", "x^3", "--json"}).out);
  CHECK(j["result"] == "(q^2 + q + 1)*x^2");
}

TEST_CASE("nf golden outputs") {
  CHECK(cli({"nf", "--basis", "D", "x*d1*dm1"}).out == "(1/(q - 1))*d1 + (-1/(q - 1))*dm1\n");
  CHECK(cli({"nf", "--basis", "D", "1"}).out == "1\n");
  CHECK(cli({"nf", "--basis", "D", "d*dm1"}).out == "d*d1 - q*d1*d + (q - 1)*d1*dm1 + (1/q)*dm1*d\n");
  CHECK(cli({"nf", "--basis", "D", "d*dm1", "--seed", "17"}).out == cli({"nf", "--basis", "D", "d*dm1"}).out);
  Run r = cli({"nf", "--basis", "D", "x*d1*dm1", "--json"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["basis"] == "D");
  REQUIRE(j["terms"].size() == 2);
  CHECK(j["terms"][0]["element"] == "d1");
  CHECK(j["terms"][0]["coeff"] == "1/(q - 1)");
}

TEST_CASE("ore, dims, exterior and export") {
  Run o = cli({"ore", "d1", "--j", "1", "--kmax", "4", "--json"});
  CHECK(o.code == 0);
  auto j = nlohmann::json::parse(o.out);
  CHECK(j["k"] == 2);
  CHECK(cli({"ore", "d", "--kmax", "1"}).code == kExitVerifyFailed);

  Run d = cli({"dims", "--max", "3", "--json"});
  CHECK(d.code == 0);
  auto dj = nlohmann::json::parse(d.out);
  REQUIRE(dj.size() == 3);
  CHECK(dj[2]["dimension"] == 13);
  CHECK(dj[2]["hilbert"] == 13);
  CHECK(cli({"--algebra", "D_poly_n", "dims", "--max", "2"}).code == kExitUsage);

  Run e = cli({"exterior", "--n", "2"});
  CHECK(e.code == 0);
  CHECK(e.out == "matrix units for n = 2: pass, span dimension 16 of 16\n");

  CHECK(cli({"export", "d", "--json"}).out ==
        "{\"module\":{\"v\":1,\"laurent\":[false],\"params\":[\"q\"]},\"terms\":[{\"shift\":[-1],\"coeff\":\"m\"}]}\n");
}

TEST_CASE("verify exit status and fault hook") {
  Run ok = cli({"verify", "--filter", "R1?"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("10/10 checks passed") != std::string::npos);

  Run bad = cli({"verify", "--filter", "R3", "--inject-fault", "R3", "--json"});
  CHECK(bad.code == kExitVerifyFailed);
  auto j = nlohmann::json::parse(bad.out);
  REQUIRE(j.size() == 1);
  CHECK(j[0]["id"] == "R3");
  CHECK(j[0]["status"] == "fail");
  CHECK_FALSE(j[0]["witness"].get<std::string>().empty());
  CHECK(j[0].contains("elapsed_ms"));

  Run passing = cli({"verify", "--filter", "R2", "--json"});
  auto pj = nlohmann::json::parse(passing.out);
  CHECK(pj[0]["status"] == "pass");
  CHECK_FALSE(pj[0].contains("witness"));

  CHECK(cli({"verify", "--filter", "Z*"}).code == kExitUsage);
}

TEST_CASE("usage and parse errors exit 2") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"act", "d1"}).code == kExitUsage);
  CHECK(cli({"nf", "x"}).code == kExitUsage);
  CHECK(cli({"nf", "--basis", "Q", "x"}).code == kExitUsage);
  CHECK(cli({"act", "x^-1", "x"}).code == kExitUsage);
  CHECK(cli({"act", "d1*(x", "x"}).code == kExitUsage);
  CHECK(cli({"act", "zz", "x"}).code == kExitUsage);
  CHECK(cli({"--algebra", "Nope", "act", "x", "x"}).code == kExitUsage);
  CHECK(cli({"--n", "0", "exterior"}).code == kExitUsage);
  CHECK(cli({"exterior", "--n", "9"}).code == kExitUsage);
  CHECK(cli({"--params-file", "/nonexistent/params", "act", "x", "x"}).code == kExitUsage);
  Run syn = cli({"act", "d1*(x", "x"});
  CHECK(syn.err.find("1:") != std::string::npos);
  CHECK(syn.out.empty());
  Run help = cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("verify") != std::string::npos);
}

TEST_CASE("params file") {
  auto pins = parse_params_text("# comment\nq = 3\n\n q_12=-5/2 # trailing\n");
  REQUIRE(pins.size() == 2);
  CHECK(pins["q"] == Rational(3));
  CHECK(pins["q_12"] == Rational(-5, 2));
  CHECK(parse_params_text("q=4/6")["q"] == Rational(2, 3));
  CHECK_THROWS_AS(parse_params_text("q"), PreconditionViolated);
  CHECK_THROWS_AS(parse_params_text("q=x"), PreconditionViolated);
  CHECK_THROWS_AS(parse_params_text("q=1/0"), PreconditionViolated);
  CHECK_THROWS_AS(parse_params_text("q=2\nq=3"), PreconditionViolated);
  CHECK_THROWS_AS(parse_params_text("=2"), PreconditionViolated);

  std::string good = temp_file("good", "q = 3\n");
  CHECK(cli({"--params-file", good, "act", "d1", "x^3"}).out == "13*x^2\n");
  CHECK(cli({"--params-file", good, "verify", "--filter", "R[0-9]"}).code == kExitOk);
  for (const char* v : {"1", "-1", "0"}) {
    std::string degenerate = temp_file("degenerate", std::string("q = ") + v + "\n");
    CHECK(cli({"--params-file", degenerate, "act", "d1", "x"}).code == kExitUsage);
  }
  std::string unknown = temp_file("unknown", "t = 3\n");
  CHECK(cli({"--params-file", unknown, "act", "d1", "x"}).code == kExitUsage);
  std::remove(good.c_str());
  std::remove(unknown.c_str());
  std::remove("qdop_test_degenerate");
}
