#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyram/cli.hpp"
#include "polyram/config.hpp"
#include "polyram/errors.hpp"

using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = polyram::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args) {
  const Outcome o = run(std::move(args));
  REQUIRE(o.code == 0);
  return json::parse(o.out);
}

}  // namespace

TEST_CASE("field and polynomial commands") {
  const json info = run_json({"--q", "4", "field", "info"});
  CHECK(info["modulus"] == "x^2+x+1");
  CHECK(info["q"] == 4);

  const json fz = run_json({"poly", "factor", "--f", "T^3+T"});
  REQUIRE(fz["factors"].size() == 2);
  CHECK(fz["factors"][1]["prime"] == "T+1");
  CHECK(fz["factors"][1]["exponent"] == 2);

  const json divs = run_json({"poly", "divisors", "--f", "T^2+T", "--unitary"});
  CHECK(divs.dump().find("T^2+T") != std::string::npos);

  const json g = run_json({"--q", "3", "poly", "gcd", "--a", "T^2+2", "--b", "T+1"});
  CHECK(g.dump().find("\"T+1\"") != std::string::npos);
}

TEST_CASE("arithmetic and Ramanujan sums") {
  const json v = run_json({"arith", "eval", "--fn", "sigma", "--G", "T^2", "--s", "1"});
  CHECK(v["value"] == 7);

  const json e = run_json({"eta", "--G", "T", "--H", "T^2", "--method", "both"});
  CHECK(e["exact"] == -2);
  REQUIRE(e["approx"].is_array());
  CHECK(e["approx"][0].get<double>() == doctest::Approx(-2.0));
  CHECK(e["agreement"].get<double>() < 1e-9);

  const json es = run_json({"eta", "--G", "T", "--H", "T^2", "--unitary"});
  CHECK(es["exact"] == -1);
  CHECK(es["approx"].is_null());
}

TEST_CASE("coefficients, expansions and verification") {
  const json c = run_json({"coeff", "--identity", "sigma", "--s", "1", "--k", "1", "--H", "T"});
  CHECK(c["value"].get<double>() == doctest::Approx(0.5));
  const json cu = run_json({"coeff", "--identity", "phi", "--s", "1", "--k", "1", "--H", "T", "--unitary"});
  CHECK(cu["value"].get<double>() == doctest::Approx(-1.0 / 6.0));
  const json cg = run_json({"coeff", "--identity", "tau", "--k", "2", "--H", "T,T", "--method", "general",
                            "--deg-bound", "2"});
  CHECK(cg["value"].get<double>() == doctest::Approx(0.4375));

  const json ex = run_json({"expand", "--identity", "sigma", "--s", "1", "--k", "1", "--G", "T", "--deg-bound", "2"});
  CHECK(ex["partials"].back()[1].get<double>() == 1.5);
  CHECK_FALSE(ex.contains("residual"));

  const json ver = run_json({"verify", "--identity", "tau", "--k", "2", "--G", "T,T"});
  CHECK(ver["pass"] == true);
  CHECK(ver["lhs"] == 2.0);
  CHECK(ver["partials"].size() == 5);

  const json z = run_json({"zeta", "--s", "2"});
  CHECK(z["value"] == 2.0);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == polyram::cli::kUsage);
  CHECK(run({"bogus"}).code == polyram::cli::kUsage);
  CHECK(run({"poly", "factor", "--f", "T+Y"}).code == polyram::cli::kUsage);
  CHECK(run({"--q", "6", "field", "info"}).code == polyram::cli::kDomain);
  CHECK(run({"zeta", "--s", "1"}).code == polyram::cli::kDomain);

  const Outcome tau1 = run({"verify", "--identity", "tau", "--k", "1", "--G", "T"});
  CHECK(tau1.code == polyram::cli::kDomain);
  CHECK(tau1.err.find("(k≥2)") != std::string::npos);

  const Outcome failing = run({"--tolerance", "1e-30", "verify", "--identity", "tau", "--k", "2", "--G", "T,T"});
  CHECK(failing.code == polyram::cli::kVerification);
  CHECK(json::parse(failing.out)["pass"] == false);

  const Outcome budget = run({"--budget", "10", "expand", "--identity", "tau", "--k", "2", "--G", "T,T"});
  CHECK(budget.code == polyram::cli::kResource);
  CHECK(budget.err.find("961") != std::string::npos);

  CHECK(run({"selftest", "--level", "quick"}).code == polyram::cli::kOk);
  CHECK(run({"selftest", "--level", "quick", "--inject-fault"}).code == polyram::cli::kVerification);
}

TEST_CASE("output is byte-for-byte deterministic") {
  const std::vector<std::vector<std::string>> commands{
      {"verify", "--identity", "phi", "--k", "2", "--G", "T,T+1", "--unitary"},
      {"--format", "csv", "expand", "--identity", "beta", "--s", "1", "--k", "1", "--G", "T^2"},
      {"--q", "3", "--format", "plain", "eta", "--G", "T+2", "--H", "T^2+1", "--method", "both"},
      {"selftest", "--level", "quick"},
  };
  for (const auto& cmd : commands) {
    const Outcome a = run(cmd), b = run(cmd);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
  const std::string csv = run({"--format", "csv", "zeta", "--s", "2"}).out;
  CHECK(csv.rfind("key,value\n", 0) == 0);
}

TEST_CASE("config files") {
  polyram::Config cfg;
  cfg.p = 3;
  cfg.degree_bound = 3;
  cfg.tolerance = 0.25;
  cfg.format = "plain";
  const std::string text = cfg.canonical();
  CHECK(polyram::Config::parse(text).canonical() == text);
  CHECK(polyram::Config::parse("{}").canonical() == polyram::Config{}.canonical());
  CHECK_THROWS_AS(polyram::Config::parse("{\"colour\": 1}"), polyram::ParseError);
  CHECK_THROWS_AS(polyram::Config::parse("{\"degree_bound\": \"x\"}"), polyram::ParseError);
  CHECK_THROWS_AS(polyram::Config::parse("{"), polyram::ParseError);

  const std::string path = "polyram_test_config.json";
  {
    std::ofstream f(path);
    f << text;
  }
  const Outcome o = run({"--config", path, "field", "info"});
  CHECK(o.code == 0);
  CHECK(o.out.find("F_3") != std::string::npos);
  // command-line options override the file
  CHECK(run({"--config", path, "--q", "5", "field", "info"}).out.find("F_5") != std::string::npos);
  std::remove(path.c_str());
  CHECK(run({"--config", "does/not/exist.json", "field", "info"}).code == polyram::cli::kUsage);
}
