#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "commands.hpp"

using ewgeom::cli::run;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

json report(const std::vector<std::string>& args) {
  const Outcome o = call(args);
  REQUIRE(o.code == 0);
  return json::parse(o.out);
}

int exe(const std::string& args) {
  const std::string cmd = std::string(EWGEOM_EXE) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string tmp_path(const std::string& name) { return "/tmp/ewgeom_test_cli_" + name; }

std::vector<std::string> lines_of(const std::string& path) {
  std::ifstream f(path);
  std::vector<std::string> lines;
  for (std::string l; std::getline(f, l);) lines.push_back(l);
  return lines;
}

}  // namespace

TEST_CASE("number and list parsing") {
  CHECK(ewgeom::cli::parse_number("2/3") == doctest::Approx(2.0 / 3));
  CHECK(ewgeom::cli::parse_number("-0.5") == -0.5);
  CHECK_THROWS(ewgeom::cli::parse_number("1/0"));
  CHECK_THROWS(ewgeom::cli::parse_number("x"));
  CHECK_THROWS(ewgeom::cli::parse_number("1.5abc"));
  CHECK(ewgeom::cli::parse_list("3,3,1") == std::vector<double>{3, 3, 1});
  CHECK_THROWS(ewgeom::cli::parse_list("3,,1"));
}

TEST_CASE("region maximize reports") {
  json r = report({"region", "maximize", "-n", "3", "-c", "3,3,3"});
  CHECK(r["result"]["value"].get<double>() == doctest::Approx(5.0 / 3).epsilon(1e-9));
  const auto p = r["result"]["pvec"].get<std::vector<double>>();
  CHECK(std::abs(p[0] - 1.0 / 9) <= 1e-8);
  CHECK(std::abs(p[1] - 1.0 / 9) <= 1e-8);
  CHECK(std::abs(p[2] - 1.0 / 3) <= 1e-8);
  CHECK(r["result"]["grid_oracle"]["value"].get<double>() <= 5.0 / 3 + 1e-12);
  CHECK(r["summary"]["pass"].get<bool>());
  CHECK(r["result"]["argmax"]["a"].size() == 3);
  CHECK(r["result"]["argmax"]["a"][0].size() == 2);

  r = report({"region", "maximize", "-n", "3", "-c", "3,3,1"});
  CHECK(std::abs(r["result"]["value"].get<double>() - 1.0) <= 1e-9);

  r = report({"region", "maximize", "-n", "4", "-c", "4,4,4,1"});
  CHECK(std::abs(r["result"]["value"].get<double>() - 1.0) <= 1e-9);

  r = report({"region", "maximize", "-n", "3", "-c", "1/3,1/3,1/3", "--grid", "0"});
  CHECK(r["result"]["value"].get<double>() == doctest::Approx(5.0 / 27).epsilon(1e-9));
  CHECK_FALSE(r["result"].contains("grid_oracle"));
}

TEST_CASE("identical command and seed give identical reports") {
  const auto a = call({"region", "certify", "-n", "3", "-c", "3,6,3", "--offset", "2", "--seed", "11"});
  const auto b = call({"region", "certify", "-n", "3", "-c", "3,6,3", "--offset", "2", "--seed", "11"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(json::parse(a.out)["result"]["status"] == "tangent");
}

TEST_CASE("seed precedence") {
  ::setenv("WF_SEED", "7", 1);
  CHECK(report({"region", "maximize", "-n", "3", "-c", "3,3,1"})["seed"] == 7);
  CHECK(report({"--seed", "0x10", "region", "maximize", "-n", "3", "-c", "3,3,1"})["seed"] == 16);
  ::unsetenv("WF_SEED");
  CHECK(report({"region", "maximize", "-n", "3", "-c", "3,3,1"})["seed"] == 0x5EED);
  CHECK(call({"--seed", "abc", "region", "maximize", "-n", "3", "-c", "3,3,1"}).code == 1);
}

TEST_CASE("witness actions") {
  json r = report({"witness", "-f", "W3", "-a", "0.6667", "certify"});
  CHECK(r["result"]["is_witness"].get<bool>());
  CHECK(r["result"]["detected_state_found"].get<bool>());
  CHECK(r["result"]["detecting_trace"].get<double>() < 0.0);
  CHECK(r["result"]["min_product_expectation"].get<double>() >= -1e-9);

  r = report({"witness", "-f", "W3pp", "-a", "0", "materialize"});
  const json& m = r["result"]["matrix"];
  REQUIRE(m.size() == 9);
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) {
      const double expect = (i % 4 == 0 && j % 4 == 0) ? 1.0 / 3 : 0.0;
      CHECK(std::abs(m[i][j][0].get<double>() - expect) <= 1e-15);
      CHECK(m[i][j][1].get<double>() == 0.0);
    }
  }

  r = report({"witness", "-f", "W4", "-a", "0.3", "trace", "--beta", "2", "--gamma", "4"});
  CHECK(r["result"]["trace"].get<double>() < 0.0);
  CHECK(r["result"]["detects"].get<bool>());

  r = report({"witness", "-f", "W3pp", "-a", "-2", "materialize"});
  CHECK(r["result"]["alpha"] == -2.0);

  r = report({"witness", "-f", "W3", "-a", "1/2", "decompose"});
  CHECK(r["result"]["decomposition"]["settings_count"] == 10);
  CHECK(r["summary"]["pass"].get<bool>());
}

TEST_CASE("state classify") {
  json r = report({"state", "classify", "--beta", "1.5"});
  CHECK(r["result"]["classification"] == "ppt_entangled");
  CHECK(r["result"]["ppt"] == r["result"]["ppt_partial_transpose"]);
  r = report({"state", "classify", "--beta", "5", "--gamma", "4"});
  CHECK(r["result"]["classification"] == "unknown");
  r = report({"state", "classify", "--weights", "0.2,0.3,0.3,0.2"});
  CHECK(r["result"]["weights"].size() == 4);
}

TEST_CASE("region subcommands") {
  json r = report({"region", "refine", "-n", "3", "--vertices", "1/3,0,0;0,1/3,0;0,0,1/3", "--rounds", "3", "--select",
                   "0,1,new"});
  REQUIRE(r["result"]["steps"].size() == 2);
  CHECK(r["result"]["steps"][1]["plane"]["status"] == "exact_boundary");
  CHECK(r["result"]["steps"][1]["discovered"].is_null());

  r = report({"region", "conjecture", "-n", "3"});
  CHECK(r["result"]["status"] == "exact_boundary");

  r = report({"region", "interval", "-f", "W3"});
  CHECK(std::abs(r["result"]["alpha_star"].get<double>() - 2.0 / 3) <= 1e-3);
}

TEST_CASE("plotdata") {
  const std::string empty = tmp_path("empty.csv");
  CHECK(call({"plotdata", "--samples", "0", "--out", empty}).code == 0);
  CHECK(lines_of(empty) == std::vector<std::string>{"p1,p2,p3,kind"});

  const std::string big = tmp_path("big.csv");
  const Outcome o = call({"plotdata", "--samples", "100000", "--out", big});
  REQUIRE(o.code == 0);
  CHECK(json::parse(o.out)["result"]["samples"] == 100000);
  const auto lines = lines_of(big);
  int samples = 0;
  bool saw_center = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    double p1 = 0, p2 = 0, p3 = 0;
    char kind[16] = {};
    REQUIRE(std::sscanf(lines[i].c_str(), "%lf,%lf,%lf,%15s", &p1, &p2, &p3, kind) == 4);
    const std::string k = kind;
    if (k == "plane") continue;
    CHECK(3 * (p1 + p2) + p3 <= 1 + 1e-9);
    if (k == "sample") ++samples;
    if (k == "vertex" && std::abs(p1 - 1.0 / 9) < 1e-15 && std::abs(p2 - 1.0 / 9) < 1e-15 &&
        std::abs(p3 - 1.0 / 3) < 1e-15)
      saw_center = true;
  }
  CHECK(samples == 100000);
  CHECK(saw_center);

  CHECK(call({"plotdata", "-n", "4"}).code == 1);
  CHECK(call({"plotdata", "--out", "/nonexistent-dir/x.csv"}).code == 1);
}

TEST_CASE("exit codes") {
  CHECK(exe("region maximize -n 3 -c 3,3,3") == 0);
  CHECK(exe("region maximize -n 3 -c 3,3") == 1);
  CHECK(exe("region maximize -n 3") == 1);
  CHECK(exe("nonsense") == 1);
  CHECK(exe("witness -f W9 -a 1 materialize") == 1);
  CHECK(exe("witness -f W3 -a 0.9 materialize") == 1);
  CHECK(exe("witness -f W3 -a 0.5 dance") == 1);
  CHECK(exe("--iterations 1 --restarts 2 region maximize -n 3 -c 3,9,5") == 2);
  CHECK(exe("--help") == 0);
}

TEST_CASE("reproduce with a corrupted tolerance fails") {
  const Outcome o = call({"--tol", "1e-30", "reproduce", "all"});
  CHECK(o.code == 3);
  const json r = json::parse(o.out);
  CHECK(r["summary"]["failed"].get<int>() > 0);
  CHECK(r["tolerances"]["override"] == 1e-30);
}
