#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gibbs/cli.hpp"
#include "gibbs/errors.hpp"

using gibbs::cli::RunConfig;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = gibbs::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> data_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("classify") {
  const Result r = invoke({"classify", "--model", "uniform"});
  CHECK(r.code == 0);
  CHECK(r.out == "regime=Supercritical local=Gaussian mu_star=-inf\n");
  const Result j = invoke({"classify", "--model", "uniform", "--json"});
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["regime"] == "Supercritical");
  CHECK(doc["mu_star"] == "-inf");
  CHECK(invoke({"classify", "--model", "power:p=2,a=0.5"}).out.find("local=DiscreteGaussian") != std::string::npos);
}

TEST_CASE("enumerate") {
  const Result r = invoke({"enumerate", "--M", "4"});
  CHECK(r.code == 0);
  const auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == "profile,multiplicity");
  CHECK(rows[1] == "4:1,1");
  CHECK(rows[2] == "3:1;1:1,4");
  CHECK(r.out.find("# M=4 profiles=5 total=15") != std::string::npos);
  CHECK(invoke({"enumerate", "--M", "15"}).code == 2);
}

TEST_CASE("curve output") {
  const Result r = invoke({"curve", "--model", "uniform", "--mu", "-4.605170185988091", "--n", "20", "--seed", "3"});
  REQUIRE(r.code == 0);
  const auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 42);
  CHECK(rows[0] == "x,empirical_mean,empirical_sd,oracle,n");
  CHECK(rows[1].rfind("0,", 0) == 0);
  CHECK(rows[1].substr(rows[1].size() - 5) == ",1,20");  // step oracle is 1 at x = 0
  CHECK(r.out.find("# oracle=step") != std::string::npos);
  CHECK(r.out.find("# plan.kappa=") != std::string::npos);
}

TEST_CASE("local output") {
  const Result r = invoke({"local", "--model", "power:p=2,a=0.5", "--mu", "-20", "--n", "10", "--grid", "-1:1:1"});
  REQUIRE(r.code == 0);
  const auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(r.out.find("# oracle=discrete_gaussian(c=1)") != std::string::npos);
}

TEST_CASE("thread count does not change the output") {
  const std::vector<std::string> args{"curve", "--model", "power:p=1.5", "--mu", "-8", "--n", "50", "--seed", "9"};
  setenv("GIBBS_SHAPES_THREADS", "1", 1);
  const Result one = invoke(args);
  setenv("GIBBS_SHAPES_THREADS", "4", 1);
  const Result four = invoke(args);
  unsetenv("GIBBS_SHAPES_THREADS");
  REQUIRE(one.code == 0);
  CHECK(one.out == four.out);
}

TEST_CASE("simulate writes one line per sample") {
  const Result r = invoke({"simulate", "--model", "uniform", "--mu", "0", "--n", "7", "--seed", "1"});
  REQUIRE(r.code == 0);
  const auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 8);
  CHECK(rows[0] == "sample_index,mass,parts");
  CHECK(rows[1].rfind("0,", 0) == 0);
}

TEST_CASE("exit codes") {
  CHECK(invoke({"curve", "--model", "uniform", "--mu", "-3", "--oracle", "gamma"}).code == 2);
  CHECK(invoke({"classify", "--model", "uniform", "--bogus"}).code == 2);
  CHECK(invoke({"curve", "--model", "uniform"}).code == 2);
  CHECK(invoke({"curve", "--model", "expr:\"-x*ln(x)^2\"", "--mu", "1"}).code == 2);
  CHECK(invoke({"classify", "--model", "nonsense"}).code == 2);
  CHECK(invoke({}).code == 2);
  const Result osc = invoke({"classify", "--model", "expr:\"sin(ln(x))\""});
  CHECK(osc.code == 3);
  CHECK(osc.err.find("inconclusive") != std::string::npos);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("config parsing") {
  const RunConfig c = gibbs::cli::parse_config(
      "# comment\ncommand=curve\nmodel=uniform\nmu=-2.5\nseed=4\ngrid=0:1:0.5\n\nexclude=0.2,0.4\n");
  CHECK(c.command == "curve");
  CHECK(c.mu == -2.5);
  CHECK(c.seed == 4);
  CHECK(c.exclude == std::make_pair(0.2, 0.4));
  CHECK(gibbs::cli::parse_config(gibbs::cli::serialize(c)) == c);

  RunConfig odd;
  odd.command = "simulate";
  odd.mu_list = {0.1, -1.0 / 3.0};
  odd.eps_tail = 1e-12;
  odd.zeta = 0.7;
  CHECK(gibbs::cli::parse_config(gibbs::cli::serialize(odd)) == odd);

  CHECK_THROWS_AS(gibbs::cli::parse_config("colour=blue\n"), gibbs::InvalidArgument);
  CHECK_THROWS_AS(gibbs::cli::parse_config("seed=1\nseed=2\n"), gibbs::InvalidArgument);
  CHECK_THROWS_AS(gibbs::cli::parse_config("grid=1:0:0.1\n"), gibbs::InvalidArgument);
  CHECK_THROWS_AS(gibbs::cli::parse_config("mu\n"), gibbs::InvalidArgument);
}

TEST_CASE("flags override the config file") {
  const auto path = temp_file("gibbs_cli_test.cfg", "command=classify\nmodel=power:p=3\n");
  CHECK(invoke({"classify", "--config", path.string()}).out.find("local=HardStep") != std::string::npos);
  CHECK(invoke({"classify", "--config", path.string(), "--model", "uniform"}).out.find("local=Gaussian") !=
        std::string::npos);
  CHECK(invoke({"enumerate", "--config", path.string(), "--M", "3"}).code == 2);
  std::filesystem::remove(path);
}
