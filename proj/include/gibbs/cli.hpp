#pragma once

// Command-line front end: classify, simulate, curve, local, verify, enumerate.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gibbs::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kNumericError = 3 };

// Flat key=value configuration. Everything a run needs; flags override a file.
struct RunConfig {
  std::string command;
  std::string model;
  std::optional<double> mu;
  std::vector<double> mu_list;
  std::uint64_t seed = 0;
  std::size_t n_samples = 200;
  std::string grid;  // empty: the command default
  std::optional<std::pair<double, double>> exclude;
  double eps_tail = 1e-9;
  double rel_tol = 1e-10;
  std::string output;
  std::string oracle = "auto";
  std::optional<double> zeta;
  int M = 0;

  bool operator==(const RunConfig&) const = default;
};

// Lines of key=value; blank lines and '#' comments are skipped. Unknown or
// repeated keys are rejected.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
std::string serialize(const RunConfig& config);

// Applies one key=value pair to config; throws InvalidArgument.
void set_key(RunConfig& config, std::string_view key, std::string_view value);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace gibbs::cli
