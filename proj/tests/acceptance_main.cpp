#include <cstdlib>
#include <iostream>
#include <sstream>

#include "gibbs/acceptance.hpp"
#include "gibbs/cli.hpp"

// Runs the acceptance manifest. The reproducibility check drives the real
// command-line entry point with different thread budgets.
int main() {
  gibbs::AcceptanceOptions options;
  options.curve_runner = [](std::size_t threads) {
    ::setenv("GIBBS_SHAPES_THREADS", std::to_string(threads).c_str(), 1);
    std::ostringstream out;
    std::ostringstream err;
    const int code = gibbs::cli::run({"curve", "--model", "uniform", "--mu", "-5.3", "--oracle", "auto", "--grid",
                                      "0:2:0.05", "--exclude", "0.9,1.1", "--n", "200", "--seed", "7"},
                                     out, err);
    ::unsetenv("GIBBS_SHAPES_THREADS");
    return code == 0 ? out.str() : std::string();
  };

  const auto results = gibbs::run_acceptance(options);
  bool all = true;
  for (const auto& r : results) {
    std::cout << gibbs::report_line(r) << '\n';
    if (!r.pass) all = false;
  }
  for (const auto& r : results) std::cerr << "# " << r.id << ": " << r.detail << '\n';
  return all ? 0 : 1;
}
