#pragma once

// The acceptance suite: fixed sizes, seeds and tolerances, one result per check.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace gibbs {

struct AcceptanceManifest {
  std::string version = "1";
  std::uint64_t seed = 20240607;

  std::vector<double> step_kappas{50.0, 200.0, 800.0};
  std::size_t step_n = 200;
  double step_tol = 0.05;

  double gamma_mu = 0.02;
  std::size_t gamma_n = 400;
  double gamma_tol = 0.05;

  double process_mu = 0.01;
  std::size_t process_n = 2000;

  double gaussian_mu = -150.0;  // kappa = 1e4 for u = x^{3/2}
  std::size_t gaussian_n = 400;
  double gaussian_tol = 0.05;

  double discrete_mu = -40.0;
  std::size_t discrete_n = 1000;
  double discrete_tol = 0.04;

  double hard_mu = -750.0;  // kappa = 30 for u = (5/18) x^3
  std::size_t hard_n = 500;
  double hard_tol = 0.05;

  int dyadic_n = 12;
  std::size_t dyadic_samples = 400;
  double dyadic_tol = 0.07;
  double dyadic_gap = 0.03;
};

struct CheckResult {
  std::string id;
  bool pass = false;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct AcceptanceOptions {
  AcceptanceManifest manifest;
  std::size_t threads = 0;
  // Produces the CSV of one fixed `curve` run with the given thread count.
  // Defaults to an in-process equivalent of the command-line tool.
  std::function<std::string(std::size_t threads)> curve_runner;
};

std::vector<CheckResult> run_acceptance(const AcceptanceOptions& options = {});

// "check_id,status,statistic,threshold"
std::string report_line(const CheckResult& r);
void write_report(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace gibbs
