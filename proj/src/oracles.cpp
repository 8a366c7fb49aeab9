#include "gibbs/oracles.hpp"

#include <cmath>
#include <numbers>

#include "gibbs/errors.hpp"
#include "gibbs/regime.hpp"
#include "gibbs/series.hpp"
#include "gibbs/special.hpp"

namespace gibbs {
namespace {

// sum_{k >= k0} exp(-c k^2 / 2) for k0 >= 0, stopping once terms are negligible.
double half_theta(double k0, double c) {
  double sum = 0.0;
  for (double k = k0;; k += 1.0) {
    const double t = std::exp(-0.5 * c * k * k);
    sum += t;
    if (t < 1e-18 * sum || t == 0.0) break;
  }
  return sum;
}

}  // namespace

double step_shape(double x) { return x <= 1.0 ? 1.0 : 0.0; }

double gamma_shape(double x, double d) {
  if (!(d > 0.0)) throw InvalidArgument("gamma_shape requires d > 0");
  if (!(x >= 0.0)) throw InvalidArgument("gamma_shape requires x >= 0");
  // Gamma(x; d) / Gamma(d + 1) = Q(d, x) / d
  return special::gamma_q(d, x) / d;
}

double gaussian_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double discrete_gaussian_norm(double c) {
  if (!(c > 0.0)) throw InvalidArgument("discrete Gaussian needs c > 0");
  return 1.0 + 2.0 * half_theta(1.0, c);
}

double discrete_gaussian_tail(double x, double c) {
  if (!(c > 0.0)) throw InvalidArgument("discrete Gaussian needs c > 0");
  if (x == -std::numeric_limits<double>::infinity()) return 1.0;
  if (x == std::numeric_limits<double>::infinity()) return 0.0;
  const double norm = discrete_gaussian_norm(c);
  const double k0 = std::ceil(x);
  if (k0 >= 0.0) return half_theta(k0, c) / norm;
  // Upper tail from a negative start: complement of the (small) lower tail.
  return 1.0 - half_theta(-k0 + 1.0, c) / norm;
}

double mixed_counterexample_tail(double x) {
  constexpr double r2 = std::numbers::sqrt2;
  const double weight = r2 / (1.0 + r2);  // mass of h on (0, inf)
  if (x > 0.0) return 2.0 * weight * gaussian_tail(x / r2);
  return weight * (r2 * (gaussian_tail(x) - 0.5) + 1.0);
}

double hard_step(double x) { return x <= 0.0 ? 1.0 : 0.0; }

double ShapeOracle::eval(double x) const {
  switch (kind) {
    case OracleKind::Step:
      return step_shape(x);
    case OracleKind::Gamma:
      return gamma_shape(x, param);
    case OracleKind::Zero:
      return 0.0;
    case OracleKind::Gaussian:
      return gaussian_tail(x);
    case OracleKind::DiscreteGaussian:
      return discrete_gaussian_tail(x, param);
    case OracleKind::HardStep:
      return hard_step(x);
    case OracleKind::MixedCounterexample:
      return mixed_counterexample_tail(x);
    case OracleKind::PoissonProcessLaw:
      if (!(x > 0.0)) return std::numeric_limits<double>::infinity();
      return poisson_process_mean(param, x, std::numeric_limits<double>::infinity());
  }
  return 0.0;
}

std::string ShapeOracle::name() const {
  switch (kind) {
    case OracleKind::Step:
      return "step";
    case OracleKind::Gamma:
      return "gamma(d=" + format_extended(param) + ")";
    case OracleKind::Zero:
      return "zero";
    case OracleKind::Gaussian:
      return "gaussian";
    case OracleKind::DiscreteGaussian:
      return "discrete_gaussian(c=" + format_extended(param) + ")";
    case OracleKind::HardStep:
      return "hard_step";
    case OracleKind::MixedCounterexample:
      return "mixed_counterexample";
    case OracleKind::PoissonProcessLaw:
      return "poisson_process(C=" + format_extended(param) + ")";
  }
  return "?";
}

}  // namespace gibbs
