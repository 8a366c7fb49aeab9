#pragma once

// Limit shapes F and local profiles G.

#include <string>

namespace gibbs {

enum class OracleKind {
  Step,
  Gamma,
  Zero,
  Gaussian,
  DiscreteGaussian,
  HardStep,
  MixedCounterexample,
  PoissonProcessLaw
};

struct ShapeOracle {
  OracleKind kind = OracleKind::Step;
  double param = 0.0;  // d for Gamma, c for DiscreteGaussian, C for PoissonProcessLaw

  // PoissonProcessLaw evaluates the expected count of points in [x, inf).
  double eval(double x) const;
  bool deterministic() const { return kind != OracleKind::PoissonProcessLaw; }
  std::string name() const;
};

double step_shape(double x);

// Gamma(x; d) / Gamma(d + 1).
double gamma_shape(double x, double d);

// Upper tail of the standard normal.
double gaussian_tail(double x);

// M_c = sum over integers of exp(-c k^2 / 2).
double discrete_gaussian_norm(double c);

// (1 / M_c) sum_{k >= x} exp(-c k^2 / 2).
double discrete_gaussian_tail(double x, double c);

// Tail of h(t) = exp(-t^2/4) for t > 0, exp(-t^2/2) for t <= 0, normalised.
double mixed_counterexample_tail(double x);

// 1 for x <= 0, else 0.
double hard_step(double x);

}  // namespace gibbs
