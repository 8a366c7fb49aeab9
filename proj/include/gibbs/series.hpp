#pragma once

// Certified sums of Poisson parameters alpha_k = exp(-mu k - u(k)).

#include <cstdint>
#include <limits>

#include "gibbs/energy.hpp"
#include "gibbs/scaling.hpp"

namespace gibbs {

// value = scaled * exp(log_scale). Either factor alone may be far outside the
// double range; use log_value() when the sum itself may overflow.
struct SeriesResult {
  double scaled = 0.0;
  double log_scale = -std::numeric_limits<double>::infinity();
  std::int64_t terms_used = 0;
  double log_tail = -std::numeric_limits<double>::infinity();  // log of the tail bound

  double value() const;
  double log_value() const;
  double tail_bound() const;
};

struct SeriesOptions {
  double rel_tol = 1e-10;
  std::int64_t divergence_check_terms = 1'000'000;
  std::int64_t max_terms = 1'000'000'000;
};

// S(a, b) = sum over integers a <= k < b of alpha_k; b may be +inf.
SeriesResult sum_S(const EnergyModel& model, double mu, double a, double b, double rel_tol = 1e-10);
SeriesResult sum_S(const EnergyModel& model, double mu, double a, double b, const SeriesOptions& options);

// E[M] = sum k alpha_k.
SeriesResult expected_mass(const EnergyModel& model, double mu, double rel_tol = 1e-10);

// ln Z = sum alpha_k.
SeriesResult log_partition(const EnergyModel& model, double mu, double rel_tol = 1e-10);

// E F(x) = S(kappa x, inf) / V.
double expected_F(const EnergyModel& model, double mu, const ScalingPlan& plan, double x);

// E G(x) = S(kappa + zeta x, inf) / V.
double expected_G(const EnergyModel& model, double mu, const ScalingPlan& plan, double x);

// S(kappa l1, kappa l2) / S(1, inf) with kappa from solve_kappa.
double concentration_ratio(const EnergyModel& model, double mu, double lambda1, double lambda2);

// e^-C int_a^b e^-t / t dt.
double poisson_process_mean(double C, double a, double b);

// Smallest integer k >= max(1, t), saturating at INT64_MAX.
std::int64_t first_index_at_least(double t);

// Upper bound on log sum_{j >= k} alpha_j from the geometric first-difference
// argument; +inf when no positive decay rate is available from k on.
double log_tail_from(const EnergyModel& model, double mu, std::int64_t k);

}  // namespace gibbs
