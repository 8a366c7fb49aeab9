#pragma once

// Exact and statistical checks against the oracles.

#include <cstdint>
#include <optional>
#include <vector>

#include "gibbs/curves.hpp"
#include "gibbs/energy.hpp"
#include "gibbs/ensemble.hpp"
#include "gibbs/oracles.hpp"

namespace gibbs {

// Max |mean - oracle| over grid points outside the open excluded window.
double sup_distance(const EmpiricalCurve& curve, const ShapeOracle& oracle);
double sup_distance(const EmpiricalCurve& curve, const std::vector<double>& oracle_values);

struct EnumeratedProfile {
  std::vector<std::int64_t> nu;  // nu[k-1] = p_k
  std::uint64_t multiplicity = 0;  // M! / prod (k!)^p_k p_k!
};

struct ProfileEnumeration {
  int M = 0;
  std::vector<EnumeratedProfile> profiles;

  std::uint64_t total() const;
};

// All integer-partition profiles of M (1 <= M <= 14), largest parts first.
ProfileEnumeration enumerate_profiles(int M);

// Bell numbers from the Bell triangle.
std::uint64_t bell_number(int M);

// prod alpha_k^p_k / p_k!, and its logarithm.
double log_profile_weight(const Partition& p, const EnergyModel& model, double mu);
double profile_weight(const Partition& p, const EnergyModel& model, double mu);

// |1 + sum_{M<=M_max} Z_M e^{-mu M} - exp(sum alpha_k)|, Z_M from multiplicities.
double check_poissonization(const EnergyModel& model, double mu, int M_max);

// Max relative gap between profile_weight / Z and a product of Poisson pmfs
// over all profiles of mass 1..M_max.
double check_multiplicativity(const EnergyModel& model, double mu, int M_max);

struct PoissonIntervalReport {
  Interval interval;
  double exact_mean = 0.0;  // S_mu(a/mu, b/mu)
  double limit_mean = 0.0;  // e^-C int_a^b e^-t/t dt
  double empirical_mean = 0.0;
  double empirical_var = 0.0;
  double dispersion = 0.0;  // var / mean; 1 when both vanish
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 1.0;
  bool exact_match = false;  // exact mean 0 and every count 0
};

struct PoissonCountReport {
  std::size_t n = 0;
  std::vector<PoissonIntervalReport> intervals;
  double aggregate_mean = 0.0;
  double aggregate_dispersion = 0.0;
};

PoissonCountReport test_poisson_counts(const EnergyModel& model, const SampleBatch& batch, double mu,
                                       const std::vector<Interval>& intervals, double C);

// exp(-A + N ln A) with A = sum_{k<=m} alpha_k, computed in log space.
double log_divergence_bound(const EnergyModel& model, double mu, std::int64_t m_cut, std::int64_t N);
double check_divergence(const EnergyModel& model, double mu, std::int64_t m_cut, std::int64_t N);

// S_mu(kappa x, kappa y) with kappa = 1 / (mu - mu_star), per mu.
std::vector<double> check_zero_shape(const EnergyModel& model, const std::vector<double>& mus, double x, double y,
                                     double mu_star = 0.0);

struct SubsequenceResult {
  int n = 0;
  double kappa_1 = 0.0;  // 3 * 2^(n-1)
  double mu_1 = 0.0;
  double kappa_2 = 0.0;  // 2^n
  double mu_2 = 0.0;
  EmpiricalCurve curve_1;
  EmpiricalCurve curve_2;
};

// Local profiles of the dyadic model along kappa = 3 * 2^(n-1) and kappa = 2^n,
// with mu = -u'(kappa) from the closed form. Curve 2 uses the left-hand block
// curvature for zeta.
std::vector<SubsequenceResult> subsequence_profiles(const std::vector<int>& n_list, std::size_t n_samples,
                                                    std::uint64_t seed, const std::vector<double>& grid,
                                                    std::size_t threads = 0);

}  // namespace gibbs
