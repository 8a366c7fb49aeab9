#pragma once

#include <optional>
#include <string>

#include "gibbs/energy.hpp"
#include "gibbs/regime.hpp"

namespace gibbs {

struct ScalingPlan {
  double mu = 0.0;
  double mu_star = 0.0;
  double kappa = 1.0;
  std::optional<double> kappa_hat;
  double zeta = 1.0;
  // Vertical normalisation V with F = count / V. V = E[M]/kappa, or 1 in the
  // limit-process case. Kept in log form because E[M] routinely exceeds the
  // double range.
  double log_expected_mass = 0.0;
  double log_vertical = 0.0;
  Regime regime = Regime::Supercritical;
  std::optional<LocalProfile> local_profile;
  std::optional<CriticalCase> critical_case;
  std::optional<double> d;
  std::optional<double> C;

  bool process_mode() const { return critical_case == CriticalCase::LimitProcess; }
};

struct PlanOptions {
  std::optional<double> zeta;  // hard-step local scale; default sqrt(kappa)
  double rel_tol = 1e-10;
};

// Largest root of u'(x) = -mu, searched beyond the first dyadic probe X0 from
// which u'' stays positive. Throws NoRoot.
double solve_kappa(const EnergyModel& model, double mu);

// Root of u'(x) - 1/x = -mu above kappa.
double solve_kappa_hat(const EnergyModel& model, double mu);

ScalingPlan make_plan(const EnergyModel& model, const RegimeReport& report, double mu,
                      const PlanOptions& options = {});

// One "key=value" pair per line.
std::string describe(const ScalingPlan& plan);

}  // namespace gibbs
