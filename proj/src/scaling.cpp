#include "gibbs/scaling.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

#include "gibbs/errors.hpp"
#include "gibbs/series.hpp"

namespace gibbs {
namespace {

constexpr int kMaxProbeExponent = 60;

// Smallest 2^j (j >= 0) with u'' > 0 there and at the next three probes.
double convex_start(const EnergyModel& model) {
  for (int j = 0; j <= kMaxProbeExponent; ++j) {
    bool ok = true;
    for (int i = 0; i < 4 && ok; ++i) ok = model.ddu(std::ldexp(1.0, j + i)) > 0.0;
    if (ok) return std::ldexp(1.0, j);
  }
  throw NoRoot("u'' is not eventually positive on the dyadic probes");
}

double bracket_and_solve(const std::function<double(double)>& f, double start, const char* what) {
  double lo = start;
  double hi = start;
  double flo = f(lo);
  if (std::isnan(flo)) throw NoRoot(std::string(what) + ": model not finite at the search start");
  if (flo >= 0.0) {
    if (flo == 0.0) return lo;
    // Root below the start point: walk down.
    double fhi = flo;
    while (flo > 0.0) {
      hi = lo;
      fhi = flo;
      lo *= 0.5;
      if (lo < 0x1p-40) throw NoRoot(std::string(what) + ": no root above 0");
      flo = f(lo);
      if (std::isnan(flo)) throw NoRoot(std::string(what) + ": model not finite while bracketing");
    }
    if (flo == 0.0) return lo;
    (void)fhi;
  } else {
    double fhi = flo;
    while (fhi < 0.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > std::ldexp(1.0, kMaxProbeExponent)) {
        throw NoRoot(std::string(what) + ": no root below 2^60 (mu <= mu*?)");
      }
      fhi = f(hi);
      if (std::isnan(fhi)) throw NoRoot(std::string(what) + ": model not finite while bracketing");
    }
    if (fhi == 0.0) return hi;
  }
  std::uintmax_t iterations = 400;
  const auto r = boost::math::tools::toms748_solve(
      f, lo, hi, boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 1),
      iterations);
  return std::fabs(f(r.first)) <= std::fabs(f(r.second)) ? r.first : r.second;
}

}  // namespace

double solve_kappa(const EnergyModel& model, double mu) {
  const double x0 = convex_start(model);
  const auto& du = model.du;
  return bracket_and_solve([&](double x) { return du(x) + mu; }, x0, "solve_kappa");
}

double solve_kappa_hat(const EnergyModel& model, double mu) {
  const double kappa = solve_kappa(model, mu);
  const auto& du = model.du;
  return bracket_and_solve([&](double x) { return du(x) - 1.0 / x + mu; }, kappa, "solve_kappa_hat");
}

ScalingPlan make_plan(const EnergyModel& model, const RegimeReport& report, double mu,
                      const PlanOptions& options) {
  ScalingPlan plan;
  plan.mu = mu;
  plan.mu_star = report.mu_star;
  plan.regime = report.regime;
  switch (report.regime) {
    case Regime::SubcriticalA:
    case Regime::SubcriticalB:
      throw RegimeMismatch("no scaling plan exists in the " + std::string(regime_name(report.regime)) +
                           " regime");
    case Regime::Supercritical: {
      if (!(mu > report.mu_star)) throw InvalidArgument("mu must exceed mu* for a scaling plan");
      plan.kappa = solve_kappa(model, mu);
      try {
        plan.kappa_hat = solve_kappa_hat(model, mu);
      } catch (const NoRoot&) {
        plan.kappa_hat.reset();
      }
      plan.local_profile = report.local_profile;
      const LocalProfileKind kind = report.local_profile ? report.local_profile->kind : LocalProfileKind::Gaussian;
      switch (kind) {
        case LocalProfileKind::Gaussian:
          plan.zeta = 1.0 / std::sqrt(model.ddu(plan.kappa));
          break;
        case LocalProfileKind::DiscreteGaussian:
          plan.zeta = 1.0;
          break;
        case LocalProfileKind::HardStep:
          plan.zeta = options.zeta ? *options.zeta : std::sqrt(plan.kappa);
          break;
      }
      if (options.zeta && kind != LocalProfileKind::HardStep) plan.zeta = *options.zeta;
      if (!(plan.zeta > 0.0) || !std::isfinite(plan.zeta)) throw RangeError("local scale zeta is not positive");
      break;
    }
    case Regime::Critical: {
      if (!report.critical) throw RegimeMismatch("critical report lacks its decomposition");
      if (!(mu > report.mu_star)) throw InvalidArgument("mu must exceed mu* in the critical regime");
      plan.kappa = 1.0 / (mu - report.mu_star);
      plan.zeta = 1.0;
      plan.critical_case = critical_case(*report.critical);
      plan.d = report.critical->d;
      plan.C = report.critical->C;
      break;
    }
  }
  plan.log_expected_mass = expected_mass(model, mu, options.rel_tol).log_value();
  plan.log_vertical = plan.process_mode() ? 0.0 : plan.log_expected_mass - std::log(plan.kappa);
  return plan;
}

std::string describe(const ScalingPlan& p) {
  std::string out;
  auto kv = [&](const char* k, const std::string& v) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  };
  kv("regime", std::string(regime_name(p.regime)));
  kv("mu", format_extended(p.mu));
  kv("mu_star", format_extended(p.mu_star));
  kv("kappa", format_extended(p.kappa));
  if (p.kappa_hat) kv("kappa_hat", format_extended(*p.kappa_hat));
  kv("zeta", format_extended(p.zeta));
  kv("log_expected_mass", format_extended(p.log_expected_mass));
  kv("log_vertical", format_extended(p.log_vertical));
  if (p.local_profile) kv("local_profile", std::string(local_profile_name(p.local_profile->kind)));
  if (p.critical_case) kv("critical_case", std::string(critical_case_name(*p.critical_case)));
  if (p.d) kv("d", format_extended(*p.d));
  if (p.C) kv("C", format_extended(*p.C));
  return out;
}

}  // namespace gibbs
