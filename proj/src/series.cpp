#include "gibbs/series.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

#include "gibbs/errors.hpp"
#include "gibbs/kernels.hpp"
#include "gibbs/special.hpp"

namespace gibbs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kBlock = 256;
constexpr double kFarProbe = 0x1p62;

struct Summand {
  const EnergyModel& model;
  double mu;
  bool weight_by_k;  // sum k alpha_k instead of alpha_k

  double exponent(double k) const {
    const double e = -mu * k - model.u(k);
    return weight_by_k ? e + std::log(k) : e;
  }
  double slope_of_u(double x) const {  // derivative of u_eff = u - [weight_by_k] ln x
    return weight_by_k ? model.du(x) - 1.0 / x : model.du(x);
  }
};

// delta0 = mu + min u_eff' over k 2^i up to 2^62. Valid as a lower bound on
// the decay rate from k on when u_eff' is monotone there.
double decay_rate(const Summand& s, double k) {
  double m = kInf;
  for (double x = k; x <= kFarProbe; x *= 2.0) m = std::min(m, s.slope_of_u(x));
  m = std::min(m, s.slope_of_u(kFarProbe));
  return s.mu + m;
}

double log_tail(const Summand& s, std::int64_t k) {
  const double kd = static_cast<double>(k);
  const double ek = s.exponent(kd);
  if (ek == -kInf) return -kInf;
  const double delta = decay_rate(s, kd);
  if (!(delta > 0.0)) return kInf;
  // sum_{j >= k} e_j <= e_k / (1 - e^-delta)
  return ek - std::log1p(-std::exp(-delta));
}

SeriesResult run(const Summand& s, double a, double b, const SeriesOptions& opt) {
  SeriesResult res;
  if (!(a <= b) && !(std::isinf(b) && b > 0)) return res;
  const std::int64_t k0 = first_index_at_least(a);
  const std::int64_t k_end = std::isinf(b) ? std::numeric_limits<std::int64_t>::max() : first_index_at_least(b);
  if (k0 >= k_end) return res;

  const double log_rel = std::log(opt.rel_tol);
  std::vector<double> block(kBlock);
  std::int64_t k = k0;
  bool divergence_checked = false;
  for (;;) {
    const std::size_t n = static_cast<std::size_t>(std::min<std::int64_t>(kBlock, k_end - k));
    for (std::size_t i = 0; i < n; ++i) {
      const double e = s.exponent(static_cast<double>(k) + static_cast<double>(i));
      if (std::isnan(e) || e == kInf) {
        throw RangeError("series term is not finite at k=" + std::to_string(k + static_cast<std::int64_t>(i)));
      }
      block[i] = e;
    }
    const std::span<const double> view(block.data(), n);
    const double m = kernels::max_value(view);
    if (m > res.log_scale) {
      if (res.scaled > 0.0) res.scaled *= std::exp(res.log_scale - m);
      res.log_scale = m;
    }
    if (m > -kInf) res.scaled += kernels::sum_exp_shifted(view, res.log_scale);
    k += static_cast<std::int64_t>(n);
    res.terms_used += static_cast<std::int64_t>(n);
    if (k >= k_end) return res;

    // Only worth certifying once the terms are falling.
    if (block[n - 1] < m || m == -kInf) {
      const double lt = log_tail(s, k);
      const double lv = res.log_value();
      if (lt == -kInf || lt <= log_rel + lv || (lv == -kInf && lt < -745.0)) {
        res.log_tail = lt;
        return res;
      }
    }
    if (!divergence_checked && res.terms_used >= opt.divergence_check_terms) {
      divergence_checked = true;
      const double far = s.mu + s.slope_of_u(kFarProbe);
      if (far <= 1e-12 * (1.0 + std::fabs(s.mu))) {
        throw DivergentSeries("series diverges: mu + u'(x) does not stay positive (mu <= mu*)");
      }
    }
    if (res.terms_used >= opt.max_terms) {
      throw NonConvergedTail("no certified truncation point below " + std::to_string(opt.max_terms) + " terms");
    }
  }
}

}  // namespace

double SeriesResult::value() const {
  if (scaled == 0.0) return 0.0;
  return std::exp(std::log(scaled) + log_scale);
}

double SeriesResult::log_value() const {
  if (scaled == 0.0) return -kInf;
  return std::log(scaled) + log_scale;
}

double SeriesResult::tail_bound() const { return std::exp(log_tail); }

std::int64_t first_index_at_least(double t) {
  if (std::isnan(t)) throw InvalidArgument("index threshold is NaN");
  if (t <= 1.0) return 1;
  const double c = std::ceil(t);
  if (c >= 9.2e18) return std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(c);
}

double log_tail_from(const EnergyModel& model, double mu, std::int64_t k) {
  return log_tail(Summand{model, mu, false}, k);
}

SeriesResult sum_S(const EnergyModel& model, double mu, double a, double b, const SeriesOptions& options) {
  if (!(options.rel_tol > 0.0)) throw InvalidArgument("rel_tol must be positive");
  if (std::isnan(a) || std::isnan(b)) throw InvalidArgument("sum_S bounds are NaN");
  if (a >= b) return SeriesResult{};
  return run(Summand{model, mu, false}, a, b, options);
}

SeriesResult sum_S(const EnergyModel& model, double mu, double a, double b, double rel_tol) {
  SeriesOptions o;
  o.rel_tol = rel_tol;
  return sum_S(model, mu, a, b, o);
}

SeriesResult expected_mass(const EnergyModel& model, double mu, double rel_tol) {
  SeriesOptions o;
  o.rel_tol = rel_tol;
  return run(Summand{model, mu, true}, 1.0, kInf, o);
}

SeriesResult log_partition(const EnergyModel& model, double mu, double rel_tol) {
  return sum_S(model, mu, 1.0, kInf, rel_tol);
}

double expected_F(const EnergyModel& model, double mu, const ScalingPlan& plan, double x) {
  if (!(x >= 0.0)) throw InvalidArgument("expected_F requires x >= 0");
  const SeriesResult s = sum_S(model, mu, plan.kappa * x, kInf);
  return std::exp(s.log_value() - plan.log_vertical);
}

double expected_G(const EnergyModel& model, double mu, const ScalingPlan& plan, double x) {
  if (plan.regime != Regime::Supercritical) throw RegimeMismatch("local profiles need a supercritical plan");
  const SeriesResult s = sum_S(model, mu, plan.kappa + plan.zeta * x, kInf);
  return std::exp(s.log_value() - plan.log_vertical);
}

double concentration_ratio(const EnergyModel& model, double mu, double lambda1, double lambda2) {
  if (!(lambda1 < 1.0) || !(lambda2 > 1.0)) throw InvalidArgument("concentration_ratio needs lambda1 < 1 < lambda2");
  const double kappa = solve_kappa(model, mu);
  const SeriesResult inner = sum_S(model, mu, kappa * std::max(lambda1, 0.0), kappa * lambda2);
  const SeriesResult all = sum_S(model, mu, 1.0, kInf);
  return std::exp(inner.log_value() - all.log_value());
}

double poisson_process_mean(double C, double a, double b) {
  if (!(a > 0.0)) throw InvalidArgument("poisson_process_mean requires a > 0");
  if (!(b >= a)) throw InvalidArgument("poisson_process_mean requires b >= a");
  if (a == b) return 0.0;
  const double scale = std::exp(-C);
  if (std::isinf(b)) return scale * special::expint_e1(a);
  auto f = [](double t) { return std::exp(-t) / t; };
  double error = 0.0;
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, 1e-14, &error);
  return scale * integral;
}

}  // namespace gibbs
