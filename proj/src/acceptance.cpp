#include "gibbs/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "gibbs/curves.hpp"
#include "gibbs/ensemble.hpp"
#include "gibbs/errors.hpp"
#include "gibbs/oracles.hpp"
#include "gibbs/regime.hpp"
#include "gibbs/scaling.hpp"
#include "gibbs/series.hpp"
#include "gibbs/verify.hpp"

namespace gibbs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) { return format_double(v); }

CheckResult make_result(std::string id, bool pass, double statistic, double threshold, std::string detail) {
  return {std::move(id), pass, statistic, threshold, std::move(detail)};
}

EmpiricalCurve run_curve(const EnergyModel& model, const ScalingPlan& plan, CurveKind kind,
                         std::vector<double> grid, std::size_t n, std::uint64_t seed, std::size_t threads) {
  CurveRequest req;
  req.kind = kind;
  req.grid = std::move(grid);
  req.n = n;
  req.seed = seed;
  req.k_max = truncation_K(model, plan.mu);
  req.threads = threads;
  return estimate_curve(model, plan, req);
}

CheckResult check_enumeration() {
  int mismatches = 0;
  std::string detail;
  for (int M = 1; M <= 12; ++M) {
    const auto total = enumerate_profiles(M).total();
    if (total != bell_number(M)) {
      ++mismatches;
      detail += "M=" + std::to_string(M) + " total=" + std::to_string(total) + " ";
    }
  }
  return make_result("exact_enumeration", mismatches == 0, mismatches, 0, detail.empty() ? "Bell(1..12) matched" : detail);
}

CheckResult check_poissonization_identity() {
  const EnergyModel uniform = make_model("uniform");
  const double residual = check_poissonization(uniform, std::log(4.0), 12);
  double worst_closed = 0.0;
  for (double mu : {0.0, std::log(2.0)}) {
    const double closed = std::expm1(std::exp(-mu));
    worst_closed = std::max(worst_closed, std::abs(log_partition(uniform, mu).value() - closed));
  }
  const bool pass = residual < 1e-8 && worst_closed < 1e-9;
  return make_result("poissonization", pass, residual, 1e-8, "closed-form log Z gap " + fmt(worst_closed) + " (< 1e-9)");
}

CheckResult check_product_form() {
  const double worst = check_multiplicativity(make_model("uniform"), std::log(4.0), 6);
  return make_result("multiplicativity", worst < 1e-12, worst, 1e-12, "max relative gap over profiles with M <= 6");
}

CheckResult check_step_limit(const AcceptanceManifest& m, std::size_t threads) {
  const EnergyModel model = make_model("uniform");
  const RegimeReport report = classify(model);
  std::vector<double> dist;
  for (double kappa : m.step_kappas) {
    const ScalingPlan plan = make_plan(model, report, -std::log(kappa));
    EmpiricalCurve c = run_curve(model, plan, CurveKind::F, parse_grid("0:2:0.05"), m.step_n, m.seed, threads);
    c.excluded = {0.9, 1.1};
    dist.push_back(sup_distance(c, ShapeOracle{OracleKind::Step, 0.0}));
  }
  bool decreasing = true;
  std::string detail = "sup distances";
  for (std::size_t i = 0; i < dist.size(); ++i) {
    detail += " " + fmt(dist[i]);
    if (i > 0 && !(dist[i] < dist[i - 1])) decreasing = false;
  }
  if (!decreasing) detail += " (not decreasing)";
  return make_result("step_limit", decreasing && dist.back() < m.step_tol, dist.back(), m.step_tol, detail);
}

CheckResult check_concentration() {
  const EnergyModel model = make_model("uniform");
  const double mu = -std::log(1e4);
  const double ratio = concentration_ratio(model, mu, 0.9, 1.1);
  const double kappa = solve_kappa(model, mu);
  const double mass_ratio =
      std::exp(std::log(kappa) + log_partition(model, mu).log_value() - expected_mass(model, mu).log_value());
  const bool pass = ratio >= 0.999 && mass_ratio >= 0.98 && mass_ratio <= 1.02;
  return make_result("concentration", pass, ratio, 0.999, "kappa*S/E[M] = " + fmt(mass_ratio) + " (in [0.98, 1.02])");
}

CheckResult check_incomplete_gamma(const AcceptanceManifest& m, std::size_t threads) {
  const EnergyModel model = make_model("critical:mustar=0,d=2,v=const:0");
  const RegimeReport report = classify(model);
  const ScalingPlan plan = make_plan(model, report, m.gamma_mu);
  const EmpiricalCurve c = run_curve(model, plan, CurveKind::F, parse_grid("0.1:6:0.1"), m.gamma_n, m.seed, threads);
  const double dist = sup_distance(c, ShapeOracle{OracleKind::Gamma, 2.0});
  const double mu = 1e-3;
  const double mass = std::exp(expected_mass(model, mu).log_value() + 3.0 * std::log(mu) - std::log(2.0));
  const bool pass = dist < m.gamma_tol && mass >= 0.98 && mass <= 1.02;
  return make_result("incomplete_gamma", pass, dist, m.gamma_tol, "E[M] mu^3 / Gamma(3) = " + fmt(mass) + " (in [0.98, 1.02])");
}

CheckResult check_limit_process(const AcceptanceManifest& m, std::size_t threads) {
  const EnergyModel model = make_model("critical:mustar=0,d=0,v=const:0");
  const double mu = m.process_mu;
  const SampleBatch batch = sample_batch(model, mu, truncation_K(model, mu), m.process_n, m.seed, threads);
  const std::vector<Interval> intervals{{0.5, 1.0}, {1.0, 2.0}, {2.0, 4.0}};
  const PoissonCountReport r = test_poisson_counts(model, batch, mu, intervals, 0.0);

  bool pass = true;
  double worst_z = 0.0;
  double min_p = 1.0;
  std::ostringstream detail;
  for (const auto& iv : r.intervals) {
    const double sd = std::sqrt(iv.exact_mean / static_cast<double>(r.n));
    const double z = sd > 0.0 ? std::abs(iv.empirical_mean - iv.exact_mean) / sd : 0.0;
    const double rel = std::abs(iv.exact_mean - iv.limit_mean) / iv.limit_mean;
    worst_z = std::max(worst_z, z);
    min_p = std::min(min_p, iv.p_value);
    if (z > 3.0 || rel > 0.05 || iv.p_value < 0.01) pass = false;
    detail << "[" << fmt(iv.interval.a) << "," << fmt(iv.interval.b) << ") mean=" << fmt(iv.empirical_mean)
           << " exact=" << fmt(iv.exact_mean) << " limit=" << fmt(iv.limit_mean) << " z=" << fmt(z)
           << " p=" << fmt(iv.p_value) << "; ";
  }
  if (r.aggregate_dispersion < 0.9 || r.aggregate_dispersion > 1.1) pass = false;
  detail << "dispersion=" << fmt(r.aggregate_dispersion);
  return make_result("limit_process", pass, min_p, 0.01, detail.str());
}

CheckResult check_gaussian_local(const AcceptanceManifest& m, std::size_t threads) {
  const EnergyModel model = make_model("power:p=1.5");
  const ScalingPlan plan = make_plan(model, classify(model), m.gaussian_mu);
  const EmpiricalCurve c = run_curve(model, plan, CurveKind::G, parse_grid("-3:3:0.1"), m.gaussian_n, m.seed, threads);
  const double dist = sup_distance(c, ShapeOracle{OracleKind::Gaussian, 0.0});
  return make_result("gaussian_local", dist < m.gaussian_tol, dist, m.gaussian_tol,
                     "kappa=" + fmt(plan.kappa) + " zeta=" + fmt(plan.zeta));
}

CheckResult check_discrete_gaussian(const AcceptanceManifest& m, std::size_t threads) {
  const EnergyModel model = make_model("power:p=2,a=0.5");
  const RegimeReport report = classify(model);
  const ScalingPlan plan = make_plan(model, report, m.discrete_mu);
  const double c_param = report.local_profile ? report.local_profile->c : 1.0;
  const EmpiricalCurve c = run_curve(model, plan, CurveKind::G, parse_grid("-2:3:1"), m.discrete_n, m.seed, threads);
  const double dist = sup_distance(c, ShapeOracle{OracleKind::DiscreteGaussian, c_param});
  return make_result("discrete_gaussian_local", dist < m.discrete_tol, dist, m.discrete_tol,
                     "kappa=" + fmt(plan.kappa) + " c=" + fmt(c_param));
}

CheckResult check_hard_step(const AcceptanceManifest& m, std::size_t threads) {
  const EnergyModel model = make_model("power:p=3,a=0.2777777777777778");
  const ScalingPlan plan = make_plan(model, classify(model), m.hard_mu);
  const SampleBatch batch =
      sample_batch(model, m.hard_mu, truncation_K(model, m.hard_mu), m.hard_n, m.seed, threads);

  Count far(0);
  Count all(0);
  const auto grid = parse_grid("-3:3:0.1");
  EmpiricalCurve c;
  c.grid = grid;
  c.n = batch.partitions.size();
  c.mean.assign(grid.size(), 0.0);
  c.sd.assign(grid.size(), 0.0);
  c.excluded = {-0.2, 0.2};
  for (const auto& p : batch.partitions) {
    for (const auto& [k, count] : p.parts()) {
      all += count;
      if (std::abs(static_cast<double>(k) - plan.kappa) > 2.0) far += count;
    }
    for (std::size_t i = 0; i < grid.size(); ++i) c.mean[i] += local_G(p, plan, grid[i]);
  }
  for (auto& v : c.mean) v /= static_cast<double>(c.n);
  const double fraction = all > 0 ? Count(far / all).convert_to<double>() : 0.0;
  const double dist = sup_distance(c, ShapeOracle{OracleKind::HardStep, 0.0});
  const bool pass = fraction < 0.01 && dist < m.hard_tol;
  return make_result("hard_step", pass, dist, m.hard_tol,
                     "kappa=" + fmt(plan.kappa) + " u''(kappa)=" + fmt(model.ddu(plan.kappa)) +
                         " far fraction=" + fmt(fraction) + " (< 0.01)");
}

CheckResult check_counterexample(const AcceptanceManifest& m, std::size_t threads) {
  const auto grid = parse_grid("-3:3:0.1");
  const auto r = subsequence_profiles({m.dyadic_n}, m.dyadic_samples, m.seed, grid, threads).front();
  const double d1 = sup_distance(r.curve_1, ShapeOracle{OracleKind::Gaussian, 0.0});
  const double d2 = sup_distance(r.curve_2, ShapeOracle{OracleKind::MixedCounterexample, 0.0});
  std::size_t near = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs(grid[i] - 1.2) < std::abs(grid[near] - 1.2)) near = i;
  }
  const double gap = std::abs(r.curve_2.mean[near] - gaussian_tail(grid[near]));
  const bool pass = d1 < m.dyadic_tol && d2 < m.dyadic_tol && gap >= m.dyadic_gap;
  return make_result("counterexample", pass, std::max(d1, d2), m.dyadic_tol,
                     "seq1 vs gaussian " + fmt(d1) + ", seq2 vs mixed " + fmt(d2) + ", seq2 gap from gaussian at x=" +
                         fmt(grid[near]) + " is " + fmt(gap) + " (>= " + fmt(m.dyadic_gap) + ")");
}

CheckResult check_no_shape() {
  const double bound = check_divergence(make_model("expr:\"-x*ln(x)^2\""), 0.0, 50, 10);
  const std::vector<double> mus{0.1, 0.01, 0.001};
  auto strictly_decreasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (!(v[i] < v[i - 1])) return false;
    }
    return true;
  };
  const auto neg_d = check_zero_shape(make_model("critical:mustar=0,d=-0.5,v=const:0"), mus, 1.0, 2.0);
  const auto surrogate = check_zero_shape(make_model("critical:mustar=0,d=0,v=logpow:c=1,q=0.5"), mus, 1.0, 2.0);
  const bool pass = bound < 1e-10 && strictly_decreasing(neg_d) && strictly_decreasing(surrogate);
  std::string detail = "d=-0.5:";
  for (double v : neg_d) detail += " " + fmt(v);
  detail += "; v->+inf:";
  for (double v : surrogate) detail += " " + fmt(v);
  return make_result("no_shape", pass, bound, 1e-10, detail);
}

CheckResult check_special_functions() {
  double worst = 0.0;
  for (double x : {0.1, 1.0, 5.0}) worst = std::max(worst, std::abs(gamma_shape(x, 1.0) - std::exp(-x)));
  const double tail_err = std::abs(gaussian_tail(1.96) - 0.0249979);
  const double norm_err = std::abs(discrete_gaussian_norm(2.0) - 1.7726372);
  const bool pass = worst < 1e-12 && tail_err <= 1e-6 && norm_err <= 1e-6;
  return make_result("special_functions", pass, worst, 1e-12,
                     "gaussian_tail(1.96) err " + fmt(tail_err) + ", M_2 err " + fmt(norm_err));
}

std::string default_curve_csv(std::size_t threads) {
  const EnergyModel model = make_model("uniform");
  const ScalingPlan plan = make_plan(model, classify(model), -5.3);
  EmpiricalCurve c = run_curve(model, plan, CurveKind::F, parse_grid("0:2:0.05"), 200, 7, threads);
  std::vector<double> oracle;
  for (double x : c.grid) oracle.push_back(step_shape(x));
  std::ostringstream out;
  write_curve_csv(out, c, oracle, {"model=" + model.spec});
  return out.str();
}

CheckResult check_reproducibility(const AcceptanceOptions& options) {
  const auto runner = options.curve_runner ? options.curve_runner : default_curve_csv;
  const std::string reference = runner(1);
  int differing = 0;
  for (std::size_t threads : {1, 4, 4}) {
    if (runner(threads) != reference) ++differing;
  }
  return make_result("reproducibility", differing == 0 && !reference.empty(), differing, 0,
                     "repeated curve runs with 1 and 4 threads");
}

template <typename F>
CheckResult guarded(const std::string& id, double threshold, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return make_result(id, false, kInf, threshold, std::string("error: ") + e.what());
  }
}

}  // namespace

std::vector<CheckResult> run_acceptance(const AcceptanceOptions& options) {
  const auto& m = options.manifest;
  const std::size_t t = options.threads;
  std::vector<CheckResult> out;
  out.push_back(guarded("exact_enumeration", 0, [] { return check_enumeration(); }));
  out.push_back(guarded("poissonization", 1e-8, [] { return check_poissonization_identity(); }));
  out.push_back(guarded("multiplicativity", 1e-12, [] { return check_product_form(); }));
  out.push_back(guarded("step_limit", m.step_tol, [&] { return check_step_limit(m, t); }));
  out.push_back(guarded("concentration", 0.999, [] { return check_concentration(); }));
  out.push_back(guarded("incomplete_gamma", m.gamma_tol, [&] { return check_incomplete_gamma(m, t); }));
  out.push_back(guarded("limit_process", 0.01, [&] { return check_limit_process(m, t); }));
  out.push_back(guarded("gaussian_local", m.gaussian_tol, [&] { return check_gaussian_local(m, t); }));
  out.push_back(guarded("discrete_gaussian_local", m.discrete_tol, [&] { return check_discrete_gaussian(m, t); }));
  out.push_back(guarded("hard_step", m.hard_tol, [&] { return check_hard_step(m, t); }));
  out.push_back(guarded("counterexample", m.dyadic_tol, [&] { return check_counterexample(m, t); }));
  out.push_back(guarded("no_shape", 1e-10, [] { return check_no_shape(); }));
  out.push_back(guarded("special_functions", 1e-12, [] { return check_special_functions(); }));
  out.push_back(guarded("reproducibility", 0, [&] { return check_reproducibility(options); }));
  return out;
}

std::string report_line(const CheckResult& r) {
  return r.id + "," + (r.pass ? "pass" : "fail") + "," + format_double(r.statistic) + "," + format_double(r.threshold);
}

void write_report(std::ostream& out, const std::vector<CheckResult>& results) {
  for (const auto& r : results) out << report_line(r) << '\n';
}

}  // namespace gibbs
