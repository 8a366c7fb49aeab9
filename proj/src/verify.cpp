#include "gibbs/verify.hpp"

#include <algorithm>
#include <boost/math/distributions/poisson.hpp>
#include <cmath>
#include <limits>

#include "gibbs/errors.hpp"
#include "gibbs/kernels.hpp"
#include "gibbs/regime.hpp"
#include "gibbs/scaling.hpp"
#include "gibbs/series.hpp"
#include "gibbs/special.hpp"

namespace gibbs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool in_window(const EmpiricalCurve& curve, double x) {
  return curve.excluded && x > curve.excluded->first && x < curve.excluded->second;
}

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

void partitions_into(int remaining, int max_part, std::vector<std::int64_t>& nu, int M,
                     std::vector<EnumeratedProfile>& out) {
  if (remaining == 0) {
    std::uint64_t denom = 1;
    for (int k = 1; k <= M; ++k) {
      const auto p = static_cast<int>(nu[static_cast<std::size_t>(k - 1)]);
      for (int i = 0; i < p; ++i) denom *= factorial(k);
      denom *= factorial(p);
    }
    out.push_back({nu, factorial(M) / denom});
    return;
  }
  for (int k = std::min(remaining, max_part); k >= 1; --k) {
    ++nu[static_cast<std::size_t>(k - 1)];
    partitions_into(remaining - k, k, nu, M, out);
    --nu[static_cast<std::size_t>(k - 1)];
  }
}

// log of the count distribution pmf at j with mean lambda
double log_poisson_pmf(double j, double lambda) {
  if (lambda == 0.0) return j == 0.0 ? 0.0 : -kInf;
  return -lambda + j * std::log(lambda) - special::log_gamma(j + 1.0);
}

struct ChiSquare {
  double chi2 = 0.0;
  int dof = 0;
  double p = 1.0;
};

// Histogram of counts against Poisson(lambda); bins merged left to right until
// the expected count reaches 5, with the remainder folded into the last bin.
ChiSquare chi_square(const std::vector<std::int64_t>& counts, double lambda) {
  const double n = static_cast<double>(counts.size());
  std::int64_t top = 0;
  for (auto c : counts) top = std::max(top, c);
  std::vector<double> observed(static_cast<std::size_t>(top) + 1, 0.0);
  for (auto c : counts) observed[static_cast<std::size_t>(c)] += 1.0;

  std::vector<double> bin_obs;
  std::vector<double> bin_exp;
  double acc_obs = 0.0;
  double acc_exp = 0.0;
  double used = 0.0;  // probability mass already assigned
  for (std::int64_t j = 0;; ++j) {
    const double pj = std::exp(log_poisson_pmf(static_cast<double>(j), lambda));
    acc_exp += n * pj;
    used += pj;
    if (static_cast<std::size_t>(j) < observed.size()) acc_obs += observed[static_cast<std::size_t>(j)];
    const double rest = std::max(0.0, 1.0 - used);
    if (acc_exp >= 5.0 && n * rest >= 5.0) {
      bin_obs.push_back(acc_obs);
      bin_exp.push_back(acc_exp);
      acc_obs = acc_exp = 0.0;
      continue;
    }
    if (n * rest < 5.0 && static_cast<std::size_t>(j) + 1 >= observed.size()) {
      // close out: everything above j joins the final bin
      acc_exp += n * rest;
      if (bin_exp.empty() || acc_exp >= 5.0) {
        bin_obs.push_back(acc_obs);
        bin_exp.push_back(acc_exp);
      } else {
        bin_obs.back() += acc_obs;
        bin_exp.back() += acc_exp;
      }
      break;
    }
  }
  ChiSquare r;
  for (std::size_t i = 0; i < bin_obs.size(); ++i) {
    const double diff = bin_obs[i] - bin_exp[i];
    r.chi2 += diff * diff / bin_exp[i];
  }
  r.dof = static_cast<int>(bin_obs.size()) - 1;
  r.p = r.dof > 0 ? special::gamma_q(0.5 * r.dof, 0.5 * r.chi2) : 1.0;
  return r;
}

}  // namespace

double sup_distance(const EmpiricalCurve& curve, const std::vector<double>& oracle_values) {
  if (oracle_values.size() != curve.grid.size() || curve.mean.size() != curve.grid.size()) {
    throw InvalidArgument("sup_distance: curve and oracle sizes differ");
  }
  std::vector<double> a;
  std::vector<double> b;
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    if (in_window(curve, curve.grid[i])) continue;
    a.push_back(curve.mean[i]);
    b.push_back(oracle_values[i]);
  }
  if (a.empty()) throw EmptyGrid("sup_distance: no grid points outside the excluded window");
  return kernels::max_abs_diff(a, b);
}

double sup_distance(const EmpiricalCurve& curve, const ShapeOracle& oracle) {
  if (!oracle.deterministic()) throw InvalidArgument("sup_distance needs a deterministic oracle");
  std::vector<double> values(curve.grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = oracle.eval(curve.grid[i]);
  return sup_distance(curve, values);
}

std::uint64_t ProfileEnumeration::total() const {
  std::uint64_t t = 0;
  for (const auto& p : profiles) t += p.multiplicity;
  return t;
}

ProfileEnumeration enumerate_profiles(int M) {
  if (M < 1 || M > 14) throw InvalidArgument("enumerate_profiles: M must be in 1..14");
  ProfileEnumeration e;
  e.M = M;
  std::vector<std::int64_t> nu(static_cast<std::size_t>(M), 0);
  partitions_into(M, M, nu, M, e.profiles);
  return e;
}

std::uint64_t bell_number(int M) {
  if (M < 0 || M > 25) throw InvalidArgument("bell_number: M must be in 0..25");
  std::vector<std::uint64_t> row{1};
  for (int i = 0; i < M; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

double log_profile_weight(const Partition& p, const EnergyModel& model, double mu) {
  double lw = 0.0;
  for (const auto& [k, c] : p.parts()) {
    const double count = c.convert_to<double>();
    lw += count * log_alpha(model, mu, static_cast<double>(k)) - special::log_gamma(count + 1.0);
  }
  return lw;
}

double profile_weight(const Partition& p, const EnergyModel& model, double mu) {
  return std::exp(log_profile_weight(p, model, mu));
}

double check_poissonization(const EnergyModel& model, double mu, int M_max) {
  if (M_max < 0 || M_max > 14) throw InvalidArgument("check_poissonization: M_max must be in 0..14");
  // Z_M e^{-mu M} = sum over profiles of mult / M! * prod (e^{-beta E_k - mu k})^{p_k},
  // with e^{-beta E_k - mu k} = alpha_k k!.
  double lhs = 1.0;
  for (int M = 1; M <= M_max; ++M) {
    const double log_mfact = special::log_gamma(M + 1.0);
    for (const auto& prof : enumerate_profiles(M).profiles) {
      double lw = std::log(static_cast<double>(prof.multiplicity)) - log_mfact;
      for (std::size_t i = 0; i < prof.nu.size(); ++i) {
        if (prof.nu[i] == 0) continue;
        const double k = static_cast<double>(i + 1);
        lw += static_cast<double>(prof.nu[i]) * (log_alpha(model, mu, k) + special::log_gamma(k + 1.0));
      }
      lhs += std::exp(lw);
    }
  }
  const double rhs = std::exp(log_partition(model, mu, 1e-15).value());
  return std::abs(lhs - rhs);
}

double check_multiplicativity(const EnergyModel& model, double mu, int M_max) {
  if (M_max < 1 || M_max > 14) throw InvalidArgument("check_multiplicativity: M_max must be in 1..14");
  const double log_z = log_partition(model, mu, 1e-15).value();
  const double tail = sum_S(model, mu, M_max + 1.0, kInf, 1e-15).value();
  std::vector<double> lambda(static_cast<std::size_t>(M_max));
  for (int k = 1; k <= M_max; ++k) lambda[static_cast<std::size_t>(k - 1)] = alpha(model, mu, k);

  double worst = 0.0;
  for (int M = 1; M <= M_max; ++M) {
    for (const auto& prof : enumerate_profiles(M).profiles) {
      const Partition p = Partition::from_profile(prof.nu);
      const double exact = std::exp(log_profile_weight(p, model, mu) - log_z);
      double product = std::exp(-tail);
      for (int k = 1; k <= M_max; ++k) {
        const auto idx = static_cast<std::size_t>(k - 1);
        const double pk = idx < prof.nu.size() ? static_cast<double>(prof.nu[idx]) : 0.0;
        product *= boost::math::pdf(boost::math::poisson_distribution<double>(lambda[idx]), pk);
      }
      worst = std::max(worst, std::abs(exact - product) / product);
    }
  }
  return worst;
}

PoissonCountReport test_poisson_counts(const EnergyModel& model, const SampleBatch& batch, double mu,
                                       const std::vector<Interval>& intervals, double C) {
  if (!(mu > 0.0)) throw InvalidArgument("test_poisson_counts: mu must be positive");
  if (batch.partitions.empty()) throw InvalidArgument("test_poisson_counts: empty batch");
  const std::size_t m = intervals.size();
  const std::size_t n = batch.partitions.size();
  std::vector<std::vector<std::int64_t>> counts(m, std::vector<std::int64_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = interval_counts(batch.partitions[i], mu, intervals);
    for (std::size_t j = 0; j < m; ++j) counts[j][i] = row[j].convert_to<std::int64_t>();
  }

  PoissonCountReport report;
  report.n = n;
  const double nd = static_cast<double>(n);
  std::vector<double> aggregate(n, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    PoissonIntervalReport r;
    r.interval = intervals[j];
    r.exact_mean = sum_S(model, mu, intervals[j].a / mu, intervals[j].b / mu).value();
    r.limit_mean = poisson_process_mean(C, intervals[j].a, intervals[j].b);
    double s = 0.0;
    double s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = static_cast<double>(counts[j][i]);
      s += c;
      s2 += c * c;
      aggregate[i] += c;
    }
    r.empirical_mean = s / nd;
    r.empirical_var = n > 1 ? (s2 - s * s / nd) / (nd - 1.0) : 0.0;
    r.dispersion = r.empirical_mean > 0.0 ? r.empirical_var / r.empirical_mean : 1.0;
    if (r.exact_mean == 0.0) {
      r.exact_match = s == 0.0;
      r.p_value = r.exact_match ? 1.0 : 0.0;
    } else {
      const ChiSquare cs = chi_square(counts[j], r.exact_mean);
      r.chi2 = cs.chi2;
      r.dof = cs.dof;
      r.p_value = cs.p;
    }
    report.intervals.push_back(r);
  }
  double s = 0.0;
  double s2 = 0.0;
  for (double c : aggregate) {
    s += c;
    s2 += c * c;
  }
  report.aggregate_mean = s / nd;
  const double var = n > 1 ? (s2 - s * s / nd) / (nd - 1.0) : 0.0;
  report.aggregate_dispersion = report.aggregate_mean > 0.0 ? var / report.aggregate_mean : 1.0;
  return report;
}

double log_divergence_bound(const EnergyModel& model, double mu, std::int64_t m_cut, std::int64_t N) {
  if (m_cut < 0 || N < 0) throw InvalidArgument("check_divergence: m and N must be non-negative");
  std::vector<double> la;
  la.reserve(static_cast<std::size_t>(m_cut));
  for (std::int64_t k = 1; k <= m_cut; ++k) la.push_back(log_alpha(model, mu, static_cast<double>(k)));
  double log_a = -kInf;
  if (!la.empty()) {
    const double top = kernels::max_value(la);
    if (top > -kInf) log_a = top + std::log(kernels::sum_exp_shifted(la, top));
  }
  if (log_a == -kInf) return N == 0 ? 0.0 : -kInf;
  const double a = std::exp(log_a);  // may be +inf, then the bound is 0
  return -a + static_cast<double>(N) * log_a;
}

double check_divergence(const EnergyModel& model, double mu, std::int64_t m_cut, std::int64_t N) {
  return std::exp(log_divergence_bound(model, mu, m_cut, N));
}

std::vector<double> check_zero_shape(const EnergyModel& model, const std::vector<double>& mus, double x, double y,
                                     double mu_star) {
  if (!(x > 0.0) || !(y > x)) throw InvalidArgument("check_zero_shape needs 0 < x < y");
  std::vector<double> out;
  out.reserve(mus.size());
  for (double mu : mus) {
    if (!(mu > mu_star)) throw InvalidArgument("check_zero_shape needs mu > mu_star");
    const double kappa = 1.0 / (mu - mu_star);
    out.push_back(sum_S(model, mu, kappa * x, kappa * y).value());
  }
  return out;
}

std::vector<SubsequenceResult> subsequence_profiles(const std::vector<int>& n_list, std::size_t n_samples,
                                                    std::uint64_t seed, const std::vector<double>& grid,
                                                    std::size_t threads) {
  const EnergyModel model = make_model("dyadic");
  const RegimeReport report = classify(model);
  std::vector<SubsequenceResult> results;
  for (int n : n_list) {
    if (n < 2 || n > 40) throw InvalidArgument("subsequence_profiles: n must be in 2..40");
    SubsequenceResult r;
    r.n = n;
    r.kappa_1 = 3.0 * std::ldexp(1.0, n - 1);
    r.kappa_2 = std::ldexp(1.0, n);
    r.mu_1 = -dyadic::du(r.kappa_1);
    r.mu_2 = -dyadic::du(r.kappa_2);

    auto curve = [&](double kappa, double mu, double zeta) {
      PlanOptions opts;
      opts.zeta = zeta;
      ScalingPlan plan = make_plan(model, report, mu, opts);
      plan.kappa = kappa;
      plan.log_vertical = plan.log_expected_mass - std::log(kappa);
      CurveRequest req;
      req.kind = CurveKind::G;
      req.grid = grid;
      req.n = n_samples;
      req.seed = seed;
      req.k_max = truncation_K(model, mu);
      req.threads = threads;
      return estimate_curve(model, plan, req);
    };
    // u'' is 2^-(n+1) on (2^n, 2^(n+1)] and 2^-n on (2^(n-1), 2^n].
    r.curve_1 = curve(r.kappa_1, r.mu_1, std::sqrt(std::ldexp(1.0, n + 1)));
    r.curve_2 = curve(r.kappa_2, r.mu_2, std::sqrt(std::ldexp(1.0, n)));
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace gibbs
