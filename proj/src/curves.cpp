#include "gibbs/curves.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "gibbs/ensemble.hpp"
#include "gibbs/errors.hpp"
#include "gibbs/kernels.hpp"
#include "gibbs/parallel.hpp"

namespace gibbs {

EmpiricalCurve estimate_curve(const EnergyModel& model, const ScalingPlan& plan, const CurveRequest& req) {
  if (req.grid.empty()) throw EmptyGrid("curve grid is empty");
  if (req.n == 0) throw InvalidArgument("curve needs at least one sample");
  if (req.kind == CurveKind::G && plan.regime != Regime::Supercritical) {
    throw RegimeMismatch("local profiles need a supercritical plan");
  }
  if (req.kind == CurveKind::F && plan.regime != Regime::Supercritical && plan.regime != Regime::Critical) {
    throw RegimeMismatch("limit shapes need a supercritical or critical plan");
  }
  const std::size_t g = req.grid.size();
  std::vector<double> thresholds(g);
  for (std::size_t j = 0; j < g; ++j) {
    thresholds[j] = req.kind == CurveKind::F ? plan.kappa * req.grid[j] : plan.kappa + plan.zeta * req.grid[j];
  }

  const AlphaTable table(model, plan.mu, req.k_max);
  std::vector<Count> counts(req.n * g);
  parallel_for(
      req.n,
      [&](std::size_t i) {
        auto rng = sample_stream(req.seed, i);
        const Partition p = table.sample(rng);
        for (std::size_t j = 0; j < g; ++j) counts[i * g + j] = p.count_at_least(thresholds[j]);
      },
      req.threads);

  // Reduction in index order: exact mean count, then double deviations.
  const Count scale = (req.kind == CurveKind::F && plan.process_mode()) ? Count(1) : exp_count(-plan.log_vertical);
  std::vector<Count> mean_count(g, Count(0));
  for (std::size_t i = 0; i < req.n; ++i) {
    for (std::size_t j = 0; j < g; ++j) mean_count[j] += counts[i * g + j];
  }
  for (auto& m : mean_count) m /= static_cast<double>(req.n);

  std::vector<double> sum(g, 0.0);
  std::vector<double> sum_sq(g, 0.0);
  std::vector<double> row(g);
  for (std::size_t i = 0; i < req.n; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      row[j] = Count((counts[i * g + j] - mean_count[j]) * scale).convert_to<double>();
    }
    kernels::accumulate_moments(sum, sum_sq, row);
  }

  EmpiricalCurve curve;
  curve.grid = req.grid;
  curve.n = req.n;
  curve.mean.resize(g);
  curve.sd.resize(g);
  const double n = static_cast<double>(req.n);
  for (std::size_t j = 0; j < g; ++j) {
    curve.mean[j] = Count(mean_count[j] * scale).convert_to<double>() + sum[j] / n;
    const double var = req.n > 1 ? (sum_sq[j] - sum[j] * sum[j] / n) / (n - 1.0) : 0.0;
    curve.sd[j] = std::sqrt(std::max(var, 0.0));
  }
  return curve;
}

std::vector<double> parse_grid(std::string_view spec) {
  double v[3] = {0, 0, 0};
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t colon = i < 2 ? spec.find(':', start) : spec.size();
    if (colon == std::string_view::npos) throw InvalidArgument("grid must be 'a:b:step'");
    const std::string_view part = spec.substr(start, colon - start);
    const char* first = part.data();
    if (!part.empty() && part.front() == '+') ++first;
    const auto [end, ec] = std::from_chars(first, part.data() + part.size(), v[i]);
    if (ec != std::errc() || end != part.data() + part.size() || part.empty()) {
      throw InvalidArgument("grid: malformed number '" + std::string(part) + "'");
    }
    start = colon + 1;
  }
  const double a = v[0];
  const double b = v[1];
  const double step = v[2];
  if (!(step > 0.0)) throw InvalidArgument("grid step must be positive");
  if (!(b >= a)) throw InvalidArgument("grid needs a <= b");
  const double span = (b - a) / step;
  if (span > 1e7) throw InvalidArgument("grid has too many points");
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = a + static_cast<double>(i) * step;
  return grid;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_curve_csv(std::ostream& out, const EmpiricalCurve& curve, const std::vector<double>& oracle,
                     const std::vector<std::string>& header_lines) {
  for (const auto& line : header_lines) out << "# " << line << '\n';
  out << "x,empirical_mean,empirical_sd,oracle,n\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out << format_double(curve.grid[i]) << ',' << format_double(curve.mean[i]) << ','
        << format_double(curve.sd[i]) << ',' << (i < oracle.size() ? format_double(oracle[i]) : "") << ','
        << curve.n << '\n';
  }
}

}  // namespace gibbs
