#pragma once

// Monte Carlo estimation of rescaled size-distribution curves.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gibbs/energy.hpp"
#include "gibbs/scaling.hpp"

namespace gibbs {

struct EmpiricalCurve {
  std::vector<double> grid;
  std::vector<double> mean;
  std::vector<double> sd;
  std::size_t n = 0;
  std::optional<std::pair<double, double>> excluded;  // open window (l1, l2)
};

enum class CurveKind { F, G };

struct CurveRequest {
  CurveKind kind = CurveKind::F;
  std::vector<double> grid;
  std::size_t n = 200;
  std::uint64_t seed = 0;
  std::int64_t k_max = 0;
  std::size_t threads = 0;  // 0: thread_budget()
};

// Samples request.n partitions with streams (seed, i), evaluates F or G on the
// grid and discards them. Moments are formed from exact count deviations, so
// fluctuations far below double resolution of the mean are still resolved.
EmpiricalCurve estimate_curve(const EnergyModel& model, const ScalingPlan& plan, const CurveRequest& request);

// "a:b:step", inclusive of b up to rounding.
std::vector<double> parse_grid(std::string_view spec);

// CSV with '#' header lines, then "x,empirical_mean,empirical_sd,oracle,n".
void write_curve_csv(std::ostream& out, const EmpiricalCurve& curve, const std::vector<double>& oracle,
                     const std::vector<std::string>& header_lines);

std::string format_double(double v);

}  // namespace gibbs
