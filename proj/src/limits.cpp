#include "gibbs/limits.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "gibbs/errors.hpp"

namespace gibbs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kWindow = 5;

// Increments decaying like j^-p with p at or below this are treated as a
// divergent (log-like) drift rather than convergence.
constexpr double kDriftExponent = 1.25;

}  // namespace

std::string format_probe_table(const std::vector<Probe>& probes) {
  std::string out;
  char line[96];
  for (const auto& p : probes) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", p.x, p.value);
    out += line;
  }
  return out;
}

LimitEstimate probe_limit(const std::function<double(double)>& f, std::string_view what,
                          const LimitRule& rule) {
  LimitEstimate est{0.0, 0.0, false, {}};
  for (int j = rule.j_first; j <= rule.j_last; ++j) {
    const double x = std::ldexp(1.0, j);
    est.probes.push_back({x, f(x)});
  }
  const auto& p = est.probes;
  const std::size_t n = p.size();
  auto fail = [&](const std::string& why) {
    return InconclusiveLimit(std::string(what) + ": " + why, format_probe_table(p));
  };
  if (n < kWindow + 1) throw fail("too few probes");

  // A probe that has already overflowed decides the sign on its own.
  const double last = p[n - 1].value;
  if (std::isinf(last)) {
    est.value = last;
    return est;
  }
  for (const auto& q : p) {
    if (std::isnan(q.value)) throw fail("non-finite probe");
  }

  std::vector<double> inc(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) inc[i] = p[i + 1].value - p[i].value;

  // Convergence: the last five probes agree to the tolerance.
  bool agree = true;
  for (std::size_t i = n - kWindow; i + 1 < n; ++i) agree = agree && std::fabs(inc[i]) <= rule.tolerance;
  if (agree) {
    const double d1 = inc[n - 2];
    const double d0 = inc[n - 3];
    double value = last;
    if (d0 != 0.0 && d1 != 0.0 && (d0 > 0) == (d1 > 0)) {
      const double r = d1 / d0;
      if (r <= 0.9) value = last + d1 * r / (1.0 - r);  // Aitken tail of a geometric sequence
    }
    const double nearest = std::round(value);
    if (std::fabs(value - nearest) <= 1e-9) {
      est.value = nearest == 0.0 ? 0.0 : nearest;
      est.snapped = true;
    } else {
      est.value = value;
      est.resolution = std::fabs(d1);
    }
    return est;
  }

  // Divergence: strictly monotone over the window and either past the bound or
  // drifting with increments that do not decay fast enough to sum.
  bool up = true;
  bool down = true;
  for (std::size_t i = n - 1 - kWindow; i + 1 < n; ++i) {
    up = up && inc[i] > 0.0;
    down = down && inc[i] < 0.0;
  }
  if (up || down) {
    const double sign = up ? 1.0 : -1.0;
    if (std::fabs(last) > rule.divergence_bound) {
      est.value = sign * kInf;
      return est;
    }
    const double a = std::fabs(inc[n - 5]);
    const double b = std::fabs(inc[n - 2]);
    const double j0 = rule.j_last - 3;
    const double j1 = rule.j_last;
    if (b >= a) {
      est.value = sign * kInf;
      return est;
    }
    const double exponent = -std::log(b / a) / std::log(j1 / j0);
    if (exponent < kDriftExponent) {
      est.value = sign * kInf;
      return est;
    }
    throw fail("monotone but neither converged nor divergent (increment decay exponent " +
               std::to_string(exponent) + ")");
  }
  throw fail("probes neither converge nor diverge monotonically");
}

}  // namespace gibbs
