#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "gibbs/kernels.hpp"

namespace gibbs::kernels::scalar {

double max_value(std::span<const double> values) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values) m = std::max(m, v);
  return m;
}

double sum_exp_shifted(std::span<const double> values, double shift) {
  double s = 0.0;
  for (double v : values) s += std::exp(v - shift);
  return s;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::fabs(a[i] - b[i]);
    if (std::isnan(d)) return d;
    m = std::max(m, d);
  }
  return m;
}

void accumulate_moments(std::span<double> sum, std::span<double> sum_sq,
                        std::span<const double> row) {
  assert(sum.size() == row.size() && sum_sq.size() == row.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    sum[i] += row[i];
    sum_sq[i] += row[i] * row[i];
  }
}

}  // namespace gibbs::kernels::scalar
