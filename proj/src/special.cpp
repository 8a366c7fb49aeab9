#include "gibbs/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "gibbs/errors.hpp"

namespace gibbs::special {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = std::numbers::pi;
constexpr double kAsymptoticCut = 10.0;

double log_gamma_stirling(double z) {
  const double r = 1.0 / z;
  const double r2 = r * r;
  // Bernoulli terms B_2n / (2n (2n-1) z^(2n-1)), n = 1..7.
  const double series =
      r * (1.0 / 12.0 +
           r2 * (-1.0 / 360.0 +
                 r2 * (1.0 / 1260.0 +
                       r2 * (-1.0 / 1680.0 +
                             r2 * (1.0 / 1188.0 + r2 * (-691.0 / 360360.0 + r2 * (1.0 / 156.0)))))));
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + series;
}

double digamma_asymptotic(double z) {
  const double r2 = 1.0 / (z * z);
  const double series =
      r2 * (1.0 / 12.0 -
            r2 * (1.0 / 120.0 -
                  r2 * (1.0 / 252.0 -
                        r2 * (1.0 / 240.0 -
                              r2 * (1.0 / 132.0 - r2 * (691.0 / 32760.0 - r2 * (1.0 / 12.0)))))));
  return std::log(z) - 0.5 / z - series;
}

double trigamma_asymptotic(double z) {
  const double r = 1.0 / z;
  const double r2 = r * r;
  const double series =
      1.0 / 6.0 +
      r2 * (-1.0 / 30.0 +
            r2 * (1.0 / 42.0 +
                  r2 * (-1.0 / 30.0 +
                        r2 * (5.0 / 66.0 + r2 * (-691.0 / 2730.0 + r2 * (7.0 / 6.0))))));
  return r + 0.5 * r2 + r2 * r * series;
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Lower series: sum_n x^n / (d (d+1) ... (d+n)).
double lower_series(double x, double d) {
  double term = 1.0 / d;
  double sum = term;
  for (int n = 1; n < 100000; ++n) {
    term *= x / (d + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
  }
  return sum;
}

// Continued fraction for Gamma(x; d) e^x x^-d (modified Lentz).
double upper_fraction(double x, double d) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - d;
  double c = 1.0 / tiny;
  double dd = 1.0 / b;
  double h = dd;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - d);
    b += 2.0;
    dd = an * dd + b;
    if (std::fabs(dd) < tiny) dd = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    dd = 1.0 / dd;
    const double delta = dd * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h;
}

}  // namespace

double log_gamma(double x) {
  if (std::isnan(x)) return x;
  if (x == kInf) return kInf;
  if (is_nonpositive_integer(x)) return kInf;
  if (x == 1.0 || x == 2.0) return 0.0;
  if (x < 0.5) {
    // Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return std::log(kPi / std::fabs(std::sin(kPi * x))) - log_gamma(1.0 - x);
  }
  if (x >= kAsymptoticCut) return log_gamma_stirling(x);
  double product = 1.0;
  double z = x;
  while (z < kAsymptoticCut) {
    product *= z;
    z += 1.0;
  }
  return log_gamma_stirling(z) - std::log(product);
}

double digamma(double x) {
  if (std::isnan(x)) return x;
  if (x == kInf) return kInf;
  if (is_nonpositive_integer(x)) return kNaN;
  if (x < 0.5) {
    // psi(1-x) - psi(x) = pi cot(pi x)
    return digamma(1.0 - x) - kPi / std::tan(kPi * x);
  }
  double shift = 0.0;
  double z = x;
  while (z < kAsymptoticCut) {
    shift += 1.0 / z;
    z += 1.0;
  }
  return digamma_asymptotic(z) - shift;
}

double trigamma(double x) {
  if (std::isnan(x)) return x;
  if (x == kInf) return 0.0;
  if (is_nonpositive_integer(x)) return kInf;
  if (x < 0.5) {
    // psi'(1-x) + psi'(x) = pi^2 / sin^2(pi x)
    const double s = std::sin(kPi * x);
    return kPi * kPi / (s * s) - trigamma(1.0 - x);
  }
  double shift = 0.0;
  double z = x;
  while (z < kAsymptoticCut) {
    shift += 1.0 / (z * z);
    z += 1.0;
  }
  return trigamma_asymptotic(z) + shift;
}

double gamma_q(double d, double x) {
  if (!(d > 0.0)) throw InvalidArgument("incomplete gamma requires d > 0");
  if (!(x >= 0.0)) throw InvalidArgument("incomplete gamma requires x >= 0");
  if (x == 0.0) return 1.0;
  if (x == kInf) return 0.0;
  const double log_prefactor = d * std::log(x) - x - log_gamma(d);
  if (x < d + 1.0) return 1.0 - std::exp(log_prefactor) * lower_series(x, d);
  return std::exp(log_prefactor) * upper_fraction(x, d);
}

double upper_incomplete_gamma(double x, double d) {
  if (!(d > 0.0)) throw InvalidArgument("incomplete gamma requires d > 0");
  if (!(x >= 0.0)) throw InvalidArgument("incomplete gamma requires x >= 0");
  if (x == kInf) return 0.0;
  if (x == 0.0) return std::exp(log_gamma(d));
  const double log_xd = d * std::log(x) - x;
  if (x < d + 1.0) return std::exp(log_gamma(d)) - std::exp(log_xd) * lower_series(x, d);
  return std::exp(log_xd) * upper_fraction(x, d);
}

double expint_e1(double x) {
  if (!(x > 0.0)) throw InvalidArgument("E1 requires x > 0");
  if (x == kInf) return 0.0;
  if (x <= 1.0) {
    // -gamma - ln x - sum_k (-x)^k / (k k!)
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
      term *= -x / k;
      const double contribution = term / k;
      sum += contribution;
      if (std::fabs(contribution) < 1e-18 * std::fabs(sum)) break;
    }
    return -std::numbers::egamma - std::log(x) - sum;
  }
  return std::exp(-x) * upper_fraction(x, 0.0);
}

}  // namespace gibbs::special
