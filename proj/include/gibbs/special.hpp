#pragma once

// Special functions used by the energy models and the limit-shape oracles.
// All are pure and reentrant (no global state, unlike ::lgamma's signgam).

namespace gibbs::special {

// ln|Gamma(x)|. Stirling series with upward recurrence below 10; reflection
// for x < 0.5. Returns +inf at the poles.
double log_gamma(double x);

// psi(x) = d/dx ln Gamma(x).
double digamma(double x);

// psi'(x).
double trigamma(double x);

// Upper incomplete gamma Gamma(x; d) = int_x^inf y^(d-1) e^-y dy for d > 0,
// x >= 0. Series below x = d + 1, Lentz continued fraction above.
double upper_incomplete_gamma(double x, double d);

// Regularized Q(d, x) = Gamma(x; d) / Gamma(d).
double gamma_q(double d, double x);

// Exponential integral E1(x) = int_x^inf e^-t / t dt, x > 0.
double expint_e1(double x);

}  // namespace gibbs::special
