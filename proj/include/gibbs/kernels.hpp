#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// on x86-64, an AVX2+FMA version; the public entry points dispatch once at
// startup on CPU features. GIBBS_SHAPES_KERNELS=scalar forces the reference
// path.

#include <span>
#include <string_view>

namespace gibbs::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa();
std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);

double max_value(std::span<const double> values);

// Sum of exp(v - shift). Entries equal to -inf contribute zero.
double sum_exp_shifted(std::span<const double> values, double shift);

// max_i |a_i - b_i|; sizes must match. NaN in either input propagates.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

// sum[i] += row[i], sum_sq[i] += row[i]^2.
void accumulate_moments(std::span<double> sum, std::span<double> sum_sq,
                        std::span<const double> row);

namespace scalar {
double max_value(std::span<const double> values);
double sum_exp_shifted(std::span<const double> values, double shift);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
void accumulate_moments(std::span<double> sum, std::span<double> sum_sq,
                        std::span<const double> row);
}  // namespace scalar

#if defined(GIBBS_HAVE_AVX2_KERNELS)
namespace avx2 {
double max_value(std::span<const double> values);
double sum_exp_shifted(std::span<const double> values, double shift);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
void accumulate_moments(std::span<double> sum, std::span<double> sum_sq,
                        std::span<const double> row);
}  // namespace avx2
#endif

}  // namespace gibbs::kernels
