#include <cstdlib>
#include <string_view>

#include "gibbs/kernels.hpp"

namespace gibbs::kernels {
namespace {

struct Table {
  Isa isa;
  double (*max_value)(std::span<const double>);
  double (*sum_exp_shifted)(std::span<const double>, double);
  double (*max_abs_diff)(std::span<const double>, std::span<const double>);
  void (*accumulate_moments)(std::span<double>, std::span<double>, std::span<const double>);
};

constexpr Table kScalar{Isa::scalar, &scalar::max_value, &scalar::sum_exp_shifted,
                        &scalar::max_abs_diff, &scalar::accumulate_moments};
#if defined(GIBBS_HAVE_AVX2_KERNELS)
constexpr Table kAvx2{Isa::avx2, &avx2::max_value, &avx2::sum_exp_shifted,
                      &avx2::max_abs_diff, &avx2::accumulate_moments};
#endif

const Table& select() {
  const char* forced = std::getenv("GIBBS_SHAPES_KERNELS");
  if (forced != nullptr && std::string_view(forced) == "scalar") return kScalar;
#if defined(GIBBS_HAVE_AVX2_KERNELS)
  if (isa_available(Isa::avx2)) return kAvx2;
#endif
  return kScalar;
}

const Table& table() {
  static const Table& t = select();
  return t;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(GIBBS_HAVE_AVX2_KERNELS)
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return table().isa; }

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

double max_value(std::span<const double> values) { return table().max_value(values); }

double sum_exp_shifted(std::span<const double> values, double shift) {
  return table().sum_exp_shifted(values, shift);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  return table().max_abs_diff(a, b);
}

void accumulate_moments(std::span<double> sum, std::span<double> sum_sq,
                        std::span<const double> row) {
  table().accumulate_moments(sum, sum_sq, row);
}

}  // namespace gibbs::kernels
