#include <immintrin.h>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "gibbs/kernels.hpp"

namespace gibbs::kernels::avx2 {
namespace {

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  hi = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, hi));
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  hi = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, hi));
}

// Cephes-style exp: Cody-Waite reduction by ln 2 and a (2,3) rational
// approximation on [-ln2/2, ln2/2]. Arguments below -708.39 flush to zero.
inline __m256d exp_pd(__m256d x) {
  const __m256d lo_cut = _mm256_set1_pd(-708.39641853226408);
  const __m256d hi_cut = _mm256_set1_pd(709.78271289338397);
  const __m256d underflow = _mm256_cmp_pd(x, lo_cut, _CMP_LT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, lo_cut), hi_cut);

  const __m256d fx = _mm256_round_pd(
      _mm256_fmadd_pd(x, _mm256_set1_pd(1.4426950408889634073599), _mm256_set1_pd(0.5)),
      _MM_FROUND_TO_NEG_INF | _MM_FROUND_NO_EXC);
  x = _mm256_fnmadd_pd(fx, _mm256_set1_pd(6.93145751953125e-1), x);
  x = _mm256_fnmadd_pd(fx, _mm256_set1_pd(1.42860682030941723212e-6), x);

  const __m256d xx = _mm256_mul_pd(x, x);
  __m256d px = _mm256_fmadd_pd(_mm256_set1_pd(1.26177193074810590878e-4), xx,
                               _mm256_set1_pd(3.02994407707441961300e-2));
  px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(9.99999999999999999910e-1));
  px = _mm256_mul_pd(px, x);
  __m256d qx = _mm256_fmadd_pd(_mm256_set1_pd(3.00198505138664455042e-6), xx,
                               _mm256_set1_pd(2.52448340349684104192e-3));
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.27265548208155028766e-1));
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.00000000000000000009e0));
  __m256d r = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  r = _mm256_fmadd_pd(_mm256_set1_pd(2.0), r, _mm256_set1_pd(1.0));

  // 2^fx assembled in the exponent field; fx is within [-1022, 1023] here.
  __m256i e = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(fx));
  e = _mm256_slli_epi64(_mm256_add_epi64(e, _mm256_set1_epi64x(1023)), 52);
  r = _mm256_mul_pd(r, _mm256_castsi256_pd(e));
  return _mm256_andnot_pd(underflow, r);
}

}  // namespace

double max_value(std::span<const double> values) {
  const std::size_t n = values.size();
  const double* p = values.data();
  __m256d m = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, _mm256_loadu_pd(p + i));
  double r = hmax(m);
  for (; i < n; ++i) r = std::max(r, p[i]);
  return r;
}

double sum_exp_shifted(std::span<const double> values, double shift) {
  const std::size_t n = values.size();
  const double* p = values.data();
  const __m256d s = _mm256_set1_pd(shift);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, exp_pd(_mm256_sub_pd(_mm256_loadu_pd(p + i), s)));
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += std::exp(p[i] - shift);
  return r;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  __m256d nan_seen = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_andnot_pd(
        sign, _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
    nan_seen = _mm256_or_pd(nan_seen, _mm256_cmp_pd(d, d, _CMP_UNORD_Q));
    m = _mm256_max_pd(m, d);
  }
  if (_mm256_movemask_pd(nan_seen) != 0) return std::numeric_limits<double>::quiet_NaN();
  double r = hmax(m);
  for (; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    if (std::isnan(d)) return d;
    r = std::max(r, d);
  }
  return r;
}

void accumulate_moments(std::span<double> sum, std::span<double> sum_sq,
                        std::span<const double> row) {
  assert(sum.size() == row.size() && sum_sq.size() == row.size());
  const std::size_t n = row.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(row.data() + i);
    _mm256_storeu_pd(sum.data() + i, _mm256_add_pd(_mm256_loadu_pd(sum.data() + i), x));
    _mm256_storeu_pd(sum_sq.data() + i,
                     _mm256_fmadd_pd(x, x, _mm256_loadu_pd(sum_sq.data() + i)));
  }
  for (; i < n; ++i) {
    sum[i] += row[i];
    sum_sq[i] = std::fma(row[i], row[i], sum_sq[i]);
  }
}

}  // namespace gibbs::kernels::avx2
