#include <immintrin.h>

#include <cstddef>

// AVX2/FMA variants of the xi-axis kernels. Compiled with -mavx2 -mfma in a
// separate translation unit; the dispatcher only calls in here after a
// runtime CPUID check.

namespace fkv::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

}  // namespace

double weighted_sum_avx2(const double* w, const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + k), _mm256_loadu_pd(x + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(w + k + 4), _mm256_loadu_pd(x + k + 4), acc1);
  }
  for (; k + 4 <= n; k += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + k), _mm256_loadu_pd(x + k), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) s += w[k] * x[k];
  return s;
}

double weighted_dot_avx2(const double* w, const double* a, const double* b,
                         std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + k), prod, acc);
  }
  double s = hsum(acc);
  for (; k < n; ++k) s += w[k] * a[k] * b[k];
  return s;
}

double weighted_sumsq_avx2(const double* w, const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d xv = _mm256_loadu_pd(x + k);
    __m256d sq = _mm256_mul_pd(xv, xv);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + k), sq, acc);
  }
  double s = hsum(acc);
  for (; k < n; ++k) s += w[k] * x[k] * x[k];
  return s;
}

void diag_axpby_avx2(double* x, const double* decay, const double* gain,
                     double s, std::size_t n) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d xv = _mm256_mul_pd(_mm256_loadu_pd(decay + k), _mm256_loadu_pd(x + k));
    xv = _mm256_fmadd_pd(sv, _mm256_loadu_pd(gain + k), xv);
    _mm256_storeu_pd(x + k, xv);
  }
  for (; k < n; ++k) x[k] = decay[k] * x[k] + s * gain[k];
}

}  // namespace fkv::kernels::detail
