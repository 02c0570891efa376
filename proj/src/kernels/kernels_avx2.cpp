// Compiled with -mavx2 -mfma. Only reached after cpu_has_avx2() succeeds.
#include "alstl/kernels.hpp"

#include <cassert>
#include <limits>

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace alstl::kernels::avx2 {

#if defined(__AVX2__)

namespace {

inline double hmin(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_min_pd(lo, hi);
  lo = _mm_min_sd(lo, _mm_unpackhi_pd(lo, lo));
  return _mm_cvtsd_f64(lo);
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  lo = _mm_max_sd(lo, _mm_unpackhi_pd(lo, lo));
  return _mm_cvtsd_f64(lo);
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  lo = _mm_add_sd(lo, _mm_unpackhi_pd(lo, lo));
  return _mm_cvtsd_f64(lo);
}

}  // namespace

double reduce_min(std::span<const double> xs) {
  const double* p = xs.data();
  const std::size_t n = xs.size();
  std::size_t i = 0;
  double acc = std::numeric_limits<double>::infinity();
  if (n >= 4) {
    __m256d v = _mm256_set1_pd(acc);
    for (; i + 4 <= n; i += 4) v = _mm256_min_pd(v, _mm256_loadu_pd(p + i));
    acc = hmin(v);
  }
  for (; i < n; ++i) {
    if (p[i] < acc) acc = p[i];
  }
  return acc;
}

double reduce_max(std::span<const double> xs) {
  const double* p = xs.data();
  const std::size_t n = xs.size();
  std::size_t i = 0;
  double acc = -std::numeric_limits<double>::infinity();
  if (n >= 4) {
    __m256d v = _mm256_set1_pd(acc);
    for (; i + 4 <= n; i += 4) v = _mm256_max_pd(v, _mm256_loadu_pd(p + i));
    acc = hmax(v);
  }
  for (; i < n; ++i) {
    if (p[i] > acc) acc = p[i];
  }
  return acc;
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  std::size_t i = 0;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 4), _mm256_loadu_pd(b.data() + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

#else

double reduce_min(std::span<const double> xs) { return scalar::reduce_min(xs); }
double reduce_max(std::span<const double> xs) { return scalar::reduce_max(xs); }
double dot(std::span<const double> a, std::span<const double> b) { return scalar::dot(a, b); }

#endif

}  // namespace alstl::kernels::avx2
