// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "kymh/kernels.hpp"

#include <cmath>

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define KYMH_HAVE_AVX2 1
#else
#define KYMH_HAVE_AVX2 0
#endif

namespace kymh::kernels::avx2 {

#if KYMH_HAVE_AVX2

bool available() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  // (l0 + l2) + (l1 + l3)
  const __m128d half = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
  double s = _mm_cvtsd_f64(half) + _mm_cvtsd_f64(_mm_unpackhi_pd(half, half));
  for (; i < n; ++i) s = std::fma(a[i], b[i], s);
  return s;
}

double dot_compensated(const double* a, const double* b, std::size_t n) {
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    const __m256d p = _mm256_mul_pd(va, vb);
    const __m256d e = _mm256_fmsub_pd(va, vb, p);
    const __m256d t = _mm256_add_pd(s, p);
    const __m256d z = _mm256_sub_pd(t, s);
    const __m256d err = _mm256_add_pd(_mm256_sub_pd(s, _mm256_sub_pd(t, z)), _mm256_sub_pd(p, z));
    s = t;
    c = _mm256_add_pd(c, _mm256_add_pd(err, e));
  }
  alignas(32) double sl[4];
  alignas(32) double cl[4];
  _mm256_store_pd(sl, s);
  _mm256_store_pd(cl, c);
  double total = sl[0];
  double comp = cl[0];
  for (std::size_t k = 1; k < 4; ++k) {
    const double t = total + sl[k];
    const double z = t - total;
    const double err = (total - (t - z)) + (sl[k] - z);
    total = t;
    comp = comp + (err + cl[k]);
  }
  for (; i < n; ++i) {
    const double p = a[i] * b[i];
    const double e = std::fma(a[i], b[i], -p);
    const double t = total + p;
    const double z = t - total;
    const double err = (total - (t - z)) + (p - z);
    total = t;
    comp = comp + (err + e);
  }
  return total + comp;
}

void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x,
          double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot(a + r * cols, x, cols);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

void hadamard(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

#else

bool available() { return false; }
double dot(const double* a, const double* b, std::size_t n) { return scalar::dot(a, b, n); }
double dot_compensated(const double* a, const double* b, std::size_t n) {
  return scalar::dot_compensated(a, b, n);
}
void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  scalar::gemv(a, rows, cols, x, y);
}
void axpy(double alpha, const double* x, double* y, std::size_t n) { scalar::axpy(alpha, x, y, n); }
void hadamard(const double* a, const double* b, double* out, std::size_t n) {
  scalar::hadamard(a, b, out, n);
}

#endif

}  // namespace kymh::kernels::avx2
