#include "kymh/kernels.hpp"

#include <cmath>

#if defined(__aarch64__)
#include <arm_neon.h>
#define KYMH_HAVE_NEON 1
#else
#define KYMH_HAVE_NEON 0
#endif

namespace kymh::kernels::neon {

#if KYMH_HAVE_NEON

bool available() { return true; }

// Lanes 0,1 live in lo and lanes 2,3 in hi, matching the scalar 4-lane order.
double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lo = vfmaq_f64(lo, vld1q_f64(a + i), vld1q_f64(b + i));
    hi = vfmaq_f64(hi, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  const float64x2_t half = vaddq_f64(lo, hi);
  double s = vgetq_lane_f64(half, 0) + vgetq_lane_f64(half, 1);
  for (; i < n; ++i) s = std::fma(a[i], b[i], s);
  return s;
}

double dot_compensated(const double* a, const double* b, std::size_t n) {
  float64x2_t s[2] = {vdupq_n_f64(0.0), vdupq_n_f64(0.0)};
  float64x2_t c[2] = {vdupq_n_f64(0.0), vdupq_n_f64(0.0)};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int h = 0; h < 2; ++h) {
      const float64x2_t va = vld1q_f64(a + i + 2 * h);
      const float64x2_t vb = vld1q_f64(b + i + 2 * h);
      const float64x2_t p = vmulq_f64(va, vb);
      const float64x2_t e = vfmaq_f64(vnegq_f64(p), va, vb);  // a*b - p, fused
      const float64x2_t t = vaddq_f64(s[h], p);
      const float64x2_t z = vsubq_f64(t, s[h]);
      const float64x2_t err = vaddq_f64(vsubq_f64(s[h], vsubq_f64(t, z)), vsubq_f64(p, z));
      s[h] = t;
      c[h] = vaddq_f64(c[h], vaddq_f64(err, e));
    }
  }
  double sl[4];
  double cl[4];
  vst1q_f64(sl, s[0]);
  vst1q_f64(sl + 2, s[1]);
  vst1q_f64(cl, c[0]);
  vst1q_f64(cl + 2, c[1]);
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
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

void hadamard(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
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

}  // namespace kymh::kernels::neon
