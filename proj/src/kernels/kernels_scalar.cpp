#include "kymh/kernels.hpp"

#include <cmath>

namespace kymh::kernels::scalar {

namespace {

struct TwoSum {
  double sum;
  double err;
};

inline TwoSum two_sum(double a, double b) {
  const double s = a + b;
  const double z = s - a;
  return {s, (a - (s - z)) + (b - z)};
}

}  // namespace

// Four interleaved accumulators, lane k taking indices i = k (mod 4), reduced
// as (l0 + l2) + (l1 + l3). The vector variants mirror this exactly.
double dot(const double* a, const double* b, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) acc[k] = std::fma(a[i + k], b[i + k], acc[k]);
  }
  double s = (acc[0] + acc[2]) + (acc[1] + acc[3]);
  for (; i < n; ++i) s = std::fma(a[i], b[i], s);
  return s;
}

// Ogita-Rump-Oishi Dot2, lane-wise, followed by an ordered compensated merge.
double dot_compensated(const double* a, const double* b, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  double c[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) {
      const double p = a[i + k] * b[i + k];
      const double e = std::fma(a[i + k], b[i + k], -p);
      const double t = s[k] + p;
      const double z = t - s[k];
      const double err = (s[k] - (t - z)) + (p - z);
      s[k] = t;
      c[k] = c[k] + (err + e);
    }
  }
  double total = s[0];
  double comp = c[0];
  for (std::size_t k = 1; k < 4; ++k) {
    const TwoSum ts = two_sum(total, s[k]);
    total = ts.sum;
    comp = comp + (ts.err + c[k]);
  }
  for (; i < n; ++i) {
    const double p = a[i] * b[i];
    const double e = std::fma(a[i], b[i], -p);
    const TwoSum ts = two_sum(total, p);
    total = ts.sum;
    comp = comp + (ts.err + e);
  }
  return total + comp;
}

void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x,
          double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot(a + r * cols, x, cols);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

void hadamard(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

}  // namespace kymh::kernels::scalar
