#pragma once
// Dense inner-loop kernels used by the collocation operators and quadrature.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2+FMA (x86-64) or NEON (aarch64) variant. The variant is
// picked once at runtime from CPU features; setting KYMH_SIMD=scalar in the
// environment forces the reference path.
//
// All variants use the same 4-lane accumulation order and fused multiply-adds,
// so the vector paths reproduce the scalar reference bit for bit.

#include <cstddef>
#include <span>
#include <string_view>

namespace kymh::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

/// Best ISA supported by this CPU and build.
Isa detected_isa();

/// ISA in use for the dispatched entry points below.
Isa active_isa();

/// Override the dispatched ISA (tests). Falls back to scalar if unsupported.
void set_active_isa(Isa isa);

// Dispatched entry points. Spans must have matching sizes.
double dot(std::span<const double> a, std::span<const double> b);

/// Compensated (twice-working-precision) dot product.
double dot_compensated(std::span<const double> a, std::span<const double> b);

/// y = A x for a dense row-major rows x cols matrix.
void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// out[i] = a[i] * b[i]
void hadamard(std::span<const double> a, std::span<const double> b,
              std::span<double> out);

// Per-ISA implementations, exposed for equivalence testing.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double dot_compensated(const double* a, const double* b, std::size_t n);
void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x,
          double* y);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void hadamard(const double* a, const double* b, double* out, std::size_t n);
}  // namespace scalar

namespace avx2 {
bool available();
double dot(const double* a, const double* b, std::size_t n);
double dot_compensated(const double* a, const double* b, std::size_t n);
void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x,
          double* y);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void hadamard(const double* a, const double* b, double* out, std::size_t n);
}  // namespace avx2

namespace neon {
bool available();
double dot(const double* a, const double* b, std::size_t n);
double dot_compensated(const double* a, const double* b, std::size_t n);
void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x,
          double* y);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void hadamard(const double* a, const double* b, double* out, std::size_t n);
}  // namespace neon

}  // namespace kymh::kernels
