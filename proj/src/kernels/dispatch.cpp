#include "kymh/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace kymh::kernels {

namespace {

struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  double (*dot_compensated)(const double*, const double*, std::size_t);
  void (*gemv)(const double*, std::size_t, std::size_t, const double*, double*);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*hadamard)(const double*, const double*, double*, std::size_t);
};

constexpr Table kScalar{scalar::dot, scalar::dot_compensated, scalar::gemv, scalar::axpy,
                        scalar::hadamard};
constexpr Table kAvx2{avx2::dot, avx2::dot_compensated, avx2::gemv, avx2::axpy, avx2::hadamard};
constexpr Table kNeon{neon::dot, neon::dot_compensated, neon::gemv, neon::axpy, neon::hadamard};

bool supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2: return avx2::available();
    case Isa::Neon: return neon::available();
  }
  return false;
}

Isa initial_isa() {
  if (const char* env = std::getenv("KYMH_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && supported(Isa::Avx2)) return Isa::Avx2;
    if (v == "neon" && supported(Isa::Neon)) return Isa::Neon;
  }
  return detected_isa();
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

const Table& table() {
  switch (active().load(std::memory_order_relaxed)) {
    case Isa::Avx2: return kAvx2;
    case Isa::Neon: return kNeon;
    case Isa::Scalar: break;
  }
  return kScalar;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

Isa detected_isa() {
  if (supported(Isa::Avx2)) return Isa::Avx2;
  if (supported(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) { active().store(supported(isa) ? isa : Isa::Scalar); }

double dot(std::span<const double> a, std::span<const double> b) {
  return table().dot(a.data(), b.data(), a.size());
}

double dot_compensated(std::span<const double> a, std::span<const double> b) {
  return table().dot_compensated(a.data(), b.data(), a.size());
}

void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) {
  table().gemv(a.data(), rows, cols, x.data(), y.data());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  table().axpy(alpha, x.data(), y.data(), x.size());
}

void hadamard(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  table().hadamard(a.data(), b.data(), out.data(), a.size());
}

}  // namespace kymh::kernels
