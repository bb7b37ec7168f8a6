#include "kymh/kernels.hpp"

#include "doctest.h"

#include <cstdlib>
#include <cstring>
#include <random>
#include <vector>

using namespace kymh::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng) * std::ldexp(1.0, static_cast<int>(rng() % 9) - 4);
  return v;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_bits(a[i], b[i])) return false;
  return true;
}

struct Variant {
  const char* name;
  bool available;
  double (*dot)(const double*, const double*, std::size_t);
  double (*dot_compensated)(const double*, const double*, std::size_t);
  void (*gemv)(const double*, std::size_t, std::size_t, const double*, double*);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*hadamard)(const double*, const double*, double*, std::size_t);
};

std::vector<Variant> vector_variants() {
  return {{"avx2", avx2::available(), avx2::dot, avx2::dot_compensated, avx2::gemv, avx2::axpy,
           avx2::hadamard},
          {"neon", neon::available(), neon::dot, neon::dot_compensated, neon::gemv, neon::axpy,
           neon::hadamard}};
}

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 15, 16, 17, 33, 64, 129, 257, 1000};

}  // namespace

TEST_CASE("vector kernels reproduce the scalar reference bit for bit") {
  std::mt19937_64 rng(12345);
  for (const auto& var : vector_variants()) {
    if (!var.available) continue;
    CAPTURE(var.name);
    for (std::size_t n : kSizes) {
      CAPTURE(n);
      const auto a = random_vector(n, rng);
      const auto b = random_vector(n, rng);
      CHECK(same_bits(var.dot(a.data(), b.data(), n), scalar::dot(a.data(), b.data(), n)));
      CHECK(same_bits(var.dot_compensated(a.data(), b.data(), n),
                      scalar::dot_compensated(a.data(), b.data(), n)));

      auto y_ref = random_vector(n, rng);
      auto y_vec = y_ref;
      scalar::axpy(0.37, a.data(), y_ref.data(), n);
      var.axpy(0.37, a.data(), y_vec.data(), n);
      CHECK(same_bits(y_ref, y_vec));

      std::vector<double> h_ref(n), h_vec(n);
      scalar::hadamard(a.data(), b.data(), h_ref.data(), n);
      var.hadamard(a.data(), b.data(), h_vec.data(), n);
      CHECK(same_bits(h_ref, h_vec));

      for (std::size_t rows : {std::size_t{1}, std::size_t{3}, std::size_t{17}}) {
        const auto m = random_vector(rows * n, rng);
        std::vector<double> g_ref(rows), g_vec(rows);
        scalar::gemv(m.data(), rows, n, a.data(), g_ref.data());
        var.gemv(m.data(), rows, n, a.data(), g_vec.data());
        CHECK(same_bits(g_ref, g_vec));
      }
    }
  }
}

TEST_CASE("dispatched entry points agree with the scalar reference") {
  std::mt19937_64 rng(7);
  const auto a = random_vector(129, rng);
  const auto b = random_vector(129, rng);
  const Isa before = active_isa();
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
    set_active_isa(isa);
    CHECK(same_bits(dot(a, b), scalar::dot(a.data(), b.data(), a.size())));
    CHECK(same_bits(dot_compensated(a, b), scalar::dot_compensated(a.data(), b.data(), a.size())));
    std::vector<double> y(a.size(), 1.0), y_ref(a.size(), 1.0);
    axpy(-2.5, a, y);
    scalar::axpy(-2.5, a.data(), y_ref.data(), a.size());
    CHECK(same_bits(y, y_ref));
  }
  set_active_isa(before);
}

TEST_CASE("unsupported ISA requests fall back to scalar") {
  const Isa before = active_isa();
  if (!neon::available()) {
    set_active_isa(Isa::Neon);
    CHECK(active_isa() == Isa::Scalar);
  }
  if (!avx2::available()) {
    set_active_isa(Isa::Avx2);
    CHECK(active_isa() == Isa::Scalar);
  }
  set_active_isa(before);
}

TEST_CASE("KYMH_SIMD=scalar forces the reference path") {
  const char* env = std::getenv("KYMH_SIMD");
  if (env && std::string(env) == "scalar") CHECK(active_isa() == Isa::Scalar);
  CHECK(isa_name(Isa::Scalar) == "scalar");
  CHECK(isa_name(Isa::Avx2) == "avx2");
  CHECK(isa_name(Isa::Neon) == "neon");
}

TEST_CASE("compensated dot recovers cancellation the plain sum loses") {
  const std::vector<double> a{1e16, 1.0, -1e16, 1.0};
  const std::vector<double> b{1.0, 1.0, 1.0, 1.0};
  CHECK(dot_compensated(a, b) == 2.0);
  const std::vector<double> x{1, 2, 3, 4, 5};
  CHECK(dot(x, x) == 55.0);
}
