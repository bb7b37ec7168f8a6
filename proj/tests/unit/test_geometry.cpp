#include "kymh/errors.hpp"
#include "kymh/geometry.hpp"
#include "kymh/vortex.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

using namespace kymh;
using namespace kymh::geometry;

namespace {

constexpr double kPi = std::numbers::pi;

// Smooth even/odd mix of low Chebyshev modes with random amplitudes.
Field random_smooth(const AxisymGrid& grid, std::mt19937_64& rng, double amplitude) {
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  double c[6];
  for (double& x : c) x = dist(rng);
  return sample(grid, [&](double s) {
    return c[0] * s + c[1] * (2 * s * s - 1) + c[2] * std::sin(2 * s) + c[3] * std::exp(s) +
           c[4] * s * s * s + c[5] * std::cos(3 * s);
  });
}

}  // namespace

TEST_CASE("grid size is validated") {
  CHECK_THROWS_AS(AxisymGrid::build(32), ConfigError);
  CHECK_THROWS_AS(AxisymGrid::build(31), ConfigError);
  CHECK_THROWS_AS(AxisymGrid::build(4099), ConfigError);
  CHECK(AxisymGrid::build(33).size() == 33);
}

TEST_CASE("nodes run from the pole s=-1 to s=+1") {
  const auto g = AxisymGrid::build(65);
  CHECK(g.node(0) == doctest::Approx(-1.0));
  CHECK(g.node(64) == doctest::Approx(1.0));
  for (int j = 1; j < 65; ++j) CHECK(g.node(j) > g.node(j - 1));
}

TEST_CASE("Clenshaw-Curtis integrates polynomials exactly") {
  const auto g = AxisymGrid::build(33);
  for (int k = 0; k <= 20; ++k) {
    const Field f = sample(g, [k](double s) { return std::pow(s, k); });
    const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
    CHECK(g.quadrature(f) == doctest::Approx(exact).epsilon(1e-14));
  }
}

TEST_CASE("round Laplacian of s is 4 s") {
  const auto g = AxisymGrid::build(65);
  const Field s = sample(g, [](double x) { return x; });
  const Field lap = g.apply_laplacian_round(s);
  for (int j = 0; j < g.size(); ++j) CHECK(lap[j] == doctest::Approx(4.0 * g.node(j)).epsilon(1e-11));
  const Field p2 = sample(g, [](double x) { return 1.5 * x * x - 0.5; });
  const Field lap2 = g.apply_laplacian_round(p2);
  for (int j = 0; j < g.size(); ++j) CHECK(lap2[j] == doctest::Approx(12.0 * p2[j]).epsilon(1e-10));
}

TEST_CASE("round metric has volume 2 pi and scalar curvature 4") {
  const auto g = AxisymGrid::build(129);
  const auto m = round_metric(g);
  CHECK(volume(g, m) == doctest::Approx(2 * kPi).epsilon(1e-14));
  const auto curv = scalar_curvature(g, m);
  CHECK(curv.total == doctest::Approx(8 * kPi).epsilon(1e-13));
  for (double x : curv.s_field) CHECK(x == doctest::Approx(4.0));
}

TEST_CASE("normalize_volume is idempotent and hits the target") {
  std::mt19937_64 rng(3);
  const auto g = AxisymGrid::build(129);
  const Field u = random_smooth(g, rng, 0.5);
  const auto m1 = normalize_volume(g, u);
  const auto m2 = normalize_volume(g, m1.u);
  CHECK(volume(g, m1) == doctest::Approx(2 * kPi).epsilon(1e-13));
  for (int j = 0; j < g.size(); ++j) CHECK(m2.u[j] == doctest::Approx(m1.u[j]).epsilon(1e-14));
  const auto m3 = normalize_volume(g, u, 5.0);
  CHECK(volume(g, m3) == doctest::Approx(5.0).epsilon(1e-13));
}

TEST_CASE("Gauss-Bonnet holds for random conformal factors") {
  std::mt19937_64 rng(11);
  const auto g = AxisymGrid::build(129);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = normalize_volume(g, random_smooth(g, rng, 0.6));
    const auto curv = scalar_curvature(g, m);
    CHECK(std::abs(curv.total - 8 * kPi) <= 1e-8);
  }
}

TEST_CASE("Laplacian is self-adjoint against omega") {
  std::mt19937_64 rng(5);
  const auto g = AxisymGrid::build(129);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = normalize_volume(g, random_smooth(g, rng, 0.5));
    const Field f = random_smooth(g, rng, 1.0);
    const Field h = random_smooth(g, rng, 1.0);
    const Field lf = laplacian(g, m, f);
    const Field lh = laplacian(g, m, h);
    Field a(f.size()), b(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
      a[j] = h[j] * lf[j];
      b[j] = f[j] * lh[j];
    }
    const double ia = integrate(g, m, a), ib = integrate(g, m, b);
    CHECK(std::abs(ia - ib) <= 1e-9 * std::max(1.0, std::abs(ia)));
    // Delta >= 0.
    Field q(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) q[j] = f[j] * lf[j];
    CHECK(integrate(g, m, q) >= -1e-10);
  }
}

TEST_CASE("Chern integral is 2 pi N for every (u, v)") {
  std::mt19937_64 rng(17);
  const auto g = AxisymGrid::build(129);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = normalize_volume(g, random_smooth(g, rng, 0.5));
    const Field v = random_smooth(g, rng, 0.8);
    const int n = 1 + trial % 4;
    CHECK(std::abs(vortex::chern_integral(g, m, v, n) - 2 * kPi * n) <= 1e-8);
  }
}

TEST_CASE("cumulative integral and interpolation are consistent") {
  const auto g = AxisymGrid::build(65);
  const Field f = sample(g, [](double s) { return std::cos(s); });
  const Field F = g.cumulative_integral(f);
  for (int j = 0; j < g.size(); ++j)
    CHECK(F[j] == doctest::Approx(std::sin(g.node(j)) - std::sin(-1.0)).epsilon(1e-13));
  const std::vector<double> pts{-0.9, -0.1, 0.33, 0.77};
  const Field vals = g.interpolate(f, pts);
  for (std::size_t k = 0; k < pts.size(); ++k) CHECK(vals[k] == doctest::Approx(std::cos(pts[k])).epsilon(1e-13));
}

TEST_CASE("pole extrapolation uses interior nodes only") {
  const auto g = AxisymGrid::build(65);
  Field f = sample(g, [](double s) { return 1.0 + s * s; });
  f.front() = std::nan("");
  f.back() = std::nan("");
  const auto [lo, hi] = g.extrapolate_to_poles(f);
  CHECK(lo == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(hi == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("require_finite rejects NaN and infinity") {
  const std::vector<double> bad{1.0, std::numeric_limits<double>::infinity()};
  CHECK_THROWS_AS(require_finite(bad, "u"), NumericInputError);
  const std::vector<double> good{1.0, 2.0};
  CHECK_NOTHROW(require_finite(good, "u"));
}
