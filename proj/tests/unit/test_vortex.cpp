#include "kymh/errors.hpp"
#include "kymh/vortex.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace kymh;
using namespace kymh::vortex;
using geometry::AxisymGrid;

namespace {

constexpr double kPi = std::numbers::pi;

double sup(const Field& f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("vortex N=1 l=0 tau=3 converges quadratically") {
  const auto g = AxisymGrid::build(129);
  const auto m = geometry::round_metric(g);
  const auto cfg = bundle::abelian_config(1, 0, 3.0);
  const auto sol = solve_vortex(g, m, cfg);
  CHECK(sol.report.converged);
  CHECK(sol.report.iterations <= 15);
  CHECK(sol.report.residual_sup < 1e-10);
  CHECK(sup(vortex_residual(g, m, sol.bundle, cfg)) < 1e-10);
  CHECK(std::abs(chern_integral(g, m, sol.bundle.v[0], 1) - 2 * kPi) <= 1e-8);
  // Integrated equation: int |phi|^2_H omega = 2 pi (tau - 2N).
  const Field h = higgs_norm(g, sol.bundle.v[0], 1, 0);
  CHECK(std::abs(geometry::integrate(g, m, h) - 2 * kPi * (3.0 - 2.0)) <= 1e-7);
}

TEST_CASE("two resolutions agree") {
  const auto cfg = bundle::abelian_config(1, 0, 3.0);
  const auto g1 = AxisymGrid::build(129);
  const auto g2 = AxisymGrid::build(257);
  const auto s1 = solve_vortex(g1, geometry::round_metric(g1), cfg);
  const auto s2 = solve_vortex(g2, geometry::round_metric(g2), cfg);
  const Field on_coarse = g2.interpolate(s2.bundle.v[0], g1.nodes());
  double diff = 0.0;
  for (int j = 0; j < g1.size(); ++j) diff = std::max(diff, std::abs(on_coarse[j] - s1.bundle.v[0][j]));
  CHECK(diff <= 1e-8);
}

TEST_CASE("solution is unique: different starts land on the same metric") {
  const auto g = AxisymGrid::build(65);
  const auto m = geometry::round_metric(g);
  const auto cfg = bundle::abelian_config(2, 1, 7.0);
  const auto a = solve_vortex(g, m, cfg);
  const Field start = geometry::sample(g, [](double s) { return 0.8 - 0.3 * s * s; });
  const auto b = solve_vortex(g, m, cfg, {}, &start);
  REQUIRE(a.report.converged);
  REQUIRE(b.report.converged);
  for (int j = 0; j < g.size(); ++j) CHECK(a.bundle.v[0][j] == doctest::Approx(b.bundle.v[0][j]).epsilon(1e-9));
}

TEST_CASE("vortex solves on non-round metrics") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> dist(-0.3, 0.3);
  const auto g = AxisymGrid::build(129);
  for (int trial = 0; trial < 4; ++trial) {
    const double a = dist(rng), b = dist(rng);
    const auto m = geometry::normalize_volume(g, geometry::sample(g, [&](double s) { return a * s + b * s * s; }));
    const auto cfg = bundle::abelian_config(1 + trial % 3, trial % 2, 2.0 * (1 + trial % 3) + 1.5);
    const auto sol = solve_vortex(g, m, cfg);
    CHECK(sol.report.converged);
    CHECK(sup(vortex_residual(g, m, sol.bundle, cfg)) < 1e-10);
    const int n = cfg.degrees[0];
    const Field h = higgs_norm(g, sol.bundle.v[0], n, cfg.exponents[0]);
    CHECK(geometry::integrate(g, m, h) == doctest::Approx(2 * kPi * (cfg.tau - 2 * n)).epsilon(1e-8));
  }
}

TEST_CASE("infeasible parameters throw before solving") {
  const auto g = AxisymGrid::build(65);
  const auto m = geometry::round_metric(g);
  CHECK_THROWS_AS(solve_vortex(g, m, bundle::abelian_config(2, 1, 4.0)), InfeasibleError);
  CHECK_THROWS_AS(solve_vortex(g, m, bundle::abelian_config(2, 1, 3.0)), InfeasibleError);
  CHECK_THROWS_AS(solve_vortex(g, m, bundle::rank2_config(1, 1, 0, 1, 5.0)), WrongRankError);
}

TEST_CASE("curvature of the Fubini-Study metric on O(N) is N") {
  const auto g = AxisymGrid::build(33);
  const auto m = geometry::round_metric(g);
  const Field zero(33, 0.0);
  for (int n = 1; n <= 4; ++n)
    for (double x : curvature(g, m, zero, n)) CHECK(x == doctest::Approx(n));
}
