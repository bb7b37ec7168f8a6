#include "kymh/vortex.hpp"

#include "doctest.h"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <utility>
#include <numbers>

using namespace kymh;
using namespace kymh::vortex;
using geometry::AxisymGrid;

TEST_CASE("(1,1,0,1) at the Fubini-Study pair: off-diagonal residual is sqrt(1-s^2)/4") {
  const auto g = AxisymGrid::build(65);
  const auto m = geometry::round_metric(g);
  const auto cfg = bundle::rank2_config(1, 1, 0, 1, 5.0);
  const Field zero(65, 0.0);
  const auto res = nonabelian_residual(g, m, {zero, zero, {}}, cfg);
  CHECK(res.offdiag_weight == -1);
  for (int j = 0; j < g.size(); ++j) {
    const double s = g.node(j);
    CHECK(std::abs(res.residual[j](0, 1)) == doctest::Approx(std::sqrt(1 - s * s) / 4).epsilon(1e-12));
    CHECK(res.residual[j](0, 1) == doctest::Approx(res.residual[j](1, 0)));
  }
  CHECK(res.trace_integral == doctest::Approx(res.trace_expected).epsilon(1e-12));
}

TEST_CASE("trace of the rank-2 residual integrates topologically") {
  const auto g = AxisymGrid::build(129);
  const auto m = geometry::normalize_volume(g, geometry::sample(g, [](double s) { return 0.2 * s - 0.1 * s * s; }));
  const auto cfg = bundle::rank2_config(1, 3, 0, 2, 9.0);
  const Field v1 = geometry::sample(g, [](double s) { return 0.3 * std::cos(2 * s); });
  const Field v2 = geometry::sample(g, [](double s) { return -0.2 * s; });
  const Field q = geometry::sample(g, [](double s) { return 0.1 * (1 + s) / 2; });
  const auto res = nonabelian_residual(g, m, {v1, v2, q}, cfg);
  CHECK(res.trace_integral == doctest::Approx(res.trace_expected).epsilon(1e-10));
  for (const auto& r : res.residual) CHECK((r - r.transpose()).norm() <= 1e-12 * std::max(1.0, r.norm()));
}

TEST_CASE("block reduction: diagonal metric with phi2 off gives the abelian residual") {
  const auto g = AxisymGrid::build(129);
  const auto m = geometry::round_metric(g);
  const auto ab = bundle::abelian_config(1, 0, 5.0);
  const auto sol = solve_vortex(g, m, ab);
  const auto cfg = bundle::rank2_config(1, 2, 0, 1, 5.0);
  const Field v2 = geometry::sample(g, [](double s) { return 0.1 * s; });
  const auto res = nonabelian_residual(g, m, {sol.bundle.v[0], v2, {}}, cfg, {1.0, 0.0});
  const Field r1 = vortex_residual(g, m, sol.bundle, ab);
  const Field c2 = curvature(g, m, v2, 2);
  for (int j = 0; j < g.size(); ++j) {
    CHECK(std::abs(res.residual[j](0, 0) - r1[j]) <= 1e-10);
    CHECK(res.residual[j](1, 1) == doctest::Approx(c2[j] - 2.5).epsilon(1e-12));
    CHECK(std::abs(res.residual[j](0, 1)) <= 1e-14);
  }
}

TEST_CASE("gauge covariance: a holomorphic frame change keeps the curvature spectrum") {
  // e1' = e1 + c w^m e2 on O(1) + O(3), m = 2. In the new frame the
  // Fubini-Study metric has v1 = log(1 + c^2 (1+s)^2 / 4) / 2 and off-diagonal
  // profile c (1 + s) / 2 with weight -m; the curvature stays conjugate to
  // diag(1, 3). The wrong weight breaks this.
  const auto g = AxisymGrid::build(129);
  const auto m = geometry::round_metric(g);
  const double c = 0.7;
  const Field v1 = geometry::sample(g, [&](double s) { return 0.5 * std::log1p(c * c * (1 + s) * (1 + s) / 4); });
  const Field v2(129, 0.0);
  const Field q = geometry::sample(g, [&](double s) { return c * (1 + s) / 2; });
  const auto curv = equivariant_curvature(g, m, {v1, v2, q}, 1, 3, -2);
  for (int j = 0; j < g.size(); ++j) {
    Eigen::EigenSolver<Eigen::Matrix2d> es(curv[j]);
    Eigen::Vector2d ev = es.eigenvalues().real();
    if (ev(0) > ev(1)) std::swap(ev(0), ev(1));
    CHECK(es.eigenvalues().imag().norm() <= 1e-9);
    CHECK(ev(0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ev(1) == doctest::Approx(3.0).epsilon(1e-9));
  }
  const auto wrong = equivariant_curvature(g, m, {v1, v2, q}, 1, 3, 2);
  Eigen::EigenSolver<Eigen::Matrix2d> es(wrong[64]);
  CHECK(std::abs(es.eigenvalues().real().minCoeff() - 1.0) > 1e-3);
}
