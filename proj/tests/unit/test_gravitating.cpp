#include "kymh/errors.hpp"
#include "kymh/gravitating.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstring>

using namespace kymh;
using namespace kymh::gravitating;
using geometry::AxisymGrid;

namespace {

double sup(const Field& f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

ContinuationSchedule schedule(std::vector<double> alphas) {
  ContinuationSchedule s;
  s.alphas = std::move(alphas);
  return s;
}

}  // namespace

TEST_CASE("continuation N=2 l=1 tau=5 converges at every step") {
  const auto g = AxisymGrid::build(129);
  const auto cfg = bundle::abelian_config(2, 1, 5.0);
  const auto res = solve_gravitating(cfg, schedule({0.0, 0.02, 0.05, 0.1}), g);
  REQUIRE(res.history.size() == 4);
  for (const auto& step : res.history) {
    CHECK(step.report.converged);
    CHECK(std::max(step.r1_sup, step.r2_sup) <= 1e-9);
    CHECK(std::abs(step.c_est - step.c_identity) <= 1e-7);
  }
  CHECK(res.state.alpha == 0.1);
  // Both zeros carry the same multiplicity, so the solution is even in s.
  const int n = g.size();
  for (int j = 0; j < n; ++j) {
    CHECK(std::abs(res.state.metric.u[j] - res.state.metric.u[n - 1 - j]) <= 1e-11);
    CHECK(std::abs(res.state.bundle.v[0][j] - res.state.bundle.v[0][n - 1 - j]) <= 1e-11);
  }
  const auto last = bundle::abelian_config(2, 1, 5.0, 0.1);
  const auto r = gravitating_residual(g, res.state, last);
  CHECK(sup(r.r1) <= 1e-9);
  CHECK(sup(r.r2) <= 1e-9);
  CHECK(std::abs(res.state.c_value - topological_constant(last)) <= 1e-7);
}

TEST_CASE("Newton iterations converge superlinearly") {
  const auto g = AxisymGrid::build(65);
  const auto cfg = bundle::abelian_config(2, 1, 5.0, 0.05);
  geometry::ConformalMetric m = geometry::round_metric(g);
  GravitatingState start{m, {{Field(65, 0.0)}}, 0.0, 0.05};
  const auto res = newton_at(cfg, g, start, {1e-10, 50});
  CHECK(res.report.converged);
  const auto& h = res.report.history;
  REQUIRE(h.size() >= 3);
  // Once in the quadratic regime each residual is bounded by C e_k^2.
  for (std::size_t k = 1; k + 1 < h.size(); ++k)
    if (h[k] < 1e-2 && h[k + 1] > 1e-10) CHECK(h[k + 1] <= 50.0 * h[k] * h[k]);
}

TEST_CASE("continuation is deterministic") {
  const auto g = AxisymGrid::build(65);
  const auto cfg = bundle::abelian_config(2, 1, 5.0);
  const auto a = solve_gravitating(cfg, schedule({0.0, 0.05}), g);
  const auto b = solve_gravitating(cfg, schedule({0.0, 0.05}), g);
  CHECK(std::memcmp(a.state.metric.u.data(), b.state.metric.u.data(), 65 * sizeof(double)) == 0);
  CHECK(std::memcmp(a.state.bundle.v[0].data(), b.state.bundle.v[0].data(), 65 * sizeof(double)) == 0);
}

TEST_CASE("halving the continuation step does not change the endpoint") {
  const auto g = AxisymGrid::build(65);
  const auto cfg = bundle::abelian_config(4, 2, 9.0);
  const auto coarse = solve_gravitating(cfg, schedule({0.0, 0.02, 0.04}), g);
  const auto fine = solve_gravitating(cfg, schedule({0.0, 0.01, 0.02, 0.03, 0.04}), g);
  REQUIRE(coarse.report.converged);
  REQUIRE(fine.report.converged);
  CHECK(max_diff(coarse.state.metric.u, fine.state.metric.u) <= 1e-9);
  CHECK(max_diff(coarse.state.bundle.v[0], fine.state.bundle.v[0]) <= 1e-9);
}

TEST_CASE("moment-map form differs from the residual by -2 alpha tau r1 plus a constant") {
  const auto g = AxisymGrid::build(65);
  const auto cfg = bundle::abelian_config(2, 0, 6.0, 0.07);
  GravitatingState st;
  st.metric = geometry::normalize_volume(g, geometry::sample(g, [](double s) { return 0.1 * s + 0.05 * s * s; }));
  st.bundle.v = {geometry::sample(g, [](double s) { return 0.2 * std::cos(s); })};
  st.alpha = cfg.alpha;
  const auto r = gravitating_residual(g, st, cfg);
  const auto k = kymh_general_residual(g, st, cfg);
  Field d(65);
  for (int j = 0; j < 65; ++j) d[j] = k.r2[j] - (r.r2[j] - 2 * cfg.alpha * cfg.tau * r.r1[j]);
  const double mean = geometry::integrate(g, st.metric, d) / geometry::volume(g, st.metric);
  for (double x : d) CHECK(std::abs(x - mean) <= 1e-9);
  for (int j = 0; j < 65; ++j) CHECK(k.r1[j] == doctest::Approx(r.r1[j]).epsilon(1e-12));
}

TEST_CASE("c constants") {
  const auto cfg = bundle::abelian_config(2, 1, 5.0, 0.1);
  CHECK(topological_constant(cfg) == doctest::Approx(4.0 - 2 * 0.1 * 5 * 2));
  CHECK(literature_constant(cfg) == doctest::Approx(2.0 - 2 * 0.1 * 5 * 2));
}

TEST_CASE("single-zero Higgs field is obstructed before any Newton step") {
  const auto g = AxisymGrid::build(65);
  const auto cfg = bundle::abelian_config(1, 0, 3.0);
  try {
    solve_gravitating(cfg, schedule({0.0, 0.1}), g);
    FAIL("expected ObstructedError");
  } catch (const ObstructedError& e) {
    CHECK(std::string(e.what()).find("If φ has only one zero") != std::string::npos);
  }
  SolveOptions opt;
  opt.override_obstruction = true;
  const auto res = solve_gravitating(cfg, schedule({0.0, 0.05}), g, opt);
  CHECK(res.obstruction_overridden);
  CHECK_FALSE(res.history.empty());
}

TEST_CASE("infeasible and malformed inputs") {
  const auto g = AxisymGrid::build(65);
  CHECK_THROWS_AS(solve_gravitating(bundle::abelian_config(2, 1, 4.0), schedule({0.0}), g), InfeasibleError);
  CHECK_THROWS_AS(schedule({0.1, 0.2}).validate(), ConfigError);
  CHECK_THROWS_AS(schedule({0.0, 0.2, 0.1}).validate(), ConfigError);
  const auto u = ContinuationSchedule::uniform(0.12);
  CHECK(u.alphas.front() == 0.0);
  CHECK(u.alphas.back() == 0.12);
  for (std::size_t k = 1; k < u.alphas.size(); ++k) CHECK(u.alphas[k] - u.alphas[k - 1] <= 0.05 + 1e-15);
}

TEST_CASE("Einstein-Bogomol'nyi secant finds c = 0") {
  const auto g = AxisymGrid::build(129);
  const auto eb = einstein_bogomolnyi_solve(bundle::abelian_config(2, 1, 5.0), g);
  CHECK(eb.converged);
  CHECK(std::abs(eb.c_at_alpha_star) <= 1e-8);
  CHECK(eb.alpha_tau_n == doctest::Approx(eb.alpha_star * 5.0 * 2));
  CHECK(eb.alpha_tau_n == doctest::Approx(eb.conventions_prediction).epsilon(1e-6));
  CHECK(eb.literature_prediction == 1.0);
}
