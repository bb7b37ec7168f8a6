#include "kymh/errors.hpp"
#include "kymh/obstructions.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

using namespace kymh;
using namespace kymh::obstructions;
using geometry::AxisymGrid;

namespace {

constexpr double kPi = std::numbers::pi;

FutakiInput perturbed(const AxisymGrid& g, const bundle::HiggsConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-0.3, 0.3);
  const double a = d(rng), b = d(rng), c = d(rng);
  FutakiInput in = fubini_study_input(g, cfg);
  in.u = geometry::normalize_volume(g, geometry::sample(g, [&](double s) { return a * s + b * std::cos(2 * s); })).u;
  for (auto& v : in.v) {
    const double e = d(rng), f = d(rng);
    v = geometry::sample(g, [&](double s) { return c + e * s * s + f * std::sin(s); });
  }
  return in;
}

}  // namespace

TEST_CASE("rank-2 Futaki quadrature matches the closed form") {
  const auto g = AxisymGrid::build(257);
  const auto cfg = bundle::rank2_config(2, 2, 1, 0, 5.0, 1.0);
  const double closed = futaki_closed_form(cfg);
  CHECK(closed == doctest::Approx(4 * kPi));
  CHECK(futaki_quadrature(g, fubini_study_input(g, cfg)) == doctest::Approx(closed).epsilon(1e-6));
  CHECK(futaki_closed_form_exact(cfg, 5, 1) == 2);
}

TEST_CASE("Futaki value does not depend on the chosen pair") {
  std::mt19937_64 rng(99);
  const auto g = AxisymGrid::build(257);
  for (const auto& cfg : {bundle::rank2_config(2, 2, 1, 0, 5.0, 1.0), bundle::rank2_config(1, 3, 1, 1, 7.0, 0.4),
                          bundle::abelian_config(2, 0, 5.0, 0.3)}) {
    const double ref = futaki_quadrature(g, fubini_study_input(g, cfg));
    for (int k = 0; k < 5; ++k) {
      const double val = futaki_quadrature(g, perturbed(g, cfg, rng));
      CHECK(std::abs(val - ref) <= 1e-6 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("abelian Futaki: quadrature equals the derived closed form") {
  for (int n = 1; n <= 3; ++n)
    for (int l = 0; l <= n; ++l) {
      const auto cfg = bundle::abelian_config(n, l, 2.0 * n + 1.0, 1.0);
      const auto rep = abelian_futaki_quadrature(cfg);
      CHECK(rep.certified);
      CHECK(rep.extrapolated == doctest::Approx(abelian_futaki_closed_form(cfg)).epsilon(1e-9).scale(1.0));
    }
  // Two zeros of equal order: the invariant vanishes.
  CHECK(abelian_futaki_closed_form(bundle::abelian_config(2, 1, 5.0, 1.0)) == 0.0);
}

TEST_CASE("quadrature rejects unnormalized or mismatched pairs") {
  const auto g = AxisymGrid::build(65);
  const auto cfg = bundle::rank2_config(1, 1, 0, 1, 3.0, 1.0);
  FutakiInput in = fubini_study_input(g, cfg);
  for (double& x : in.u) x = 0.1;
  CHECK_THROWS_AS(futaki_quadrature(g, in), PreconditionError);
  in = fubini_study_input(g, cfg);
  in.v.pop_back();
  CHECK_THROWS_AS(futaki_quadrature(g, in), PreconditionError);
}

TEST_CASE("balancing vanishes exactly when the Futaki invariant does") {
  int checked = 0;
  for (int n1 = 1; n1 <= 6; ++n1)
    for (int n2 = n1; n2 <= 6; ++n2)
      for (int l1 = 0; l1 <= n1; ++l1)
        for (int l2 = 0; l2 <= n2; ++l2)
          for (int t = 1; t <= 60; ++t) {
            const Rational tau(t, 4);
            if (tau == 2 * n1 || tau == 2 * n2) continue;
            const auto cfg = bundle::rank2_config(n1, n2, l1, l2, to_double(tau), 1.0);
            const bool bal = balancing_condition(cfg, tau).balanced;
            const bool fut = futaki_closed_form_exact(cfg, tau, 1) == 0;
            CHECK(bal == fut);
            ++checked;
          }
  CHECK(checked > 0);
  CHECK_THROWS_AS(balancing_condition(bundle::rank2_config(1, 2, 0, 1, 4.0), Rational(4)), PoleError);
}

TEST_CASE("window with deg[phi] from the exact gcd equals the monomial formula") {
  for (int n1 = 1; n1 <= 6; ++n1)
    for (int n2 = n1; n2 <= 6; ++n2)
      for (int l1 = 0; l1 <= n1; ++l1)
        for (int l2 = 0; l2 <= n2; ++l2)
          for (int t = 1; t <= 48; ++t) {
            const Rational tau(t, 2);
            const auto cfg = bundle::rank2_config(n1, n2, l1, l2, to_double(tau));
            const Window a = nonabelian_window(cfg, tau), b = reduced_window(cfg, tau);
            CHECK(a.holds == b.holds);
            CHECK(a.lower == b.lower);
            CHECK(a.upper == b.upper);
          }
}

TEST_CASE("stability report for an abelian single-zero field") {
  const auto rep = stability_check(bundle::abelian_config(1, 0, 3.0, 1.0));
  CHECK(rep.rank == 1);
  CHECK(rep.abelian_window.value());
  CHECK(rep.automorphisms.value() == "non_reductive_borel");
  CHECK(rep.reductivity_obstruction.value());
  CHECK_FALSE(rep.futaki_exact_zero);
  CHECK_FALSE(rep.admissible);
}

TEST_CASE("stability report for an admissible rank-2 config") {
  const auto cfg = bundle::rank2_config(1, 1, 0, 1, 3.5, 1.0);
  const auto rep = stability_check(cfg, Rational(7, 2));
  CHECK(rep.nonabelian_window.value());
  CHECK(rep.reduced_window.value());
  CHECK(rep.balanced.value());
  CHECK(rep.futaki_exact_zero);
  CHECK(rep.admissible);
}

TEST_CASE("z-stability lists its candidates") {
  const auto z = z_stability(bundle::rank2_config(2, 2, 1, 1, 5.5), Rational(11, 2));
  CHECK(z.candidates.size() >= 3);
  CHECK_FALSE(z.stable);
  REQUIRE(z.witness.has_value());
}
