#include "kymh/obstructions.hpp"

#include "kymh/errors.hpp"
#include "kymh/vortex.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kymh::obstructions {

using geometry::AxisymGrid;

namespace {

void require_rank2(const bundle::HiggsConfig& config) {
  config.validate();
  if (config.rank() != 2) throw WrongRankError("this predicate needs a rank-2 configuration");
}

}  // namespace

FutakiInput fubini_study_input(const AxisymGrid& grid, const bundle::HiggsConfig& config) {
  config.validate();
  const auto n = static_cast<std::size_t>(grid.size());
  FutakiInput in{config, Field(n, 0.0), {}};
  in.v.assign(static_cast<std::size_t>(config.rank()), Field(n, 0.0));
  return in;
}

Rational futaki_closed_form_exact(const bundle::HiggsConfig& config, const Rational& tau,
                                  const Rational& alpha) {
  require_rank2(config);
  Rational sum = 0;
  for (std::size_t j = 0; j < 2; ++j) {
    const int n = config.degrees[j], l = config.exponents[j];
    sum += (2 * n - tau) * (2 * l - n);
  }
  return alpha * sum;
}

double futaki_closed_form(const bundle::HiggsConfig& config) {
  require_rank2(config);
  double sum = 0.0;
  for (std::size_t j = 0; j < 2; ++j) {
    const int n = config.degrees[j], l = config.exponents[j];
    sum += (2.0 * n - config.tau) * (2.0 * l - n);
  }
  return kTwoPi * config.alpha * sum;
}

double abelian_futaki_closed_form(const bundle::HiggsConfig& config) {
  config.validate();
  if (!config.abelian()) throw WrongRankError("abelian closed form needs a single degree");
  const int n = config.degrees[0], l = config.exponents[0];
  return kTwoPi * config.alpha * (2.0 * n - config.tau) * (2.0 * l - n);
}

double futaki_quadrature(const AxisymGrid& grid, const FutakiInput& input) {
  const auto& config = input.config;
  config.validate();
  const auto n = static_cast<std::size_t>(grid.size());
  if (input.u.size() != n || input.v.size() != static_cast<std::size_t>(config.rank())) {
    throw PreconditionError("ansatz does not match the grid or the number of summands");
  }
  for (const auto& vj : input.v) {
    if (vj.size() != n) throw PreconditionError("ansatz does not match the grid");
    geometry::require_finite(vj, "v");
  }
  const geometry::ConformalMetric metric{input.u, kTwoPi};
  const double vol = geometry::volume(grid, metric);
  if (std::abs(vol - kTwoPi) > 1e-10 * kTwoPi) {
    throw PreconditionError("ansatz is not volume-normalized (volume " + std::to_string(vol) + ")");
  }
  const double alpha = config.alpha, tau = config.tau;

  // Hamiltonian of the rotation field: dh/ds = exp(2u)/2, mean zero.
  Field density(n);
  for (std::size_t i = 0; i < n; ++i) density[i] = 0.5 * std::exp(2.0 * input.u[i]);
  Field h = grid.cumulative_integral(density);
  const double h_mean = geometry::integrate(grid, metric, h) / vol;
  for (double& x : h) x -= h_mean;

  const auto curvature = geometry::scalar_curvature(grid, metric);
  Field p_total(n, 0.0), f_total(n, 0.0);
  double vertical = 0.0;
  for (int j = 0; j < config.rank(); ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const int nd = config.degrees[ju], l = config.exponents[ju];
    const Field f = vortex::curvature(grid, metric, input.v[ju], nd);
    const Field p = vortex::higgs_norm(grid, input.v[ju], nd, l);
    const Field dv = grid.apply_d1(input.v[ju]);
    // Moment of the lifted field on O(N_j), normalized so that it kills phi_j.
    Field e1m(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = grid.node(static_cast<int>(i));
      const double m = -0.5 * (l * (1.0 - s) - (nd - l) * (1.0 + s)) - (1.0 - s) * (1.0 + s) * dv[i];
      e1m[i] = m * (f[i] + 0.5 * (p[i] - tau));
      p_total[i] += p[i];
      f_total[i] += f[i];
    }
    vertical += geometry::integrate(grid, metric, e1m);
  }
  const Field lap_p = geometry::laplacian(grid, metric, p_total);
  Field e2(n);
  for (std::size_t i = 0; i < n; ++i) {
    e2[i] = h[i] * (curvature.s_field[i] + alpha * lap_p[i] - 2.0 * alpha * tau * f_total[i]);
  }
  return -(geometry::integrate(grid, metric, e2) + 4.0 * alpha * vertical);
}

RichardsonReport abelian_futaki_quadrature(
    const bundle::HiggsConfig& config,
    const std::function<FutakiInput(const AxisymGrid&)>& ansatz) {
  config.validate();
  if (!config.abelian()) throw WrongRankError("abelian Futaki quadrature needs a single degree");
  RichardsonReport rep;
  rep.resolutions = {129, 257, 513};
  for (int n : rep.resolutions) {
    const AxisymGrid grid = AxisymGrid::build(n);
    const FutakiInput in = ansatz ? ansatz(grid) : fubini_study_input(grid, config);
    rep.values.push_back(futaki_quadrature(grid, in));
  }
  for (std::size_t k = 0; k + 1 < rep.values.size(); ++k) {
    rep.differences.push_back(std::abs(rep.values[k + 1] - rep.values[k]));
  }
  const double scale = std::max(1.0, std::abs(rep.values.back()));
  rep.floor = 1e-11 * scale;
  const double d1 = rep.differences[0], d2 = rep.differences[1];
  rep.certified = (d2 <= 0.1 * d1) || (d1 <= rep.floor && d2 <= rep.floor);
  if (d1 > rep.floor && d2 > rep.floor && d1 != d2) {
    // Aitken delta-squared on the three values.
    const double a = rep.values[0], b = rep.values[1], c = rep.values[2];
    const double den = (c - b) - (b - a);
    rep.extrapolated = den != 0.0 ? c - (c - b) * (c - b) / den : c;
  } else {
    rep.extrapolated = rep.values.back();
  }
  return rep;
}

BalancingResult balancing_condition(const bundle::HiggsConfig& config, const Rational& tau) {
  require_rank2(config);
  const int n1 = config.degrees[0], n2 = config.degrees[1];
  const int l1 = config.exponents[0], l2 = config.exponents[1];
  const Rational d2 = 2 * n2 - tau, d1 = 2 * n1 - tau;
  if (d2 == 0) throw PoleError("balancing condition undefined: denominator 2 N2 - tau vanishes");
  if (d1 == 0) throw PoleError("balancing condition undefined: denominator 2 N1 - tau vanishes");
  BalancingResult r;
  r.lhs = Rational(2 * l1 - n1) / d2 + Rational(2 * l2 - n2) / d1;
  r.balanced = r.lhs == 0;
  return r;
}

BalancingResult balancing_condition(const bundle::HiggsConfig& config) {
  return balancing_condition(config, to_rational(config.tau));
}

namespace {

Window window(int n1, int n2, int deg_phi, const Rational& tau) {
  Window w;
  w.lower = n2;
  w.upper = n1 + n2 - deg_phi;
  const Rational half = tau / 2;
  w.holds = w.lower < half && half < w.upper;
  return w;
}

int exact_saturation_degree(const bundle::HiggsConfig& config) {
  const auto f1 = BinaryForm::monomial(config.degrees[0], config.exponents[0]);
  const auto f2 = BinaryForm::monomial(config.degrees[1], config.exponents[1]);
  return bundle::divisor_gcd_degree(f1, f2).degree;
}

}  // namespace

Window nonabelian_window(const bundle::HiggsConfig& config, const Rational& tau) {
  require_rank2(config);
  return window(config.degrees[0], config.degrees[1], exact_saturation_degree(config), tau);
}

Window reduced_window(const bundle::HiggsConfig& config, const Rational& tau) {
  require_rank2(config);
  const int n1 = config.degrees[0], n2 = config.degrees[1];
  const int l1 = config.exponents[0], l2 = config.exponents[1];
  return window(n1, n2, std::min(l1, l2) + std::min(n1 - l1, n2 - l2), tau);
}

ZStability z_stability(const bundle::HiggsConfig& config, const Rational& tau) {
  require_rank2(config);
  const int n1 = config.degrees[0], n2 = config.degrees[1];
  ZStability z;
  z.bound = (Rational(n1 + n2) + tau) / 2;
  auto add = [&](std::string name, const Rational& deg, int meets) {
    ZStability::Candidate c{std::move(name), deg, meets, deg + tau * meets, false};
    c.violates = !(c.slope < z.bound);
    z.candidates.push_back(c);
  };
  add("O(N1)", n1, 0);
  add("O(N2)", n2, 0);
  add("[phi]", exact_saturation_degree(config), 1);
  z.stable = true;
  for (const auto& c : z.candidates) {
    if (c.violates) {
      z.stable = false;
      if (!z.witness) z.witness = c.name;
    }
  }
  return z;
}

StabilityReport stability_check(const bundle::HiggsConfig& config) {
  return stability_check(config, to_rational(config.tau));
}

StabilityReport stability_check(const bundle::HiggsConfig& config, const Rational& tau) {
  config.validate();
  StabilityReport r;
  r.rank = config.rank();
  const std::string tau_s = to_string(tau);
  const std::string half_s = to_string(tau / 2);

  if (config.abelian()) {
    const int n = config.degrees[0], l = config.exponents[0];
    r.abelian_window = Rational(n) < tau / 2;
    r.reasons.push_back(*r.abelian_window
                            ? "vortex window N < τ/2 holds (N = " + std::to_string(n) + ", τ/2 = " + half_s + ")"
                            : "vortex window fails: a solution exists only provided that N < τ/2 (N = " +
                                  std::to_string(n) + ", τ/2 = " + half_s + ")");
    const auto aut = bundle::classify_automorphisms(bundle::Divisor::of_monomial(n, l));
    r.automorphisms = bundle::to_string(aut.kind);
    r.reductivity_obstruction = aut.obstruction;
    if (aut.obstruction) {
      r.reasons.push_back(
          "If φ has only one zero, then there are no solutions of the gravitating vortex equations: "
          "Aut(P^1, O(N), φ) is the non-reductive group C* x C");
    } else {
      r.reasons.push_back("automorphism group of (P^1, O(N), φ) is " + *r.automorphisms + " (reductive)");
    }
    const Rational coeff = (2 * n - tau) * (2 * l - n);
    r.futaki_exact_zero = coeff == 0;
    r.futaki_per_alpha = kTwoPi * to_double(coeff);
    r.futaki = config.alpha * r.futaki_per_alpha;
    if (!r.futaki_exact_zero) {
      r.reasons.push_back("Futaki invariant 2πα(2N − τ)(2ℓ − N) = 2πα·(" + to_string(coeff) +
                          ") is nonzero, so no solution exists for α > 0");
    }
    r.admissible = *r.abelian_window && !aut.obstruction && r.futaki_exact_zero;
    return r;
  }

  const Window nw = nonabelian_window(config, tau);
  const Window rw = reduced_window(config, tau);
  r.nonabelian_window = nw.holds;
  r.reduced_window = rw.holds;
  r.reasons.push_back(std::string(nw.holds ? "window holds: " : "window fails: ") + "N2 < τ/2 < N1 + N2 − deg[φ] reads " +
                      to_string(nw.lower) + " < " + half_s + " < " + to_string(nw.upper));
  if (nw.holds != rw.holds) {
    r.reasons.push_back("reduced window disagrees with the gcd window (" + to_string(rw.lower) + " < " + half_s +
                        " < " + to_string(rw.upper) + ")");
  }
  const ZStability z = z_stability(config, tau);
  r.z_stable = z.stable;
  r.z_witness = z.witness;
  r.z_agrees_with_window = z.stable == nw.holds;
  r.reasons.push_back(z.stable ? "z-stability holds on the candidates O(N1), O(N2), [φ]"
                               : "z-stability fails: (deg V' + τ rk(L ∩ V'))/rk V' >= " + to_string(z.bound) +
                                     " for V' = " + *z.witness);
  if (!*r.z_agrees_with_window) {
    r.reasons.push_back("z-stability and the window N2 < τ/2 < N1 + N2 − deg[φ] disagree at τ = " + tau_s +
                        "; both are reported as computed");
  }
  try {
    const BalancingResult b = balancing_condition(config, tau);
    r.balanced = b.balanced;
    r.balancing_lhs = to_string(b.lhs);
    r.reasons.push_back(b.balanced
                            ? "balancing condition (2ℓ1 − N1)/(2N2 − τ) + (2ℓ2 − N2)/(2N1 − τ) = 0 holds"
                            : "balancing condition fails: (2ℓ1 − N1)/(2N2 − τ) + (2ℓ2 − N2)/(2N1 − τ) = " +
                                  *r.balancing_lhs + " ≠ 0, so there is no solution of the equations");
  } catch (const PoleError& e) {
    r.reasons.push_back(e.what());
  }
  const Rational coeff = futaki_closed_form_exact(config, tau, 1);
  r.futaki_exact_zero = coeff == 0;
  r.futaki_per_alpha = kTwoPi * to_double(coeff);
  r.futaki = config.alpha * r.futaki_per_alpha;
  r.reasons.push_back("Futaki invariant 2πα Σ (2N_j − τ)(2ℓ_j − N_j) = 2πα·(" + to_string(coeff) + ")");
  r.reasons.push_back("reductivity verdict not evaluated for rank 2 (abelian configurations only)");
  r.admissible = nw.holds && r.balanced.value_or(false);
  return r;
}

}  // namespace kymh::obstructions
