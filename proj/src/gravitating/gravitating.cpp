#include "kymh/gravitating.hpp"

#include "kymh/errors.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace kymh::gravitating {

using geometry::AxisymGrid;
using geometry::ConformalMetric;

namespace {

double sup_norm(std::span<const double> f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

void require_abelian(const bundle::HiggsConfig& config) {
  config.validate();
  if (!config.abelian()) throw WrongRankError("the gravitating vortex equations need a single degree");
}

void require_state(const AxisymGrid& grid, const GravitatingState& state) {
  const auto n = static_cast<std::size_t>(grid.size());
  if (state.metric.u.size() != n || state.bundle.v.size() != 1 || state.bundle.v[0].size() != n) {
    throw NumericInputError("state does not match the grid");
  }
  geometry::require_finite(state.metric.u, "u");
  geometry::require_finite(state.bundle.v[0], "v");
}

// Left side of the metric equation, S + alpha (Delta + tau)(|phi|^2_H - tau).
Field metric_lhs(const AxisymGrid& grid, const GravitatingState& state,
                 const bundle::HiggsConfig& config) {
  const Field& u = state.metric.u;
  const Field p = vortex::higgs_norm(grid, state.bundle.v[0], config.degrees[0], config.exponents[0]);
  const Field lap_u = grid.apply_laplacian_round(u);
  const Field lap_p = grid.apply_laplacian_round(p);
  Field out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double e = std::exp(-2.0 * u[i]);
    out[i] = e * (4.0 + 2.0 * lap_u[i]) + state.alpha * e * lap_p[i] +
             state.alpha * config.tau * (p[i] - config.tau);
  }
  return out;
}

GravitatingState initial_state(const AxisymGrid& grid) {
  GravitatingState s;
  s.metric = geometry::round_metric(grid);
  s.bundle.v = {Field(static_cast<std::size_t>(grid.size()), 0.0)};
  return s;
}

}  // namespace

void ContinuationSchedule::validate() const {
  if (alphas.empty() || alphas.front() != 0.0) {
    throw ConfigError("schedule must start at alpha = 0");
  }
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    if (!(alphas[i] > alphas[i - 1]) || !std::isfinite(alphas[i])) {
      throw ConfigError("schedule must be strictly increasing");
    }
  }
  if (!(newton.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (newton.max_iter < 1) throw ConfigError("max_iter must be at least 1");
}

ContinuationSchedule ContinuationSchedule::uniform(double alpha, double max_step) {
  if (!std::isfinite(alpha) || alpha < 0.0) throw ConfigError("alpha must be finite and >= 0");
  ContinuationSchedule s;
  if (alpha == 0.0) return s;
  const int steps = std::max(1, static_cast<int>(std::ceil(alpha / max_step - 1e-12)));
  for (int k = 1; k <= steps; ++k) s.alphas.push_back(alpha * k / steps);
  return s;
}

Residuals gravitating_residual(const AxisymGrid& grid, const GravitatingState& state,
                               const bundle::HiggsConfig& config) {
  require_abelian(config);
  require_state(grid, state);
  Residuals res;
  res.r1 = vortex::vortex_residual(grid, state.metric, state.bundle.v[0], config);
  res.r2 = metric_lhs(grid, state, config);
  res.c_est = geometry::integrate(grid, state.metric, res.r2) / geometry::volume(grid, state.metric);
  for (double& x : res.r2) x -= res.c_est;
  return res;
}

double identity_constant(const AxisymGrid& grid, const GravitatingState& state,
                         const bundle::HiggsConfig& config) {
  require_abelian(config);
  require_state(grid, state);
  const double vol = geometry::volume(grid, state.metric);
  const double s_total = geometry::scalar_curvature(grid, state.metric).total;
  const Field p = vortex::higgs_norm(grid, state.bundle.v[0], config.degrees[0], config.exponents[0]);
  const double p_total = geometry::integrate(grid, state.metric, p);
  return (s_total + state.alpha * config.tau * (p_total - config.tau * vol)) / vol;
}

double topological_constant(const bundle::HiggsConfig& config) {
  return 4.0 - 2.0 * config.alpha * config.tau * config.degrees.at(0);
}

double literature_constant(const bundle::HiggsConfig& config) {
  return 2.0 - 2.0 * config.alpha * config.tau * config.degrees.at(0);
}

namespace {

struct NewtonOutcome {
  GravitatingState state;
  vortex::SolveReport report;
  double kappa = 0.0;
};

// Bordered Newton in (u, v, c, kappa). The metric equation carries an extra
// kappa * s term and the unknowns the constraints
//   int omega = 2 pi,  int s omega = 0.
// The second constraint removes the dilation directions of the sphere, which
// lie in the kernel of the linearization; kappa is its Lagrange multiplier and
// vanishes at a genuine solution.
NewtonOutcome bordered_newton(const AxisymGrid& grid, const bundle::HiggsConfig& config,
                              GravitatingState state, const vortex::NewtonOptions& opt) {
  const int n = grid.size();
  const int dim = 2 * n + 2;
  const double alpha = state.alpha;
  const double tau = config.tau;
  const int nd = config.degrees[0];
  const RowMatrix& lap = grid.laplacian_round();
  const auto w = grid.weights();
  const double vol = state.metric.vol_target;
  Field phi_fs = vortex::higgs_norm(grid, Field(static_cast<std::size_t>(n), 0.0), nd, config.exponents[0]);
  const double pi = std::numbers::pi;

  Eigen::VectorXd x(dim);
  for (int i = 0; i < n; ++i) {
    x[i] = state.metric.u[static_cast<std::size_t>(i)];
    x[n + i] = state.bundle.v[0][static_cast<std::size_t>(i)];
  }
  x[2 * n] = geometry::integrate(grid, state.metric, metric_lhs(grid, state, config)) / vol;
  x[2 * n + 1] = 0.0;

  struct Eval {
    Eigen::VectorXd f;
    Eigen::VectorXd e;   // exp(-2u)
    Eigen::VectorXd p;   // |phi|^2_H
    Eigen::VectorXd lv, lu, lp;
    double merit = 0.0;
  };
  auto evaluate = [&](const Eigen::VectorXd& y) {
    Eval ev;
    ev.f.resize(dim);
    ev.e.resize(n);
    ev.p.resize(n);
    Eigen::VectorXd u = y.head(n), v = y.segment(n, n);
    for (int i = 0; i < n; ++i) {
      ev.e[i] = std::exp(-2.0 * u[i]);
      ev.p[i] = std::exp(2.0 * v[i]) * phi_fs[static_cast<std::size_t>(i)];
    }
    ev.lv = lap * v;
    ev.lu = lap * u;
    ev.lp = lap * ev.p;
    const double c = y[2 * n], kappa = y[2 * n + 1];
    double g1 = 0.0, g2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double s = grid.node(i);
      ev.f[i] = ev.e[i] * (nd + ev.lv[i]) + 0.5 * (ev.p[i] - tau);
      ev.f[n + i] = ev.e[i] * (4.0 + 2.0 * ev.lu[i] + alpha * ev.lp[i]) + alpha * tau * (ev.p[i] - tau) -
                    c + kappa * s;
      const double dens = w[static_cast<std::size_t>(i)] / ev.e[i];
      g1 += dens;
      g2 += dens * s;
    }
    ev.f[2 * n] = pi * g1 - vol;
    ev.f[2 * n + 1] = pi * g2;
    ev.merit = ev.f.lpNorm<Eigen::Infinity>();
    return ev;
  };

  NewtonOutcome out;
  out.report.resolution = n;
  Eval ev = evaluate(x);
  bool finite = std::isfinite(ev.merit);
  for (int it = 0; it < opt.max_iter && finite && ev.merit > opt.tolerance; ++it) {
    out.report.history.push_back(ev.merit);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < n; ++i) {
      const double s = grid.node(i);
      const double e = ev.e[i];
      jac(i, i) += -2.0 * e * (nd + ev.lv[i]);
      jac.block(i, n, 1, n) = e * lap.row(i);
      jac(i, n + i) += ev.p[i];
      jac.block(n + i, 0, 1, n) = 2.0 * e * lap.row(i);
      jac(n + i, i) += -2.0 * e * (4.0 + 2.0 * ev.lu[i] + alpha * ev.lp[i]);
      for (int j = 0; j < n; ++j) jac(n + i, n + j) = alpha * e * lap(i, j) * 2.0 * ev.p[j];
      jac(n + i, n + i) += alpha * tau * 2.0 * ev.p[i];
      jac(n + i, 2 * n) = -1.0;
      jac(n + i, 2 * n + 1) = s;
      const double dens = 2.0 * pi * w[static_cast<std::size_t>(i)] / e;
      jac(2 * n, i) = dens;
      jac(2 * n + 1, i) = dens * s;
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
    const Eigen::VectorXd step = lu.solve(ev.f);
    if (!step.allFinite()) break;

    bool accepted = false;
    double lambda = 1.0;
    for (int half = 0; half < 30; ++half, lambda *= 0.5) {
      const Eigen::VectorXd trial = x - lambda * step;
      if (trial.head(2 * n).cwiseAbs().maxCoeff() > 300.0) continue;
      Eval tv = evaluate(trial);
      if (std::isfinite(tv.merit) && tv.merit < ev.merit) {
        x = trial;
        ev = std::move(tv);
        accepted = true;
        break;
      }
    }
    out.report.iterations = it + 1;
    if (!accepted) break;
  }
  out.report.history.push_back(ev.merit);
  for (int i = 0; i < n; ++i) {
    state.metric.u[static_cast<std::size_t>(i)] = x[i];
    state.bundle.v[0][static_cast<std::size_t>(i)] = x[n + i];
  }
  out.kappa = x[2 * n + 1];
  out.state = std::move(state);
  return out;
}

StepRecord finish(const AxisymGrid& grid, const bundle::HiggsConfig& config, NewtonOutcome& nr,
                  double tolerance) {
  StepRecord rec;
  rec.alpha = nr.state.alpha;
  const Residuals res = gravitating_residual(grid, nr.state, config);
  nr.state.c_value = res.c_est;
  rec.c_est = res.c_est;
  bundle::HiggsConfig at = config;
  at.alpha = nr.state.alpha;
  rec.c_identity = identity_constant(grid, nr.state, at);
  rec.r1_sup = sup_norm(res.r1);
  rec.r2_sup = sup_norm(res.r2);
  rec.kernel_multiplier = nr.kappa;
  rec.report = nr.report;
  rec.report.residual_sup = std::max(rec.r1_sup, rec.r2_sup);
  rec.report.converged = nr.report.history.back() <= tolerance && rec.report.residual_sup <= tolerance;
  return rec;
}

}  // namespace

ContinuationResult newton_at(const bundle::HiggsConfig& config, const AxisymGrid& grid,
                             const GravitatingState& start, const vortex::NewtonOptions& newton) {
  require_abelian(config);
  require_state(grid, start);
  GravitatingState s = start;
  s.alpha = config.alpha;
  NewtonOutcome nr = bordered_newton(grid, config, std::move(s), newton);
  ContinuationResult out;
  StepRecord rec = finish(grid, config, nr, newton.tolerance);
  out.report = rec.report;
  out.history.push_back(rec);
  out.state = nr.state;
  return out;
}

ContinuationResult solve_gravitating(const bundle::HiggsConfig& config,
                                     const ContinuationSchedule& schedule, const AxisymGrid& grid,
                                     const SolveOptions& options) {
  require_abelian(config);
  schedule.validate();
  const int nd = config.degrees[0];
  if (2.0 * nd >= config.tau) {
    throw InfeasibleError("no gravitating vortex: existence requires N < tau/2 (N = " +
                          std::to_string(nd) + ", tau/2 = " + std::to_string(config.tau / 2) + ")");
  }
  ContinuationResult out;
  const bool coupled = schedule.alphas.back() > 0.0;
  const auto aut = bundle::classify_automorphisms(bundle::Divisor::of_monomial(nd, config.exponents[0]));
  if (aut.obstruction && coupled) {
    if (!options.override_obstruction) {
      throw ObstructedError(
          "If φ has only one zero, then there are no solutions of the gravitating vortex equations "
          "with alpha > 0: Aut(P^1, O(N), φ) is the non-reductive Borel group C* x C");
    }
    out.obstruction_overridden = true;
  }

  GravitatingState current = options.initial ? *options.initial : initial_state(grid);
  require_state(grid, current);
  out.state = current;
  out.report.resolution = grid.size();
  out.report.converged = true;
  for (double a : schedule.alphas) {
    GravitatingState start = current;
    start.alpha = a;
    bundle::HiggsConfig at = config;
    at.alpha = a;
    NewtonOutcome nr = bordered_newton(grid, at, std::move(start), schedule.newton);
    StepRecord rec = finish(grid, at, nr, schedule.newton.tolerance);
    out.history.push_back(rec);
    out.report.iterations += rec.report.iterations;
    out.report.history.insert(out.report.history.end(), rec.report.history.begin(),
                              rec.report.history.end());
    out.report.residual_sup = rec.report.residual_sup;
    if (!rec.report.converged) {
      out.report.converged = false;
      return out;
    }
    current = nr.state;
    out.state = current;
  }
  return out;
}

EinsteinBogomolnyiResult einstein_bogomolnyi_solve(const bundle::HiggsConfig& config,
                                                   const AxisymGrid& grid, const SecantOptions& options) {
  require_abelian(config);
  EinsteinBogomolnyiResult res;
  const double tn = config.tau * config.degrees[0];

  GravitatingState anchor;
  double anchor_alpha = 0.0;
  bool have_anchor = false;
  // Continue from the nearest converged state below alpha; returns c_est.
  auto solve_at = [&](double alpha, GravitatingState& state_out) -> std::optional<double> {
    if (!(alpha >= 0.0)) return std::nullopt;
    double from = 0.0;
    GravitatingState st = initial_state(grid);
    if (have_anchor && alpha >= anchor_alpha) {
      from = anchor_alpha;
      st = anchor;
    }
    const ContinuationSchedule rel = ContinuationSchedule::uniform(alpha - from, options.max_step);
    for (double da : rel.alphas) {
      bundle::HiggsConfig at = config;
      at.alpha = from + da;
      const ContinuationResult step = newton_at(at, grid, st, options.newton);
      if (!step.report.converged) return std::nullopt;
      st = step.state;
    }
    state_out = st;
    return st.c_value;
  };

  const int nd = config.degrees[0];
  if (2.0 * nd >= config.tau) {
    throw InfeasibleError("no gravitating vortex: existence requires N < tau/2");
  }
  const auto aut = bundle::classify_automorphisms(bundle::Divisor::of_monomial(nd, config.exponents[0]));
  if (aut.obstruction) {
    throw ObstructedError(
        "If φ has only one zero, then there are no solutions of the gravitating vortex equations "
        "with alpha > 0: Aut(P^1, O(N), φ) is the non-reductive Borel group C* x C");
  }

  double a0 = options.alpha0, a1 = options.alpha1;
  GravitatingState s0, s1;
  const auto c0 = solve_at(a0, s0);
  if (c0) {
    anchor = s0;
    anchor_alpha = a0;
    have_anchor = true;
  }
  const auto c1 = solve_at(a1, s1);
  if (!c0 || !c1) {
    res.message = "secant start failed: no converged state at one of the starting couplings";
    if (c0) res.trace.emplace_back(a0, *c0);
    if (c1) res.trace.emplace_back(a1, *c1);
    return res;
  }
  res.trace.emplace_back(a0, *c0);
  res.trace.emplace_back(a1, *c1);
  double f0 = *c0, f1 = *c1;
  if (std::abs(f1) <= options.tolerance) {
    res.converged = true;
    res.alpha_star = a1;
    res.c_at_alpha_star = f1;
    res.state = s1;
  }
  anchor = s1;
  anchor_alpha = a1;
  for (int it = 0; it < options.max_iter && !res.converged; ++it) {
    res.iterations = it + 1;
    if (f1 == f0) {
      res.message = "secant failure: equal c values at alpha = " + std::to_string(a0) + " and " +
                    std::to_string(a1) + " (c = " + std::to_string(f0) + ", " + std::to_string(f1) + ")";
      return res;
    }
    const double a2 = a1 - f1 * (a1 - a0) / (f1 - f0);
    GravitatingState s2;
    const auto c2 = solve_at(a2, s2);
    if (!c2) {
      res.message = "secant failure: no converged state at alpha = " + std::to_string(a2) +
                    "; endpoint values c(" + std::to_string(a0) + ") = " + std::to_string(f0) +
                    ", c(" + std::to_string(a1) + ") = " + std::to_string(f1);
      return res;
    }
    res.trace.emplace_back(a2, *c2);
    a0 = a1;
    f0 = f1;
    a1 = a2;
    f1 = *c2;
    if (a2 >= anchor_alpha) {
      anchor = s2;
      anchor_alpha = a2;
    }
    if (std::abs(f1) <= options.tolerance) {
      res.converged = true;
      res.alpha_star = a1;
      res.c_at_alpha_star = f1;
      res.state = s2;
    }
  }
  if (!res.converged && res.message.empty()) res.message = "secant iteration limit reached";
  res.alpha_tau_n = res.alpha_star * tn;
  return res;
}

GeneralResiduals kymh_general_residual(const AxisymGrid& grid, const GravitatingState& state,
                                       const bundle::HiggsConfig& config) {
  require_abelian(config);
  require_state(grid, state);
  using cd = std::complex<double>;
  const cd i(0.0, 1.0);
  const double a = state.alpha;
  const double scale = a != 0.0 ? a : 1.0;
  const Field f = vortex::curvature(grid, state.metric, state.bundle.v[0], config.degrees[0]);
  const Field p = vortex::higgs_norm(grid, state.bundle.v[0], config.degrees[0], config.exponents[0]);
  const cd z = -i * scale * config.tau / 2.0;       // central element of the first equation
  const cd z_unit = -i * config.tau / 2.0;          // its normalization in the pairing term
  auto pairing = [](cd x, cd y) { return x.imag() * y.imag(); };  // (i a, i b) = a b

  GeneralResiduals out;
  out.r1.resize(f.size());
  Field ham(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const cd lambda_f = -i * f[k];  // Lambda F_H, an imaginary function
    const cd mu = -0.5 * i * p[k];  // phi^* mu for mu(x) = -(i/2)|x|^2
    const cd eq1 = scale * lambda_f + scale * mu - z;
    out.r1[k] = (i * eq1).real() / scale;
    // The Delta term acts on the Hamiltonian 2 i phi^* mu = |phi|^2_H.
    ham[k] = (2.0 * i * mu).real();
  }
  const Field lap_h = geometry::laplacian(grid, state.metric, ham);
  const auto curv = geometry::scalar_curvature(grid, state.metric);
  Field lhs2(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    lhs2[k] = curv.s_field[k] + a * lap_h[k] - 4.0 * a * pairing(-i * f[k], z_unit);
  }
  out.c_prime = geometry::integrate(grid, state.metric, lhs2) / geometry::volume(grid, state.metric);
  out.r2.resize(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) out.r2[k] = lhs2[k] - out.c_prime;
  return out;
}

}  // namespace kymh::gravitating
