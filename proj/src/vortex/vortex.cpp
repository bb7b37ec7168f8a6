#include "kymh/vortex.hpp"

#include "kymh/errors.hpp"
#include "kymh/kernels.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace kymh::vortex {

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
  if (!config.abelian()) throw WrongRankError("the abelian vortex equation needs a single degree");
}

void require_size(const AxisymGrid& grid, std::span<const double> f, const char* what) {
  if (static_cast<int>(f.size()) != grid.size()) {
    throw NumericInputError(std::string(what) + " has the wrong number of nodes");
  }
  geometry::require_finite(f, what);
}

}  // namespace

Field curvature(const AxisymGrid& grid, const ConformalMetric& metric, std::span<const double> v,
                int degree) {
  require_size(grid, v, "v");
  Field out = grid.apply_laplacian_round(v);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::exp(-2.0 * metric.u[i]) * (degree + out[i]);
  }
  return out;
}

Field higgs_norm(const AxisymGrid& grid, std::span<const double> v, int degree, int exponent) {
  Field out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(2.0 * v[i]) * bundle::higgs_norm_fs(degree, exponent, grid.node(static_cast<int>(i)));
  }
  return out;
}

double chern_integral(const AxisymGrid& grid, const ConformalMetric& metric, std::span<const double> v,
                      int degree) {
  return geometry::integrate(grid, metric, curvature(grid, metric, v, degree));
}

Field vortex_residual(const AxisymGrid& grid, const ConformalMetric& metric, std::span<const double> v,
                      const bundle::HiggsConfig& config) {
  require_abelian(config);
  require_size(grid, metric.u, "u");
  const int n_deg = config.degrees[0];
  Field r = curvature(grid, metric, v, n_deg);
  const Field p = higgs_norm(grid, v, n_deg, config.exponents[0]);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += 0.5 * (p[i] - config.tau);
  return r;
}

Field vortex_residual(const AxisymGrid& grid, const ConformalMetric& metric,
                      const BundleMetricPotential& h, const bundle::HiggsConfig& config) {
  if (h.v.size() != 1) throw WrongRankError("the abelian vortex equation needs one potential");
  return vortex_residual(grid, metric, h.v[0], config);
}

VortexSolution solve_vortex(const AxisymGrid& grid, const ConformalMetric& metric,
                            const bundle::HiggsConfig& config, const NewtonOptions& options,
                            const Field* initial) {
  require_abelian(config);
  const int n_deg = config.degrees[0];
  if (2.0 * n_deg >= config.tau) {
    throw InfeasibleError("no vortex solution: existence requires N < tau/2 (N = " +
                          std::to_string(n_deg) + ", tau/2 = " + std::to_string(config.tau / 2) + ")");
  }
  const int n = grid.size();
  Field v = initial ? *initial : Field(static_cast<std::size_t>(n), 0.0);
  require_size(grid, v, "initial v");

  const RowMatrix& lap = grid.laplacian_round();
  Eigen::VectorXd inv_conf(n);
  for (int i = 0; i < n; ++i) inv_conf[i] = std::exp(-2.0 * metric.u[static_cast<std::size_t>(i)]);

  VortexSolution sol;
  SolveReport& rep = sol.report;
  rep.resolution = n;
  Field r = vortex_residual(grid, metric, v, config);
  double norm = sup_norm(r);

  for (int it = 0; it < options.max_iter && norm > options.tolerance; ++it) {
    rep.history.push_back(norm);
    const Field p = higgs_norm(grid, v, n_deg, config.exponents[0]);
    Eigen::MatrixXd jac = inv_conf.asDiagonal() * lap;
    for (int i = 0; i < n; ++i) jac(i, i) += p[static_cast<std::size_t>(i)];
    const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(r.data(), n);
    const Eigen::VectorXd step = jac.partialPivLu().solve(rhs);

    double lambda = 1.0;
    bool accepted = false;
    for (int half = 0; half < 30; ++half, lambda *= 0.5) {
      Field trial = v;
      for (int i = 0; i < n; ++i) trial[static_cast<std::size_t>(i)] -= lambda * step[i];
      bool finite = true;
      for (double x : trial) finite = finite && std::isfinite(x) && std::abs(x) < 300.0;
      if (!finite) continue;
      Field tr = vortex_residual(grid, metric, trial, config);
      const double tn = sup_norm(tr);
      if (tn < norm) {
        v = std::move(trial);
        r = std::move(tr);
        norm = tn;
        accepted = true;
        break;
      }
    }
    rep.iterations = it + 1;
    if (!accepted) break;
  }
  rep.history.push_back(norm);
  rep.residual_sup = norm;
  rep.converged = norm <= options.tolerance;
  sol.bundle.v = {std::move(v)};
  return sol;
}

std::vector<Eigen::Matrix2d> equivariant_curvature(const AxisymGrid& grid, const ConformalMetric& metric,
                                                   const EquivariantMetric& h, int n1, int n2, int k) {
  require_size(grid, h.v1, "v1");
  require_size(grid, h.v2, "v2");
  const bool diagonal = h.offdiag.empty() || sup_norm(h.offdiag) == 0.0;
  if (!h.offdiag.empty()) require_size(grid, h.offdiag, "offdiag");
  const int n = grid.size();
  std::vector<Eigen::Matrix2d> out(static_cast<std::size_t>(n), Eigen::Matrix2d::Zero());

  if (diagonal) {
    const Field f1 = curvature(grid, metric, h.v1, n1);
    const Field f2 = curvature(grid, metric, h.v2, n2);
    for (int i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)].diagonal() << f1[static_cast<std::size_t>(i)], f2[static_cast<std::size_t>(i)];
    }
    return out;
  }

  // Work in the frame e_j / |e_j|_FS where the metric is the smooth matrix g.
  // With Lambda = diag(T log |e_j|_FS), K = diag(k/2, -k/2) and T = (1 - s^2) d/ds,
  //   B = g^-1 (Lambda g + T g + g Lambda + [K, g]),
  //   i Lambda_FS F = -(T B + [B, Lambda] - [K, B]) / (1 - s^2).
  Field g11(static_cast<std::size_t>(n)), g22(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    g11[static_cast<std::size_t>(i)] = std::exp(2.0 * h.v1[static_cast<std::size_t>(i)]);
    g22[static_cast<std::size_t>(i)] = std::exp(2.0 * h.v2[static_cast<std::size_t>(i)]);
  }
  const std::array<Field, 3> gcomp{g11, h.offdiag, g22};
  std::array<Field, 3> dg;
  for (int c = 0; c < 3; ++c) dg[static_cast<std::size_t>(c)] = grid.apply_d1(gcomp[static_cast<std::size_t>(c)]);

  const Eigen::Matrix2d kmat = Eigen::Vector2d(0.5 * k, -0.5 * k).asDiagonal();
  std::array<Field, 4> bcomp;
  for (auto& f : bcomp) f.resize(static_cast<std::size_t>(n));
  std::vector<Eigen::Matrix2d> lam(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    const double s = grid.node(i);
    const double t = (1.0 - s) * (1.0 + s);
    Eigen::Matrix2d g;
    g << gcomp[0][iu], gcomp[1][iu], gcomp[1][iu], gcomp[2][iu];
    Eigen::Matrix2d tg;
    tg << t * dg[0][iu], t * dg[1][iu], t * dg[1][iu], t * dg[2][iu];
    lam[iu] = Eigen::Vector2d(-0.5 * n1 * (1.0 + s), -0.5 * n2 * (1.0 + s)).asDiagonal();
    const Eigen::Matrix2d b =
        g.inverse() * (lam[iu] * g + tg + g * lam[iu] + (kmat * g - g * kmat));
    bcomp[0][iu] = b(0, 0);
    bcomp[1][iu] = b(0, 1);
    bcomp[2][iu] = b(1, 0);
    bcomp[3][iu] = b(1, 1);
  }
  std::array<Field, 4> db;
  for (int c = 0; c < 4; ++c) db[static_cast<std::size_t>(c)] = grid.apply_d1(bcomp[static_cast<std::size_t>(c)]);

  std::array<Field, 4> curv;
  for (auto& f : curv) f.resize(static_cast<std::size_t>(n));
  for (int i = 1; i < n - 1; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    const double s = grid.node(i);
    const double t = (1.0 - s) * (1.0 + s);
    Eigen::Matrix2d b;
    b << bcomp[0][iu], bcomp[1][iu], bcomp[2][iu], bcomp[3][iu];
    Eigen::Matrix2d tb;
    tb << t * db[0][iu], t * db[1][iu], t * db[2][iu], t * db[3][iu];
    const Eigen::Matrix2d x = tb + (b * lam[iu] - lam[iu] * b) - (kmat * b - b * kmat);
    const Eigen::Matrix2d y = -x / t;
    curv[0][iu] = y(0, 0);
    curv[1][iu] = y(0, 1);
    curv[2][iu] = y(1, 0);
    curv[3][iu] = y(1, 1);
  }
  for (auto& f : curv) {
    const auto [lo, hi] = grid.extrapolate_to_poles(f);
    f.front() = lo;
    f.back() = hi;
  }
  for (int i = 0; i < n; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    out[iu] << curv[0][iu], curv[1][iu], curv[2][iu], curv[3][iu];
    out[iu] *= std::exp(-2.0 * metric.u[iu]);
  }
  return out;
}

NonabelianResidual nonabelian_residual(const AxisymGrid& grid, const ConformalMetric& metric,
                                       const EquivariantMetric& h, const bundle::HiggsConfig& config,
                                       std::array<double, 2> higgs_scale) {
  config.validate();
  if (config.rank() != 2) throw WrongRankError("the non-abelian vortex equation needs two degrees");
  require_size(grid, metric.u, "u");
  const int n1 = config.degrees[0], n2 = config.degrees[1];
  const int l1 = config.exponents[0], l2 = config.exponents[1];
  const int k = l1 - l2;
  const auto curv = equivariant_curvature(grid, metric, h, n1, n2, k);

  const int n = grid.size();
  NonabelianResidual out;
  out.offdiag_weight = k;
  out.residual.resize(static_cast<std::size_t>(n));
  Field trace(static_cast<std::size_t>(n)), phi_norm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    const double s = grid.node(i);
    const double q = h.offdiag.empty() ? 0.0 : h.offdiag[iu];
    Eigen::Matrix2d g;
    g << std::exp(2.0 * h.v1[iu]), q, q, std::exp(2.0 * h.v2[iu]);
    const Eigen::Vector2d phi(higgs_scale[0] * std::sqrt(bundle::higgs_norm_fs(n1, l1, s)),
                              higgs_scale[1] * std::sqrt(bundle::higgs_norm_fs(n2, l2, s)));
    const Eigen::Matrix2d endo = curv[iu] + 0.5 * phi * phi.transpose() * g -
                                 0.5 * config.tau * Eigen::Matrix2d::Identity();
    // Orthonormal coordinates z with x = L^-T z, g = L L^T.
    const Eigen::LLT<Eigen::Matrix2d> llt(g);
    if (llt.info() != Eigen::Success) throw NumericInputError("H is not positive definite");
    const Eigen::Matrix2d l = llt.matrixL();
    const Eigen::Matrix2d r = l.transpose() * endo * l.transpose().inverse();
    out.residual[iu] = r;
    trace[iu] = endo.trace();
    phi_norm[iu] = phi.dot(g * phi);
  }
  out.trace_integral = geometry::integrate(grid, metric, trace);
  out.trace_expected = kTwoPi * (n1 + n2) + 0.5 * geometry::integrate(grid, metric, phi_norm) -
                       kTwoPi * config.tau;
  return out;
}

}  // namespace kymh::vortex
