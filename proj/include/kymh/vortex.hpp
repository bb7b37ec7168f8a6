#pragma once
// Abelian vortex equation i Lambda_omega F_H + (|phi|^2_H - tau)/2 = 0 on
// O(N) at a fixed conformal metric, and the rank-2 residual for split
// O(N1) + O(N2) with an S^1-equivariant Hermitian metric.

#include "kymh/bundle_fields.hpp"
#include "kymh/geometry.hpp"

#include <Eigen/Core>

#include <vector>

namespace kymh::vortex {

/// H_j = H_FS(N_j) exp(2 v_j), one potential per bundle component.
struct BundleMetricPotential {
  std::vector<Field> v;
};

struct NewtonOptions {
  double tolerance = 1e-10;
  int max_iter = 50;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double residual_sup = 0.0;
  int resolution = 0;
  std::vector<double> history;  // residual sup norm before each step, then final
};

/// i Lambda_omega F of H_FS(N) exp(2v): exp(-2u) (N + Delta_FS v).
Field curvature(const geometry::AxisymGrid& grid, const geometry::ConformalMetric& metric,
                std::span<const double> v, int degree);

/// |phi|^2_H = exp(2v) |phi|^2_FS.
Field higgs_norm(const geometry::AxisymGrid& grid, std::span<const double> v, int degree,
                 int exponent);

/// integral of i Lambda_omega F_H against omega; 2 pi N for every (u, v).
double chern_integral(const geometry::AxisymGrid& grid, const geometry::ConformalMetric& metric,
                      std::span<const double> v, int degree);

/// R1 = i Lambda_omega F_H + (|phi|^2_H - tau) / 2. Abelian configs only.
Field vortex_residual(const geometry::AxisymGrid& grid, const geometry::ConformalMetric& metric,
                      std::span<const double> v, const bundle::HiggsConfig& config);
Field vortex_residual(const geometry::AxisymGrid& grid, const geometry::ConformalMetric& metric,
                      const BundleMetricPotential& h, const bundle::HiggsConfig& config);

struct VortexSolution {
  BundleMetricPotential bundle;
  SolveReport report;
};

/// Damped Newton on v. Throws InfeasibleError when N >= tau/2. A stalled
/// iteration comes back with converged = false and the last iterate.
VortexSolution solve_vortex(const geometry::AxisymGrid& grid,
                            const geometry::ConformalMetric& metric,
                            const bundle::HiggsConfig& config, const NewtonOptions& options = {},
                            const Field* initial = nullptr);

/// Equivariant metric on O(N1) + O(N2). In the holomorphic frame of the
/// affine chart, H_jj = exp(2 v_j) H_FS(N_j) and
/// H_12 = offdiag(s) sqrt(H_FS(N1) H_FS(N2)) exp(i k theta), k = l1 - l2.
/// offdiag must keep exp(v1 + v2) > |offdiag| everywhere.
struct EquivariantMetric {
  Field v1;
  Field v2;
  Field offdiag;  // empty means diagonal
};

struct NonabelianResidual {
  /// Residual endomorphism at theta = 0 in an H-orthonormal frame, per node.
  std::vector<Eigen::Matrix2d> residual;
  /// Fourier weight of the (1,2) entry in theta.
  int offdiag_weight = 0;
  double trace_integral = 0.0;
  /// 2 pi (N1 + N2) + (1/2) int (|phi1|^2 + |phi2|^2) omega - 2 pi tau.
  double trace_expected = 0.0;
};

/// i Lambda_omega F_H + (1/2) phi (x) phi^{*H} - (tau/2) Id. `higgs_scale`
/// multiplies each component of phi (0 switches a component off).
NonabelianResidual nonabelian_residual(const geometry::AxisymGrid& grid,
                                       const geometry::ConformalMetric& metric,
                                       const EquivariantMetric& h,
                                       const bundle::HiggsConfig& config,
                                       std::array<double, 2> higgs_scale = {1.0, 1.0});

/// Curvature endomorphism i Lambda_omega F_H alone for an off-diagonal weight
/// k, in the frame e_j / |e_j|_FS at theta = 0. That frame is not unitary, so
/// the matrices are not symmetric; their spectra are frame independent.
std::vector<Eigen::Matrix2d> equivariant_curvature(const geometry::AxisymGrid& grid,
                                                   const geometry::ConformalMetric& metric,
                                                   const EquivariantMetric& h, int n1, int n2,
                                                   int k);

}  // namespace kymh::vortex
