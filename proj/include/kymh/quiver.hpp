#pragma once
// Quiver bundles over the sphere and the gravitating quiver vortex equations
//   sigma_i i Lambda F_{H_i} + [phi, phi^*]_i = tau_i Id,
//   S + 2 rho sum_a (Delta + 2 (tau_ha/sigma_ha - tau_ta/sigma_ta)) |phi_a|^2 = c
// (the Lambda^2 Tr F^2 term vanishes on a curve).

#include "kymh/geometry.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace kymh::quiver {

struct Arrow {
  std::string id;
  int tail = 0;  // vertex index
  int head = 0;
  /// Section x0^(d-l) x1^l of O(d), d = d_head - d_tail; nullopt is the zero map.
  std::optional<int> exponent;
  double coefficient = 1.0;

  bool operator==(const Arrow&) const = default;
};

struct Quiver {
  std::vector<std::string> vertices;
  std::vector<Arrow> arrows;

  int vertex_index(const std::string& id) const;  // throws ModelError

  bool operator==(const Quiver&) const = default;
};

struct QuiverBundleSpec {
  Quiver quiver;
  std::vector<int> ranks;
  std::vector<int> degrees;
  double rho = 1.0;
  std::vector<double> sigma;
  std::vector<double> tau;

  int vertex_count() const { return static_cast<int>(quiver.vertices.size()); }
  /// Throws ModelError (structure) or ConfigError (parameters).
  void validate() const;

  bool operator==(const QuiverBundleSpec&) const = default;
};

using CMatrix = Eigen::MatrixXcd;

/// Metrics and arrow matrices at one point, in arbitrary frames.
struct PointData {
  std::vector<CMatrix> metrics;  // H_i, r_i x r_i Hermitian positive definite
  std::vector<CMatrix> maps;     // phi_a, r_head x r_tail
};

/// [phi, phi^*H]_i per vertex, expressed in an H_i-orthonormal frame (so each
/// matrix is Hermitian). phi_a^* = H_t^-1 phi_a^dagger H_h.
std::vector<CMatrix> commutator(const QuiverBundleSpec& spec, const PointData& data);

/// |phi_a|^2_H = Tr(phi_a phi_a^*).
double arrow_norm(const PointData& data, const QuiverBundleSpec& spec, int arrow);

/// Rank-1 analytic data: H_i = H_FS(d_i) exp(2 v_i).
struct QuiverPotentials {
  std::vector<Field> v;
};

QuiverPotentials zero_potentials(const geometry::AxisymGrid& grid, const QuiverBundleSpec& spec);

/// |phi_a|^2 on the grid for rank-1 vertices.
std::vector<Field> arrow_norms(const geometry::AxisymGrid& grid, const QuiverBundleSpec& spec,
                               const QuiverPotentials& h);

struct QuiverResidual {
  std::vector<Field> vertex;  // 1a residual per vertex
  Field scalar;               // 1b residual, mean-projected
  double c_mean = 0.0;        // omega-mean of the 1b left side
  double c_identity = 0.0;    // from the topological formula
};

/// Throws UnsupportedRankError unless every rank is 1.
QuiverResidual quiver_vortex_residual(const geometry::AxisymGrid& grid,
                                      const geometry::ConformalMetric& metric,
                                      const QuiverBundleSpec& spec, const QuiverPotentials& h);

struct TraceIdentityReport {
  double lhs = 0.0;     // int sum_a (tau_h/sigma_h - tau_t/sigma_t) |phi_a|^2
  double middle = 0.0;  // int sum_i (tau_i/sigma_i) Tr[phi, phi^*]_i
  double rhs = 0.0;     // int sum_i (tau_i^2 r_i/sigma_i - tau_i Tr i Lambda F_i)
  double defect = 0.0;  // lhs - rhs
  double scale = 0.0;   // sum of absolute values of the terms
};

/// Identity check from grid fields: per-arrow |phi_a|^2 and per-vertex
/// Tr i Lambda F_i. The defect equals int sum_i (tau_i/sigma_i) Tr(1a residual).
TraceIdentityReport trace_identity_check(const geometry::AxisymGrid& grid,
                                         const geometry::ConformalMetric& metric,
                                         const QuiverBundleSpec& spec,
                                         const std::vector<Field>& arrow_norm_fields,
                                         const std::vector<Field>& curvature_traces);

/// Same check with the curvature computed from rank-1 potentials.
TraceIdentityReport trace_identity_check(const geometry::AxisymGrid& grid,
                                         const geometry::ConformalMetric& metric,
                                         const QuiverBundleSpec& spec, const QuiverPotentials& h);

/// Curvature traces that satisfy 1a exactly: Tr (tau_i Id - [phi,phi^*]_i)/sigma_i.
std::vector<Field> synthetic_curvature_traces(const QuiverBundleSpec& spec,
                                              const std::vector<Field>& arrow_norm_fields);

struct ReductionInputs {
  std::vector<int> multiplicities;    // dim M_lambda
  std::vector<double> vertex_slopes;  // mu_eps(O_lambda)
  double global_slope = 0.0;          // mu(E~)

  bool operator==(const ReductionInputs&) const = default;
};

struct ReductionParams {
  std::vector<double> sigma;
  std::vector<double> tau;
};

ReductionParams reduction_parameters(const ReductionInputs& in);

/// Normalized slope (1/Vol)(1/r) int Tr(i F) of a bundle of degree d and
/// rank r on the sphere of volume vol: 2 pi d / (vol r).
double slope(int degree, int rank, double vol = kTwoPi);

struct ConstantInputs {
  double volume = kTwoPi;
  double ricci_integral = 2.0 * kTwoPi;  // int rho_omega (omega^(n-1)/(n-1)!), 4 pi on the sphere
  std::vector<double> trace_f2_integrals;  // empty on a curve
  std::vector<double> slopes;              // mu_omega(E_i)
};

/// c Vol = 2 int rho - 4 rho sum sigma_i int Tr F_i^2 + 4 rho Vol sum (tau_i/sigma_i - mu_i) tau_i r_i.
double constant_c(const QuiverBundleSpec& spec, const ConstantInputs& in);

}  // namespace kymh::quiver
