#pragma once
// Axisymmetric discretization of the round sphere.
//
// Fields are functions of s = (|w|^2 - 1)/(|w|^2 + 1) in [-1, 1], sampled at
// Chebyshev-Gauss-Lobatto nodes ordered from the pole w = 0 (s = -1) to the
// pole w = infinity (s = +1). The reference Kahler form is the Fubini-Study
// form of total area 2*pi, which in these coordinates reads (1/2) ds ^ dtheta.
// A conformal metric is omega = exp(2u) omega_FS.
//
// Laplacian convention: Delta = 2 i Lambda dbar d, the non-negative operator.
// On the round metric Delta f = -2 d/ds((1 - s^2) df/ds).

#include <Eigen/Core>

#include <cmath>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

namespace kymh {

/// Nodal values of an axisymmetric function.
using Field = std::vector<double>;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace kymh

namespace kymh::geometry {

inline constexpr int kMinNodes = 33;
inline constexpr int kMaxNodes = 4097;

/// Immutable collocation grid. Copies share the operator storage.
class AxisymGrid {
 public:
  /// Throws ConfigError unless n is odd and 33 <= n <= 4097.
  static AxisymGrid build(int n);

  int size() const { return n_; }
  std::span<const double> nodes() const { return data_->nodes; }
  double node(int j) const { return data_->nodes[static_cast<std::size_t>(j)]; }
  /// Clenshaw-Curtis weights on [-1, 1].
  std::span<const double> weights() const { return data_->weights; }
  const RowMatrix& d1() const { return data_->d1; }
  const RowMatrix& d2() const { return data_->d2; }
  /// Round-metric Laplacian -2 [(1 - s^2) D2 - 2 s D1].
  const RowMatrix& laplacian_round() const { return data_->lap; }

  Field apply_d1(std::span<const double> f) const;
  Field apply_d2(std::span<const double> f) const;
  Field apply_laplacian_round(std::span<const double> f) const;

  /// Integral over [-1, 1] with the Clenshaw-Curtis rule.
  double quadrature(std::span<const double> f) const;

  /// Nodal values of s -> integral_{-1}^{s} f of the degree n-1 interpolant.
  Field cumulative_integral(std::span<const double> f) const;

  /// Barycentric evaluation of the interpolant at arbitrary points in [-1, 1].
  Field interpolate(std::span<const double> f, std::span<const double> points) const;

  /// Values at s = -1 and s = +1 extrapolated from the interior nodes only.
  /// Used where a formula is singular at the poles but its limit is smooth.
  std::pair<double, double> extrapolate_to_poles(std::span<const double> f) const;

 private:
  struct Data {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> cos_table;  // cos(pi m / N), m = 0..2N-1
    RowMatrix d1;
    RowMatrix d2;
    RowMatrix lap;
  };
  AxisymGrid(int n, std::shared_ptr<const Data> data) : n_(n), data_(std::move(data)) {}

  int n_ = 0;
  std::shared_ptr<const Data> data_;
};

/// Log-conformal factor u with omega = exp(2u) omega_FS.
struct ConformalMetric {
  Field u;
  double vol_target = kTwoPi;
};

/// omega_FS itself (u = 0), volume 2*pi.
ConformalMetric round_metric(const AxisymGrid& grid);

/// u = u_raw + const with the requested total volume. Idempotent.
ConformalMetric normalize_volume(const AxisymGrid& grid, std::span<const double> u_raw,
                                 double vol_target = kTwoPi);

/// Total volume of exp(2u) omega_FS.
double volume(const AxisymGrid& grid, const ConformalMetric& metric);

/// integral of f against omega.
double integrate(const AxisymGrid& grid, const ConformalMetric& metric, std::span<const double> f);

/// integral of f against omega_FS.
double integrate_round(const AxisymGrid& grid, std::span<const double> f);

/// Delta_omega f = exp(-2u) Delta_FS f.
Field laplacian(const AxisymGrid& grid, const ConformalMetric& metric, std::span<const double> f);
Field laplacian(const AxisymGrid& grid, std::span<const double> f);

struct CurvatureReport {
  Field s_field;
  double total = 0.0;
  double mean = 0.0;
};

/// Riemannian scalar curvature S = exp(-2u) (4 + 2 Delta_FS u); the round
/// sphere of area 2*pi has S = 4 and every metric integrates to 8*pi.
CurvatureReport scalar_curvature(const AxisymGrid& grid, const ConformalMetric& metric);

/// Evaluate an analytic profile at the grid nodes.
template <class F>
Field sample(const AxisymGrid& grid, F&& fn) {
  Field out(static_cast<std::size_t>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) out[static_cast<std::size_t>(j)] = fn(grid.node(j));
  return out;
}

/// Throws NumericInputError naming `what` if any entry is not finite.
void require_finite(std::span<const double> f, const char* what);

}  // namespace kymh::geometry
