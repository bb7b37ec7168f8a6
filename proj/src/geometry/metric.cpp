#include "kymh/errors.hpp"
#include "kymh/geometry.hpp"
#include "kymh/kernels.hpp"

namespace kymh::geometry {

namespace {

Field conformal_density(std::span<const double> u) {
  Field w(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) w[i] = std::exp(2.0 * u[i]);
  return w;
}

}  // namespace

ConformalMetric round_metric(const AxisymGrid& grid) {
  return ConformalMetric{Field(static_cast<std::size_t>(grid.size()), 0.0), kTwoPi};
}

ConformalMetric normalize_volume(const AxisymGrid& grid, std::span<const double> u_raw,
                                 double vol_target) {
  require_finite(u_raw, "u_raw");
  const double vol = std::numbers::pi * grid.quadrature(conformal_density(u_raw));
  const double shift = 0.5 * std::log(vol_target / vol);
  ConformalMetric out{Field(u_raw.begin(), u_raw.end()), vol_target};
  for (double& x : out.u) x += shift;
  return out;
}

double volume(const AxisymGrid& grid, const ConformalMetric& metric) {
  return std::numbers::pi * grid.quadrature(conformal_density(metric.u));
}

double integrate(const AxisymGrid& grid, const ConformalMetric& metric, std::span<const double> f) {
  require_finite(f, "integrand");
  Field g = conformal_density(metric.u);
  kernels::hadamard(g, f, g);
  return std::numbers::pi * grid.quadrature(g);
}

double integrate_round(const AxisymGrid& grid, std::span<const double> f) {
  require_finite(f, "integrand");
  return std::numbers::pi * grid.quadrature(f);
}

Field laplacian(const AxisymGrid& grid, std::span<const double> f) {
  require_finite(f, "f");
  return grid.apply_laplacian_round(f);
}

Field laplacian(const AxisymGrid& grid, const ConformalMetric& metric, std::span<const double> f) {
  Field out = laplacian(grid, f);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::exp(-2.0 * metric.u[i]);
  return out;
}

CurvatureReport scalar_curvature(const AxisymGrid& grid, const ConformalMetric& metric) {
  require_finite(metric.u, "u");
  const Field lap_u = grid.apply_laplacian_round(metric.u);
  CurvatureReport rep;
  rep.s_field.resize(lap_u.size());
  // S omega = (4 + 2 Delta_FS u) omega_FS, so the total needs no exp factors.
  Field density(lap_u.size());
  for (std::size_t i = 0; i < lap_u.size(); ++i) {
    density[i] = 4.0 + 2.0 * lap_u[i];
    rep.s_field[i] = std::exp(-2.0 * metric.u[i]) * density[i];
  }
  rep.total = integrate_round(grid, density);
  rep.mean = rep.total / volume(grid, metric);
  return rep;
}

}  // namespace kymh::geometry
