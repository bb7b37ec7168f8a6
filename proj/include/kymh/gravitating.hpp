#pragma once
// Gravitating vortex equations on the sphere
//   i Lambda_omega F_H + (|phi|^2_H - tau)/2 = 0,
//   S_omega + alpha (Delta_omega + tau)(|phi|^2_H - tau) = c,
// solved by Newton continuation in alpha, plus the c = 0 search.

#include "kymh/bundle_fields.hpp"
#include "kymh/geometry.hpp"
#include "kymh/vortex.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kymh::gravitating {

struct GravitatingState {
  geometry::ConformalMetric metric;
  vortex::BundleMetricPotential bundle;
  double c_value = 0.0;
  double alpha = 0.0;
};

struct ContinuationSchedule {
  std::vector<double> alphas{0.0};
  vortex::NewtonOptions newton{1e-10, 50};

  /// Throws ConfigError unless strictly increasing from 0.
  void validate() const;
  /// 0 = a_0 < ... < a_m = alpha with steps no larger than max_step.
  static ContinuationSchedule uniform(double alpha, double max_step = 0.05);
};

struct Residuals {
  Field r1;
  Field r2;           // mean-projected, so integral of r2 against omega is 0
  double c_est = 0.0;  // omega-mean of the left side of the metric equation
};

Residuals gravitating_residual(const geometry::AxisymGrid& grid, const GravitatingState& state,
                               const bundle::HiggsConfig& config);

/// c from integrating the metric equation:
/// c Vol = int S omega + alpha tau (int |phi|^2_H omega - tau Vol).
double identity_constant(const geometry::AxisymGrid& grid, const GravitatingState& state,
                         const bundle::HiggsConfig& config);

/// Closed form of the same constant when the vortex equation holds:
/// 4 - 2 alpha tau N on the area-2pi sphere.
double topological_constant(const bundle::HiggsConfig& config);

/// The value printed in the literature for the same constant, 2 - 2 alpha tau N,
/// kept for side-by-side reporting.
double literature_constant(const bundle::HiggsConfig& config);

struct StepRecord {
  double alpha = 0.0;
  vortex::SolveReport report;
  double c_est = 0.0;
  double c_identity = 0.0;
  double r1_sup = 0.0;
  double r2_sup = 0.0;
  double kernel_multiplier = 0.0;
};

struct ContinuationResult {
  GravitatingState state;  // last converged state
  vortex::SolveReport report;
  std::vector<StepRecord> history;
  bool obstruction_overridden = false;
};

struct SolveOptions {
  bool override_obstruction = false;
  const GravitatingState* initial = nullptr;
};

/// Natural continuation over the schedule. Throws InfeasibleError outside
/// N < tau/2 and ObstructedError for a single-zero Higgs field (unless
/// overridden) before any Newton step is taken.
ContinuationResult solve_gravitating(const bundle::HiggsConfig& config,
                                     const ContinuationSchedule& schedule,
                                     const geometry::AxisymGrid& grid,
                                     const SolveOptions& options = {});

/// One Newton solve at fixed alpha (config.alpha) from `start`.
ContinuationResult newton_at(const bundle::HiggsConfig& config, const geometry::AxisymGrid& grid,
                             const GravitatingState& start, const vortex::NewtonOptions& newton);

struct SecantOptions {
  double alpha0 = 0.0;
  double alpha1 = 0.05;
  double tolerance = 1e-8;
  int max_iter = 30;
  double max_step = 0.05;
  vortex::NewtonOptions newton{1e-10, 50};
};

struct EinsteinBogomolnyiResult {
  bool converged = false;
  double alpha_star = 0.0;
  double c_at_alpha_star = 0.0;
  double alpha_tau_n = 0.0;
  double literature_prediction = 1.0;   // alpha tau N from c = 2 - 2 alpha tau N
  double conventions_prediction = 2.0;  // alpha tau N from c = 4 - 2 alpha tau N
  int iterations = 0;
  std::vector<std::pair<double, double>> trace;  // (alpha, c_est)
  std::string message;
  GravitatingState state;
};

/// Secant iteration on alpha for c_est(alpha) = 0; config.alpha is ignored.
EinsteinBogomolnyiResult einstein_bogomolnyi_solve(const bundle::HiggsConfig& config,
                                                   const geometry::AxisymGrid& grid,
                                                   const SecantOptions& options = {});

struct GeneralResiduals {
  Field r1;
  Field r2;
  double c_prime = 0.0;
};

/// The same system written as the moment-map equations
///   alpha Lambda F + alpha phi^* mu = z,  S + alpha Delta |phi^* mu|-terms = c'
/// with mu = -(i/2)|x|^2 on C and z = -i alpha tau / 2, after dividing the
/// first equation by alpha (or taking alpha = 1 when alpha = 0). The second
/// residual is S + alpha Delta |phi|^2_H - 2 alpha tau i Lambda F_H - c', which
/// differs from gravitating_residual's r2 by -2 alpha tau r1 plus a constant.
GeneralResiduals kymh_general_residual(const geometry::AxisymGrid& grid, const GravitatingState& state,
                                       const bundle::HiggsConfig& config);

}  // namespace kymh::gravitating
