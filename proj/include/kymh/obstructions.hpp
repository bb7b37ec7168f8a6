#pragma once
// Existence obstructions on the sphere: the Futaki character (closed form and
// quadrature), the rank-2 balancing condition, stability windows and the
// reductivity verdict.

#include "kymh/bundle_fields.hpp"
#include "kymh/geometry.hpp"
#include "kymh/rational.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kymh::obstructions {

/// Axisymmetric pair (omega, H) at which the Futaki integrals are evaluated:
/// omega = exp(2u) omega_FS, H_j = H_FS(N_j) exp(2 v_j).
struct FutakiInput {
  bundle::HiggsConfig config;
  Field u;
  std::vector<Field> v;
};

/// The Fubini-Study pair u = v_j = 0.
FutakiInput fubini_study_input(const geometry::AxisymGrid& grid, const bundle::HiggsConfig& config);

/// Imaginary part of 2 pi i alpha sum_j (2 N_j - tau)(2 l_j - N_j), rank 2.
double futaki_closed_form(const bundle::HiggsConfig& config);
/// The same value divided by 2 pi, exactly.
Rational futaki_closed_form_exact(const bundle::HiggsConfig& config, const Rational& tau,
                                  const Rational& alpha);

/// The single-summand value 2 pi alpha (2N - tau)(2l - N) for O(N); derived
/// here by evaluating the integrals at the Fubini-Study pair.
double abelian_futaki_closed_form(const bundle::HiggsConfig& config);

/// Quadrature of the Futaki integrals for the circle field fixing phi.
/// Works for one or two summands. Throws PreconditionError unless the ansatz
/// has volume 2 pi.
double futaki_quadrature(const geometry::AxisymGrid& grid, const FutakiInput& input);

struct RichardsonReport {
  std::vector<int> resolutions;
  std::vector<double> values;
  std::vector<double> differences;  // |value[k+1] - value[k]|
  double extrapolated = 0.0;
  bool certified = false;
  /// Differences under this are treated as converged to rounding.
  double floor = 0.0;
};

/// Abelian Futaki quadrature on n = 129, 257, 513. `ansatz(grid)` builds the
/// (u, v) pair at each resolution; the default is Fubini-Study.
RichardsonReport abelian_futaki_quadrature(
    const bundle::HiggsConfig& config,
    const std::function<FutakiInput(const geometry::AxisymGrid&)>& ansatz = {});

struct BalancingResult {
  Rational lhs;
  bool balanced = false;
};

/// (2l1 - N1)/(2N2 - tau) + (2l2 - N2)/(2N1 - tau). Throws PoleError if
/// tau = 2 N_j.
BalancingResult balancing_condition(const bundle::HiggsConfig& config, const Rational& tau);
BalancingResult balancing_condition(const bundle::HiggsConfig& config);

struct Window {
  Rational lower;
  Rational upper;
  bool holds = false;  // lower < tau/2 < upper
};

/// N2 < tau/2 < N1 + N2 - deg[phi] with deg[phi] from the exact gcd of the
/// two binary forms.
Window nonabelian_window(const bundle::HiggsConfig& config, const Rational& tau);
/// Same window with deg[phi] = min{l1,l2} + min{N1-l1, N2-l2}.
Window reduced_window(const bundle::HiggsConfig& config, const Rational& tau);

struct ZStability {
  bool stable = false;
  /// (deg V + tau)/rk V for V = O(N1) + O(N2) with phi spanning a line.
  Rational bound;
  struct Candidate {
    std::string name;
    Rational degree;
    int meets_phi = 0;  // rk(L cap V')
    Rational slope;     // (deg V' + tau rk(L cap V'))/rk V'
    bool violates = false;
  };
  std::vector<Candidate> candidates;
  std::optional<std::string> witness;
};

ZStability z_stability(const bundle::HiggsConfig& config, const Rational& tau);

struct StabilityReport {
  int rank = 1;
  std::optional<bool> abelian_window;
  std::optional<bool> nonabelian_window;
  std::optional<bool> reduced_window;
  std::optional<bool> z_stable;
  std::optional<std::string> z_witness;
  std::optional<bool> z_agrees_with_window;
  std::optional<bool> balanced;
  std::optional<std::string> balancing_lhs;
  std::optional<std::string> automorphisms;
  std::optional<bool> reductivity_obstruction;
  double futaki = 0.0;            // at the configured alpha
  double futaki_per_alpha = 0.0;  // coefficient of alpha
  bool futaki_exact_zero = true;
  /// Coupled (alpha > 0) equations: true when no predicate rules them out.
  bool admissible = false;
  std::vector<std::string> reasons;
};

/// Evaluates every predicate that applies to the configuration, in exact
/// arithmetic on tau (taken exactly from its double value unless given).
StabilityReport stability_check(const bundle::HiggsConfig& config);
StabilityReport stability_check(const bundle::HiggsConfig& config, const Rational& tau);

}  // namespace kymh::obstructions
