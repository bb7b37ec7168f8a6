#pragma once
// Higgs configurations on O(N) and O(N1) + O(N2) over the sphere, their
// Fubini-Study norms, divisors, and the automorphism classification that
// drives the reductivity obstruction.

#include "kymh/geometry.hpp"
#include "kymh/rational.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace kymh::bundle {

/// Monomial Higgs data phi_j = x0^(N_j - l_j) x1^(l_j) on O(N_j).
/// One entry is the abelian (line bundle) case, two entries the split rank-2
/// case with N1 <= N2.
struct HiggsConfig {
  std::vector<int> degrees;
  std::vector<int> exponents;
  double tau = 0.0;
  double alpha = 0.0;

  int rank() const { return static_cast<int>(degrees.size()); }
  bool abelian() const { return rank() == 1; }

  /// Imaginary part of the central element z = -i alpha tau / 2.
  double z_imag() const { return -0.5 * alpha * tau; }

  /// Throws ConfigError listing every violated constraint.
  void validate() const;

  bool operator==(const HiggsConfig&) const = default;
};

HiggsConfig abelian_config(int degree, int exponent, double tau, double alpha = 0.0);
HiggsConfig rank2_config(int n1, int n2, int l1, int l2, double tau, double alpha = 0.0);

/// |phi_j|^2_FS(s) = (1 + s)^l (1 - s)^(N - l) / 2^N.
double higgs_norm_fs(int degree, int exponent, double s);

/// Grid samples of |phi_j|^2_FS.
Field higgs_profile(const geometry::AxisymGrid& grid, const HiggsConfig& config, int component);

/// i Lambda F of the Fubini-Study metric on O(N) over the area-2pi sphere.
double background_curvature(int degree);
double background_curvature(const HiggsConfig& config, int component);

/// A point of P^1. Affine coordinate w = x1/x0; no affine value means [0:1].
struct Location {
  std::optional<std::complex<double>> affine;
  /// Non-empty when the point is a root of an irreducible-over-Q factor that
  /// we only know numerically; holds a description of that factor.
  std::string algebraic;

  static Location origin() { return {std::complex<double>(0.0, 0.0), {}}; }
  static Location infinity() { return {std::nullopt, {}}; }
  bool operator==(const Location& o) const { return affine == o.affine; }
};

struct DivisorPoint {
  Location location;
  int multiplicity = 1;
};

class Divisor {
 public:
  Divisor() = default;
  /// Validates multiplicities >= 1 and pairwise distinct locations.
  static Divisor from_points(std::vector<DivisorPoint> points);

  /// Zero divisor of a nonzero binary form, via square-free decomposition
  /// over Q (multiplicities exact, locations approximated for irrational roots).
  static Divisor of_form(const BinaryForm& form);

  /// Divisor of x0^(N-l) x1^l: l [1:0] + (N - l) [0:1].
  static Divisor of_monomial(int degree, int exponent);

  const std::vector<DivisorPoint>& points() const { return points_; }
  std::size_t support_size() const { return points_.size(); }
  int degree() const;

 private:
  std::vector<DivisorPoint> points_;
};

enum class AutKind { NonReductiveBorel, Torus, Finite };

std::string to_string(AutKind kind);

struct AutVerdict {
  AutKind kind = AutKind::Finite;
  bool obstruction = false;
};

/// Automorphisms of (P^1, O(N), phi) from the zero set of phi: the stabilizer
/// in PGL(2) of k distinct points is a Borel subgroup (k = 1), a torus
/// (k = 2) or finite (k >= 3). Throws InvalidInputError for an empty divisor.
AutVerdict classify_automorphisms(const Divisor& divisor);

struct SaturationDegree {
  Divisor divisor;  // zero divisor of gcd(phi_1, phi_2)
  int degree = 0;   // deg [phi]
};

/// Saturation of phi : O -> O(N1) + O(N2) for monomial components:
/// deg [phi] = min{l1, l2} + min{N1 - l1, N2 - l2}.
SaturationDegree divisor_gcd_degree(const HiggsConfig& config);

/// Same quantity for arbitrary binary forms, through an exact gcd over Q.
SaturationDegree divisor_gcd_degree(const BinaryForm& phi1, const BinaryForm& phi2);

}  // namespace kymh::bundle
