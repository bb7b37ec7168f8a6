#pragma once
// Exact rational arithmetic and binary forms over Q.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace kymh {

using Rational = boost::multiprecision::cpp_rational;

/// Exact value of a finite double (every double is a dyadic rational).
Rational to_rational(double x);

/// Decimal-fraction parse ("5", "-3/2", "2.5") into an exact rational.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// Dense univariate polynomial over Q, coefficients from degree 0 upward.
/// The zero polynomial has no coefficients.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> coeffs);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  const Rational& lead() const { return c_.back(); }
  Rational eval(const Rational& x) const;

  RationalPoly derivative() const;
  RationalPoly monic() const;

  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
  friend RationalPoly operator-(const RationalPoly& a, const RationalPoly& b);
  friend bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.c_ == b.c_; }

  /// Euclidean division; throws InvalidInputError on division by zero.
  static std::pair<RationalPoly, RationalPoly> divmod(const RationalPoly& a, const RationalPoly& b);

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Monic gcd; gcd(0, 0) = 0.
RationalPoly gcd(RationalPoly a, RationalPoly b);

/// Yun's square-free decomposition: p = lead * prod_i factors[i]^(i+1), each
/// factor monic, square-free and pairwise coprime. Requires deg p >= 1.
std::vector<RationalPoly> squarefree_decomposition(const RationalPoly& p);

/// Homogeneous polynomial sum_k c_k x0^(d-k) x1^k of degree d.
struct BinaryForm {
  int degree = 0;
  std::vector<Rational> coeffs;  // size degree + 1

  bool is_zero() const;
  /// Dehomogenization in w = x1 / x0.
  RationalPoly affine() const { return RationalPoly(coeffs); }
  /// Multiplicity of the zero at infinity [0:1], i.e. d - deg(affine part).
  int order_at_infinity() const;

  static BinaryForm monomial(int degree, int exponent);
};

/// Monic gcd of two nonzero binary forms, as a binary form.
BinaryForm gcd(const BinaryForm& a, const BinaryForm& b);

}  // namespace kymh
