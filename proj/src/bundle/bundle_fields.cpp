#include "kymh/bundle_fields.hpp"

#include "kymh/errors.hpp"

#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kymh::bundle {

void HiggsConfig::validate() const {
  std::vector<std::string> problems;
  if (degrees.empty() || degrees.size() > 2) {
    problems.emplace_back("degrees must have one (abelian) or two (rank-2) entries");
  }
  if (exponents.size() != degrees.size()) {
    problems.emplace_back("exponents must have the same length as degrees");
  }
  for (std::size_t j = 0; j < degrees.size(); ++j) {
    if (degrees[j] <= 0) problems.emplace_back("degree N_" + std::to_string(j + 1) + " must be positive");
    if (j < exponents.size() && (exponents[j] < 0 || exponents[j] > degrees[j])) {
      problems.emplace_back("exponent l_" + std::to_string(j + 1) + " must satisfy 0 <= l <= N");
    }
  }
  if (degrees.size() == 2 && degrees[0] > degrees[1]) {
    problems.emplace_back("rank-2 degrees must be ordered N1 <= N2");
  }
  if (!std::isfinite(tau) || tau <= 0.0) problems.emplace_back("tau must be positive");
  if (!std::isfinite(alpha)) problems.emplace_back("alpha must be finite");
  if (!problems.empty()) {
    std::string msg = problems.front();
    for (std::size_t i = 1; i < problems.size(); ++i) msg += "; " + problems[i];
    throw ConfigError(msg);
  }
}

HiggsConfig abelian_config(int degree, int exponent, double tau, double alpha) {
  HiggsConfig c{{degree}, {exponent}, tau, alpha};
  c.validate();
  return c;
}

HiggsConfig rank2_config(int n1, int n2, int l1, int l2, double tau, double alpha) {
  HiggsConfig c{{n1, n2}, {l1, l2}, tau, alpha};
  c.validate();
  return c;
}

double higgs_norm_fs(int degree, int exponent, double s) {
  return std::pow(1.0 + s, exponent) * std::pow(1.0 - s, degree - exponent) / std::ldexp(1.0, degree);
}

Field higgs_profile(const geometry::AxisymGrid& grid, const HiggsConfig& config, int component) {
  config.validate();
  if (component < 0 || component >= config.rank()) {
    throw ConfigError("Higgs component index out of range");
  }
  const int n = config.degrees[static_cast<std::size_t>(component)];
  const int l = config.exponents[static_cast<std::size_t>(component)];
  return geometry::sample(grid, [&](double s) { return higgs_norm_fs(n, l, s); });
}

double background_curvature(int degree) { return static_cast<double>(degree); }

double background_curvature(const HiggsConfig& config, int component) {
  config.validate();
  return background_curvature(config.degrees.at(static_cast<std::size_t>(component)));
}

Divisor Divisor::from_points(std::vector<DivisorPoint> points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].multiplicity < 1) throw InvalidInputError("divisor multiplicities must be >= 1");
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i].location == points[j].location) {
        throw InvalidInputError("divisor locations must be pairwise distinct");
      }
    }
  }
  Divisor d;
  d.points_ = std::move(points);
  return d;
}

Divisor Divisor::of_monomial(int degree, int exponent) {
  if (degree <= 0 || exponent < 0 || exponent > degree) {
    throw ConfigError("monomial divisor needs 0 <= l <= N and N > 0");
  }
  std::vector<DivisorPoint> pts;
  if (exponent > 0) pts.push_back({Location::origin(), exponent});
  if (degree - exponent > 0) pts.push_back({Location::infinity(), degree - exponent});
  return from_points(std::move(pts));
}

namespace {

std::string describe(const RationalPoly& p) {
  std::ostringstream os;
  os << "root of ";
  bool first = true;
  for (int k = p.degree(); k >= 0; --k) {
    const Rational& c = p.coeffs()[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    if (!first) os << " + ";
    os << "(" << c << ")";
    if (k > 0) os << "w^" << k;
    first = false;
  }
  return os.str();
}

}  // namespace

Divisor Divisor::of_form(const BinaryForm& form) {
  if (form.is_zero()) throw InvalidInputError("the zero section has no divisor");
  std::vector<DivisorPoint> pts;
  const int at_inf = form.order_at_infinity();
  if (at_inf > 0) pts.push_back({Location::infinity(), at_inf});

  const auto& c = form.coeffs;
  int at_origin = 0;
  while (c[static_cast<std::size_t>(at_origin)] == 0) ++at_origin;
  if (at_origin > 0) pts.push_back({Location::origin(), at_origin});

  std::vector<Rational> rest(c.begin() + at_origin, c.end());
  const RationalPoly q(std::move(rest));
  if (q.degree() >= 1) {
    const auto factors = squarefree_decomposition(q);
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const RationalPoly& f = factors[i];
      const int mult = static_cast<int>(i) + 1;
      if (f.degree() < 1) continue;
      if (f.degree() == 1) {
        const Rational root = -f.coeffs()[0] / f.coeffs()[1];
        pts.push_back({Location{std::complex<double>(to_double(root), 0.0), {}}, mult});
        continue;
      }
      Eigen::VectorXd coeffs(f.degree() + 1);
      for (int k = 0; k <= f.degree(); ++k) coeffs[k] = to_double(f.coeffs()[static_cast<std::size_t>(k)]);
      Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
      const std::string desc = describe(f);
      for (Eigen::Index r = 0; r < solver.roots().size(); ++r) {
        pts.push_back({Location{solver.roots()[r], desc}, mult});
      }
    }
  }
  Divisor d;
  d.points_ = std::move(pts);
  return d;
}

int Divisor::degree() const {
  int deg = 0;
  for (const auto& p : points_) deg += p.multiplicity;
  return deg;
}

std::string to_string(AutKind kind) {
  switch (kind) {
    case AutKind::NonReductiveBorel: return "non_reductive_borel";
    case AutKind::Torus: return "torus";
    case AutKind::Finite: return "finite";
  }
  return "unknown";
}

AutVerdict classify_automorphisms(const Divisor& divisor) {
  switch (divisor.support_size()) {
    case 0: throw InvalidInputError("empty divisor: phi must be nonzero with N > 0");
    case 1: return {AutKind::NonReductiveBorel, true};
    case 2: return {AutKind::Torus, false};
    default: return {AutKind::Finite, false};
  }
}

SaturationDegree divisor_gcd_degree(const HiggsConfig& config) {
  config.validate();
  if (config.rank() != 2) throw WrongRankError("saturation degree needs a rank-2 configuration");
  const int n1 = config.degrees[0], n2 = config.degrees[1];
  const int l1 = config.exponents[0], l2 = config.exponents[1];
  const int at_origin = std::min(l1, l2);
  const int at_inf = std::min(n1 - l1, n2 - l2);
  std::vector<DivisorPoint> pts;
  if (at_origin > 0) pts.push_back({Location::origin(), at_origin});
  if (at_inf > 0) pts.push_back({Location::infinity(), at_inf});
  return {Divisor::from_points(std::move(pts)), at_origin + at_inf};
}

SaturationDegree divisor_gcd_degree(const BinaryForm& phi1, const BinaryForm& phi2) {
  if (phi1.is_zero() || phi2.is_zero()) {
    throw DegeneratePairError("one Higgs component vanishes; the saturation is the other summand");
  }
  const BinaryForm g = gcd(phi1, phi2);
  if (g.degree == 0) return {Divisor{}, 0};
  return {Divisor::of_form(g), g.degree};
}

}  // namespace kymh::bundle
