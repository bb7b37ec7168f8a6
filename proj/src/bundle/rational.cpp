#include "kymh/rational.hpp"

#include "kymh/errors.hpp"

#include <cmath>
#include <sstream>

namespace kymh {

using boost::multiprecision::cpp_int;

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw NumericInputError("cannot convert non-finite value to a rational");
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  // mant * 2^53 is an integer.
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  Rational q{cpp_int(scaled)};
  const int shift = exp - 53;
  if (shift >= 0) {
    q *= Rational(cpp_int(1) << shift);
  } else {
    q /= Rational(cpp_int(1) << (-shift));
  }
  return q;
}

Rational parse_rational(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      const Rational den{cpp_int(text.substr(slash + 1))};
      if (den == 0) throw InvalidInputError("zero denominator in '" + text + "'");
      return Rational{cpp_int(text.substr(0, slash))} / den;
    }
    std::string mantissa = text;
    long exp10 = 0;
    const auto e = text.find_first_of("eE");
    if (e != std::string::npos) {
      mantissa = text.substr(0, e);
      exp10 = std::stol(text.substr(e + 1));
    }
    const auto dot = mantissa.find('.');
    if (dot != std::string::npos) {
      exp10 -= static_cast<long>(mantissa.size() - dot - 1);
      mantissa.erase(dot, 1);
    }
    if (mantissa.empty() || mantissa == "-" || mantissa == "+") throw InvalidInputError("empty number");
    if (mantissa.front() == '+') mantissa.erase(0, 1);
    if (std::labs(exp10) > 4000) throw InvalidInputError("exponent out of range in '" + text + "'");
    Rational q{cpp_int(mantissa)};
    const Rational ten = 10;
    for (long k = 0; k < std::labs(exp10); ++k) q = exp10 > 0 ? Rational(q * ten) : Rational(q / ten);
    return q;
  } catch (const InvalidInputError&) {
    throw;
  } catch (const std::exception&) {
    throw InvalidInputError("not a rational number: '" + text + "'");
  }
}

std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

RationalPoly::RationalPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void RationalPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational RationalPoly::eval(const Rational& x) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

RationalPoly RationalPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<int>(k);
  return RationalPoly(std::move(d));
}

RationalPoly RationalPoly::monic() const {
  if (is_zero()) return {};
  std::vector<Rational> out = c_;
  const Rational l = lead();
  for (auto& x : out) x /= l;
  return RationalPoly(std::move(out));
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  return RationalPoly(std::move(out));
}

RationalPoly operator-(const RationalPoly& a, const RationalPoly& b) {
  std::vector<Rational> out(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) out[i] -= b.c_[i];
  return RationalPoly(std::move(out));
}

std::pair<RationalPoly, RationalPoly> RationalPoly::divmod(const RationalPoly& a,
                                                           const RationalPoly& b) {
  if (b.is_zero()) throw InvalidInputError("polynomial division by zero");
  std::vector<Rational> rem = a.c_;
  const int db = b.degree();
  if (a.degree() < db) return {RationalPoly{}, a};
  std::vector<Rational> quot(static_cast<std::size_t>(a.degree() - db + 1), Rational(0));
  for (int k = a.degree(); k >= db; --k) {
    const Rational coef = rem[static_cast<std::size_t>(k)] / b.lead();
    quot[static_cast<std::size_t>(k - db)] = coef;
    if (coef == 0) continue;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k - db + j)] -= coef * b.c_[static_cast<std::size_t>(j)];
  }
  return {RationalPoly(std::move(quot)), RationalPoly(std::move(rem))};
}

RationalPoly gcd(RationalPoly a, RationalPoly b) {
  while (!b.is_zero()) {
    auto r = RationalPoly::divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::vector<RationalPoly> squarefree_decomposition(const RationalPoly& p) {
  if (p.degree() < 1) throw InvalidInputError("square-free decomposition needs a non-constant polynomial");
  std::vector<RationalPoly> factors;
  const RationalPoly f = p.monic();
  const RationalPoly fp = f.derivative();
  RationalPoly a = gcd(f, fp);
  RationalPoly b = RationalPoly::divmod(f, a).first;
  RationalPoly c = RationalPoly::divmod(fp, a).first;
  RationalPoly d = c - b.derivative();
  while (b.degree() >= 1) {
    RationalPoly g = gcd(b, d);
    factors.push_back(g);
    b = RationalPoly::divmod(b, g).first;
    c = RationalPoly::divmod(d, g).first;
    d = c - b.derivative();
  }
  while (!factors.empty() && factors.back().degree() == 0) factors.pop_back();
  return factors;
}

bool BinaryForm::is_zero() const {
  for (const auto& c : coeffs)
    if (c != 0) return false;
  return true;
}

int BinaryForm::order_at_infinity() const {
  if (is_zero()) throw InvalidInputError("zero binary form has no divisor");
  return degree - affine().degree();
}

BinaryForm BinaryForm::monomial(int degree, int exponent) {
  BinaryForm f;
  f.degree = degree;
  f.coeffs.assign(static_cast<std::size_t>(degree) + 1, Rational(0));
  f.coeffs[static_cast<std::size_t>(exponent)] = 1;
  return f;
}

BinaryForm gcd(const BinaryForm& a, const BinaryForm& b) {
  if (a.is_zero() || b.is_zero()) throw DegeneratePairError("gcd of binary forms needs both forms nonzero");
  const RationalPoly g = gcd(a.affine(), b.affine());
  const int inf = std::min(a.order_at_infinity(), b.order_at_infinity());
  BinaryForm out;
  out.degree = g.degree() + inf;
  out.coeffs.assign(static_cast<std::size_t>(out.degree) + 1, Rational(0));
  for (std::size_t k = 0; k < g.coeffs().size(); ++k) out.coeffs[k] = g.coeffs()[k];
  return out;
}

}  // namespace kymh
