#include "kymh/errors.hpp"
#include "kymh/geometry.hpp"
#include "kymh/kernels.hpp"

#include <string>

namespace kymh::geometry {

namespace {

using std::numbers::pi;

// Nodes s_j = sin(pi (2j - N) / (2N)); exactly antisymmetric about j = N/2.
std::vector<double> gauss_lobatto_nodes(int n) {
  const int big_n = n - 1;
  std::vector<double> s(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    s[static_cast<std::size_t>(j)] = std::sin(pi * (2 * j - big_n) / (2.0 * big_n));
  }
  return s;
}

// s_i - s_j without cancellation.
double node_gap(int i, int j, int big_n) {
  return 2.0 * std::cos(pi * (i + j - big_n) / (2.0 * big_n)) *
         std::sin(pi * (i - j) / (2.0 * big_n));
}

std::vector<double> clenshaw_curtis_weights(int n, const std::vector<double>& cos_table) {
  const int big_n = n - 1;  // even because n is odd
  const int period = 2 * big_n;
  std::vector<double> w(static_cast<std::size_t>(n));
  const double end = 1.0 / (static_cast<double>(big_n) * big_n - 1.0);
  w.front() = end;
  w.back() = end;
  for (int j = 1; j < big_n; ++j) {
    double v = 1.0;
    for (int k = 1; k < big_n / 2; ++k) {
      const double c = cos_table[static_cast<std::size_t>((2 * k * j) % period)];
      v -= 2.0 * c / (4.0 * k * k - 1.0);
    }
    v -= cos_table[static_cast<std::size_t>((big_n * j) % period)] / (static_cast<double>(big_n) * big_n - 1.0);
    w[static_cast<std::size_t>(j)] = 2.0 * v / big_n;
  }
  return w;
}

}  // namespace

AxisymGrid AxisymGrid::build(int n) {
  if (n % 2 == 0) throw ConfigError("n must be odd (got " + std::to_string(n) + ")");
  if (n < kMinNodes || n > kMaxNodes) {
    throw ConfigError("n must satisfy 33 <= n <= 4097 (got " + std::to_string(n) + ")");
  }
  auto data = std::make_shared<Data>();
  const int big_n = n - 1;
  data->nodes = gauss_lobatto_nodes(n);
  data->cos_table.resize(static_cast<std::size_t>(2 * big_n));
  for (int m = 0; m < 2 * big_n; ++m) {
    data->cos_table[static_cast<std::size_t>(m)] = std::cos(pi * m / big_n);
  }
  data->weights = clenshaw_curtis_weights(n, data->cos_table);

  const auto& s = data->nodes;
  auto c = [big_n](int j) { return (j == 0 || j == big_n) ? 2.0 : 1.0; };
  RowMatrix d1 = RowMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      d1(i, j) = (c(i) / c(j)) * sign / node_gap(i, j, big_n);
      diag -= d1(i, j);
    }
    d1(i, i) = diag;
  }
  RowMatrix d2 = RowMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      d2(i, j) = 2.0 * d1(i, j) * (d1(i, i) - 1.0 / node_gap(i, j, big_n));
      diag -= d2(i, j);
    }
    d2(i, i) = diag;
  }
  RowMatrix lap(n, n);
  for (int i = 0; i < n; ++i) {
    const double si = s[static_cast<std::size_t>(i)];
    const double a = (i == 0 || i == big_n) ? 0.0 : (1.0 - si) * (1.0 + si);
    lap.row(i) = -2.0 * (a * d2.row(i) - 2.0 * si * d1.row(i));
  }
  data->d1 = std::move(d1);
  data->d2 = std::move(d2);
  data->lap = std::move(lap);
  return AxisymGrid(n, std::move(data));
}

namespace {

Field apply(const RowMatrix& m, std::span<const double> f) {
  Field out(static_cast<std::size_t>(m.rows()));
  kernels::gemv({m.data(), static_cast<std::size_t>(m.size())}, static_cast<std::size_t>(m.rows()),
                static_cast<std::size_t>(m.cols()), f, out);
  return out;
}

}  // namespace

Field AxisymGrid::apply_d1(std::span<const double> f) const { return apply(data_->d1, f); }
Field AxisymGrid::apply_d2(std::span<const double> f) const { return apply(data_->d2, f); }
Field AxisymGrid::apply_laplacian_round(std::span<const double> f) const {
  return apply(data_->lap, f);
}

double AxisymGrid::quadrature(std::span<const double> f) const {
  return kernels::dot_compensated(data_->weights, f);
}

Field AxisymGrid::cumulative_integral(std::span<const double> f) const {
  // Chebyshev coefficients b_k of the interpolant; node j corresponds to
  // theta = pi (N - j) / N because the nodes increase from -1.
  const int big_n = n_ - 1;
  const int period = 2 * big_n;
  const auto& ct = data_->cos_table;
  auto cosine = [&](long m) { return ct[static_cast<std::size_t>(((m % period) + period) % period)]; };

  std::vector<double> b(static_cast<std::size_t>(n_) + 2, 0.0);
  for (int k = 0; k <= big_n; ++k) {
    double acc = 0.0;
    for (int j = 0; j <= big_n; ++j) {
      const double half = (j == 0 || j == big_n) ? 0.5 : 1.0;
      acc += half * f[static_cast<std::size_t>(big_n - j)] * cosine(static_cast<long>(j) * k);
    }
    double a = 2.0 * acc / big_n;
    if (k == 0 || k == big_n) a *= 0.5;
    b[static_cast<std::size_t>(k)] = a;
  }
  // Antiderivative coefficients up to degree N + 1.
  std::vector<double> big_b(static_cast<std::size_t>(n_) + 1, 0.0);
  for (int k = 1; k <= big_n + 1; ++k) {
    const double prev = (k == 1 ? 2.0 : 1.0) * b[static_cast<std::size_t>(k - 1)];
    big_b[static_cast<std::size_t>(k)] = (prev - b[static_cast<std::size_t>(k + 1)]) / (2.0 * k);
  }
  double at_minus_one = 0.0;
  for (int k = 1; k <= big_n + 1; ++k) {
    at_minus_one += (k % 2 == 0 ? 1.0 : -1.0) * big_b[static_cast<std::size_t>(k)];
  }
  Field out(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    const int j = big_n - i;  // theta index of node i
    double acc = 0.0;
    for (int k = 1; k <= big_n + 1; ++k) {
      acc += big_b[static_cast<std::size_t>(k)] * cosine(static_cast<long>(j) * k);
    }
    out[static_cast<std::size_t>(i)] = acc - at_minus_one;
  }
  out.front() = 0.0;
  return out;
}

Field AxisymGrid::interpolate(std::span<const double> f, std::span<const double> points) const {
  const auto& s = data_->nodes;
  Field out(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    const double x = points[p];
    double num = 0.0;
    double den = 0.0;
    bool exact = false;
    for (int j = 0; j < n_; ++j) {
      const double diff = x - s[static_cast<std::size_t>(j)];
      if (diff == 0.0) {
        out[p] = f[static_cast<std::size_t>(j)];
        exact = true;
        break;
      }
      double w = (j % 2 == 0) ? 1.0 : -1.0;
      if (j == 0 || j == n_ - 1) w *= 0.5;
      num += w / diff * f[static_cast<std::size_t>(j)];
      den += w / diff;
    }
    if (!exact) out[p] = num / den;
  }
  return out;
}

std::pair<double, double> AxisymGrid::extrapolate_to_poles(std::span<const double> f) const {
  // Interior Gauss-Lobatto nodes are the zeros of U_{N-1}; their barycentric
  // weights are (-1)^j (1 - s_j^2).
  const auto& s = data_->nodes;
  auto eval = [&](double x) {
    double num = 0.0;
    double den = 0.0;
    for (int j = 1; j < n_ - 1; ++j) {
      const double sj = s[static_cast<std::size_t>(j)];
      const double w = ((j % 2 == 0) ? 1.0 : -1.0) * (1.0 - sj) * (1.0 + sj);
      num += w / (x - sj) * f[static_cast<std::size_t>(j)];
      den += w / (x - sj);
    }
    return num / den;
  };
  return {eval(-1.0), eval(1.0)};
}

void require_finite(std::span<const double> f, const char* what) {
  for (double x : f) {
    if (!std::isfinite(x)) throw NumericInputError(std::string(what) + " contains non-finite entries");
  }
}

}  // namespace kymh::geometry
