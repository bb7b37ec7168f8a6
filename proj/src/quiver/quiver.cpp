#include "kymh/quiver.hpp"

#include "kymh/bundle_fields.hpp"
#include "kymh/errors.hpp"
#include "kymh/vortex.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <cmath>
#include <set>

namespace kymh::quiver {

using geometry::AxisymGrid;
using geometry::ConformalMetric;

int Quiver::vertex_index(const std::string& id) const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] == id) return static_cast<int>(i);
  }
  throw ModelError("unknown vertex '" + id + "'");
}

void QuiverBundleSpec::validate() const {
  const auto nv = quiver.vertices.size();
  if (nv == 0) throw ModelError("a quiver needs at least one vertex");
  std::set<std::string> ids(quiver.vertices.begin(), quiver.vertices.end());
  if (ids.size() != nv) throw ModelError("vertex ids must be distinct");
  std::set<std::string> arrow_ids;
  for (const auto& a : quiver.arrows) {
    if (!arrow_ids.insert(a.id).second) throw ModelError("arrow ids must be distinct ('" + a.id + "')");
    if (a.tail < 0 || a.head < 0 || a.tail >= static_cast<int>(nv) || a.head >= static_cast<int>(nv)) {
      throw ModelError("arrow '" + a.id + "' has a head or tail outside the vertex set");
    }
  }
  if (ranks.size() != nv || degrees.size() != nv || sigma.size() != nv || tau.size() != nv) {
    throw ModelError("ranks, degrees, sigma and tau need one entry per vertex");
  }
  std::vector<std::string> problems;
  for (std::size_t i = 0; i < nv; ++i) {
    if (ranks[i] < 1) problems.push_back("rank of vertex '" + quiver.vertices[i] + "' must be >= 1");
    if (!(sigma[i] > 0.0) || !std::isfinite(sigma[i])) {
      problems.push_back("sigma of vertex '" + quiver.vertices[i] + "' must be positive");
    }
    if (!std::isfinite(tau[i])) problems.push_back("tau of vertex '" + quiver.vertices[i] + "' must be finite");
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) problems.emplace_back("rho must be positive");
  for (const auto& a : quiver.arrows) {
    if (!std::isfinite(a.coefficient)) problems.push_back("arrow '" + a.id + "' coefficient must be finite");
    if (!a.exponent) continue;
    const int d = degrees[static_cast<std::size_t>(a.head)] - degrees[static_cast<std::size_t>(a.tail)];
    if (d < 0) {
      problems.push_back("arrow '" + a.id + "' needs d_head >= d_tail for a nonzero section");
    } else if (*a.exponent < 0 || *a.exponent > d) {
      problems.push_back("arrow '" + a.id + "' exponent must satisfy 0 <= l <= d_head - d_tail");
    }
  }
  if (!problems.empty()) {
    std::string msg = problems.front();
    for (std::size_t i = 1; i < problems.size(); ++i) msg += "; " + problems[i];
    throw ConfigError(msg);
  }
}

namespace {

void check_point(const QuiverBundleSpec& spec, const PointData& data) {
  const auto nv = static_cast<std::size_t>(spec.vertex_count());
  if (data.metrics.size() != nv || data.maps.size() != spec.quiver.arrows.size()) {
    throw ModelError("point data needs one metric per vertex and one map per arrow");
  }
  for (std::size_t i = 0; i < nv; ++i) {
    const int r = spec.ranks[i];
    if (data.metrics[i].rows() != r || data.metrics[i].cols() != r) {
      throw ModelError("metric at vertex '" + spec.quiver.vertices[i] + "' has the wrong size");
    }
  }
  for (std::size_t k = 0; k < data.maps.size(); ++k) {
    const auto& a = spec.quiver.arrows[k];
    const int rh = spec.ranks[static_cast<std::size_t>(a.head)];
    const int rt = spec.ranks[static_cast<std::size_t>(a.tail)];
    if (data.maps[k].rows() != rh || data.maps[k].cols() != rt) {
      throw ModelError("rank mismatch on arrow '" + a.id + "': expected a " + std::to_string(rh) + "x" +
                       std::to_string(rt) + " map");
    }
  }
}

CMatrix adjoint(const CMatrix& phi, const CMatrix& h_tail, const CMatrix& h_head) {
  return h_tail.partialPivLu().solve(phi.adjoint() * h_head);
}

}  // namespace

std::vector<CMatrix> commutator(const QuiverBundleSpec& spec, const PointData& data) {
  check_point(spec, data);
  const auto nv = static_cast<std::size_t>(spec.vertex_count());
  std::vector<CMatrix> out(nv);
  for (std::size_t i = 0; i < nv; ++i) out[i] = CMatrix::Zero(spec.ranks[i], spec.ranks[i]);
  for (std::size_t k = 0; k < data.maps.size(); ++k) {
    const auto& a = spec.quiver.arrows[k];
    const auto h = static_cast<std::size_t>(a.head), t = static_cast<std::size_t>(a.tail);
    const CMatrix& phi = data.maps[k];
    const CMatrix star = adjoint(phi, data.metrics[t], data.metrics[h]);
    out[h] += phi * star;
    out[t] -= star * phi;
  }
  // Orthonormal coordinates z with x = L^-dagger z, H = L L^dagger.
  for (std::size_t i = 0; i < nv; ++i) {
    const Eigen::LLT<CMatrix> llt(data.metrics[i]);
    if (llt.info() != Eigen::Success) {
      throw NumericInputError("metric at vertex '" + spec.quiver.vertices[i] + "' is not positive definite");
    }
    const CMatrix l = llt.matrixL();
    const CMatrix la = l.adjoint();
    out[i] = la * out[i] * la.inverse();
  }
  return out;
}

double arrow_norm(const PointData& data, const QuiverBundleSpec& spec, int arrow) {
  check_point(spec, data);
  const auto& a = spec.quiver.arrows.at(static_cast<std::size_t>(arrow));
  const CMatrix& phi = data.maps[static_cast<std::size_t>(arrow)];
  const CMatrix star = adjoint(phi, data.metrics[static_cast<std::size_t>(a.tail)],
                               data.metrics[static_cast<std::size_t>(a.head)]);
  return (phi * star).trace().real();
}

QuiverPotentials zero_potentials(const AxisymGrid& grid, const QuiverBundleSpec& spec) {
  QuiverPotentials p;
  p.v.assign(static_cast<std::size_t>(spec.vertex_count()), Field(static_cast<std::size_t>(grid.size()), 0.0));
  return p;
}

namespace {

void require_rank_one(const QuiverBundleSpec& spec) {
  spec.validate();
  for (std::size_t i = 0; i < spec.ranks.size(); ++i) {
    if (spec.ranks[i] != 1) {
      throw UnsupportedRankError("analytic evaluation needs rank 1 at every vertex (vertex '" +
                                 spec.quiver.vertices[i] + "' has rank " + std::to_string(spec.ranks[i]) + ")");
    }
  }
}

void require_potentials(const AxisymGrid& grid, const QuiverBundleSpec& spec, const QuiverPotentials& h) {
  if (h.v.size() != static_cast<std::size_t>(spec.vertex_count())) {
    throw ModelError("one potential per vertex is required");
  }
  for (const auto& v : h.v) {
    if (static_cast<int>(v.size()) != grid.size()) throw NumericInputError("potential has the wrong number of nodes");
    geometry::require_finite(v, "vertex potential");
  }
}

double tau_over_sigma(const QuiverBundleSpec& spec, int i) {
  const auto iu = static_cast<std::size_t>(i);
  return spec.tau[iu] / spec.sigma[iu];
}

// Tr [phi, phi^*]_i on the grid from arrow norms.
std::vector<Field> commutator_traces(const QuiverBundleSpec& spec, const std::vector<Field>& norms,
                                     std::size_t n) {
  std::vector<Field> tr(static_cast<std::size_t>(spec.vertex_count()), Field(n, 0.0));
  for (std::size_t k = 0; k < spec.quiver.arrows.size(); ++k) {
    const auto& a = spec.quiver.arrows[k];
    for (std::size_t j = 0; j < n; ++j) {
      tr[static_cast<std::size_t>(a.head)][j] += norms[k][j];
      tr[static_cast<std::size_t>(a.tail)][j] -= norms[k][j];
    }
  }
  return tr;
}

}  // namespace

std::vector<Field> arrow_norms(const AxisymGrid& grid, const QuiverBundleSpec& spec, const QuiverPotentials& h) {
  require_rank_one(spec);
  require_potentials(grid, spec, h);
  const auto n = static_cast<std::size_t>(grid.size());
  std::vector<Field> out;
  for (const auto& a : spec.quiver.arrows) {
    Field f(n, 0.0);
    if (a.exponent) {
      const int d = spec.degrees[static_cast<std::size_t>(a.head)] - spec.degrees[static_cast<std::size_t>(a.tail)];
      const Field& vh = h.v[static_cast<std::size_t>(a.head)];
      const Field& vt = h.v[static_cast<std::size_t>(a.tail)];
      const double c2 = a.coefficient * a.coefficient;
      for (std::size_t j = 0; j < n; ++j) {
        f[j] = c2 * bundle::higgs_norm_fs(d, *a.exponent, grid.node(static_cast<int>(j))) *
               std::exp(2.0 * (vh[j] - vt[j]));
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

QuiverResidual quiver_vortex_residual(const AxisymGrid& grid, const ConformalMetric& metric,
                                      const QuiverBundleSpec& spec, const QuiverPotentials& h) {
  const std::vector<Field> norms = arrow_norms(grid, spec, h);
  const auto n = static_cast<std::size_t>(grid.size());
  const std::vector<Field> comm = commutator_traces(spec, norms, n);
  QuiverResidual out;
  for (int i = 0; i < spec.vertex_count(); ++i) {
    const auto iu = static_cast<std::size_t>(i);
    Field r = vortex::curvature(grid, metric, h.v[iu], spec.degrees[iu]);
    for (std::size_t j = 0; j < n; ++j) r[j] = spec.sigma[iu] * r[j] + comm[iu][j] - spec.tau[iu];
    out.vertex.push_back(std::move(r));
  }
  Field lhs = geometry::scalar_curvature(grid, metric).s_field;
  for (std::size_t k = 0; k < norms.size(); ++k) {
    const auto& a = spec.quiver.arrows[k];
    const double weight = 2.0 * (tau_over_sigma(spec, a.head) - tau_over_sigma(spec, a.tail));
    const Field lap = geometry::laplacian(grid, metric, norms[k]);
    for (std::size_t j = 0; j < n; ++j) lhs[j] += 2.0 * spec.rho * (lap[j] + weight * norms[k][j]);
  }
  const double vol = geometry::volume(grid, metric);
  out.c_mean = geometry::integrate(grid, metric, lhs) / vol;
  out.scalar = std::move(lhs);
  for (double& x : out.scalar) x -= out.c_mean;
  ConstantInputs ci;
  ci.volume = vol;
  for (int i = 0; i < spec.vertex_count(); ++i) ci.slopes.push_back(slope(spec.degrees[static_cast<std::size_t>(i)], 1, vol));
  out.c_identity = constant_c(spec, ci);
  return out;
}

TraceIdentityReport trace_identity_check(const AxisymGrid& grid, const ConformalMetric& metric,
                                         const QuiverBundleSpec& spec, const std::vector<Field>& norms,
                                         const std::vector<Field>& curvature_traces) {
  spec.validate();
  const auto n = static_cast<std::size_t>(grid.size());
  if (norms.size() != spec.quiver.arrows.size() ||
      curvature_traces.size() != static_cast<std::size_t>(spec.vertex_count())) {
    throw ModelError("trace identity needs one norm per arrow and one curvature trace per vertex");
  }
  const std::vector<Field> comm = commutator_traces(spec, norms, n);
  Field lhs(n, 0.0), mid(n, 0.0), rhs(n, 0.0), diff(n, 0.0), mag(n, 0.0);
  for (std::size_t k = 0; k < norms.size(); ++k) {
    const auto& a = spec.quiver.arrows[k];
    const double w = tau_over_sigma(spec, a.head) - tau_over_sigma(spec, a.tail);
    for (std::size_t j = 0; j < n; ++j) {
      lhs[j] += w * norms[k][j];
      mag[j] += std::abs(w * norms[k][j]);
    }
  }
  for (int i = 0; i < spec.vertex_count(); ++i) {
    const auto iu = static_cast<std::size_t>(i);
    const double ts = tau_over_sigma(spec, i);
    for (std::size_t j = 0; j < n; ++j) {
      mid[j] += ts * comm[iu][j];
      const double term = spec.tau[iu] * spec.tau[iu] * spec.ranks[iu] / spec.sigma[iu] -
                          spec.tau[iu] * curvature_traces[iu][j];
      rhs[j] += term;
      mag[j] += std::abs(term);
    }
  }
  for (std::size_t j = 0; j < n; ++j) diff[j] = lhs[j] - rhs[j];
  TraceIdentityReport r;
  r.lhs = geometry::integrate(grid, metric, lhs);
  r.middle = geometry::integrate(grid, metric, mid);
  r.rhs = geometry::integrate(grid, metric, rhs);
  r.defect = geometry::integrate(grid, metric, diff);
  r.scale = geometry::integrate(grid, metric, mag);
  return r;
}

TraceIdentityReport trace_identity_check(const AxisymGrid& grid, const ConformalMetric& metric,
                                         const QuiverBundleSpec& spec, const QuiverPotentials& h) {
  const std::vector<Field> norms = arrow_norms(grid, spec, h);
  std::vector<Field> traces;
  for (int i = 0; i < spec.vertex_count(); ++i) {
    const auto iu = static_cast<std::size_t>(i);
    traces.push_back(vortex::curvature(grid, metric, h.v[iu], spec.degrees[iu]));
  }
  return trace_identity_check(grid, metric, spec, norms, traces);
}

std::vector<Field> synthetic_curvature_traces(const QuiverBundleSpec& spec, const std::vector<Field>& norms) {
  spec.validate();
  if (norms.size() != spec.quiver.arrows.size()) throw ModelError("one norm per arrow is required");
  const std::size_t n = norms.empty() ? 0 : norms.front().size();
  std::vector<Field> comm = commutator_traces(spec, norms, n);
  for (int i = 0; i < spec.vertex_count(); ++i) {
    const auto iu = static_cast<std::size_t>(i);
    for (double& x : comm[iu]) x = (spec.tau[iu] * spec.ranks[iu] - x) / spec.sigma[iu];
  }
  return comm;
}

ReductionParams reduction_parameters(const ReductionInputs& in) {
  if (in.multiplicities.size() != in.vertex_slopes.size()) {
    throw ConfigError("multiplicities and slopes need one entry per vertex");
  }
  if (!std::isfinite(in.global_slope)) throw ConfigError("global slope must be finite");
  ReductionParams p;
  for (std::size_t i = 0; i < in.multiplicities.size(); ++i) {
    if (in.multiplicities[i] <= 0) throw ConfigError("multiplicity dim M must be positive");
    if (!std::isfinite(in.vertex_slopes[i])) throw ConfigError("vertex slopes must be finite");
    const double sigma = in.multiplicities[i];
    p.sigma.push_back(sigma);
    p.tau.push_back(sigma * (in.global_slope - in.vertex_slopes[i]));
  }
  return p;
}

double slope(int degree, int rank, double vol) {
  if (rank < 1) throw ConfigError("rank must be positive");
  if (!(vol > 0.0)) throw ConfigError("volume must be positive");
  return kTwoPi * degree / (vol * rank);
}

double constant_c(const QuiverBundleSpec& spec, const ConstantInputs& in) {
  spec.validate();
  const auto nv = static_cast<std::size_t>(spec.vertex_count());
  if (in.slopes.size() != nv) throw ConfigError("one slope per vertex is required");
  if (!in.trace_f2_integrals.empty() && in.trace_f2_integrals.size() != nv) {
    throw ConfigError("one Tr F^2 integral per vertex is required");
  }
  double total = 2.0 * in.ricci_integral;
  for (std::size_t i = 0; i < nv; ++i) {
    if (!in.trace_f2_integrals.empty()) total -= 4.0 * spec.rho * spec.sigma[i] * in.trace_f2_integrals[i];
    total += 4.0 * spec.rho * in.volume * (spec.tau[i] / spec.sigma[i] - in.slopes[i]) * spec.tau[i] * spec.ranks[i];
  }
  return total / in.volume;
}

}  // namespace kymh::quiver
