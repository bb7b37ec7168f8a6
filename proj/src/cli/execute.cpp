#include "kymh/cli.hpp"

#include "kymh/geometry.hpp"
#include "kymh/gravitating.hpp"
#include "kymh/kernels.hpp"
#include "kymh/obstructions.hpp"
#include "kymh/quiver.hpp"
#include "kymh/vortex.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace kymh::cli {

namespace {

using geometry::AxisymGrid;

struct Outcome {
  int exit_code = kOk;
  std::string status = "ok";
  std::string message;
  Json results = Json::object();
  Json verdicts;
  std::vector<OutputFile> files;
};

double sup_abs(std::span<const double> f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

/// sup |f(s) - f(-s)|; CGL nodes are symmetric about 0.
double parity_defect(std::span<const double> f) {
  double m = 0.0;
  for (std::size_t j = 0, k = f.size() - 1; j < k; ++j, --k) m = std::max(m, std::abs(f[j] - f[k]));
  return m;
}

Json solve_report_json(const vortex::SolveReport& r) {
  return {{"converged", r.converged},
          {"iterations", r.iterations},
          {"residual_sup", r.residual_sup},
          {"resolution", r.resolution},
          {"history", r.history}};
}

template <class T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json stability_json(const obstructions::StabilityReport& s) {
  return {{"rank", s.rank},
          {"abelian_window", opt(s.abelian_window)},
          {"nonabelian_window", opt(s.nonabelian_window)},
          {"reduced_window", opt(s.reduced_window)},
          {"z_stable", opt(s.z_stable)},
          {"z_witness", opt(s.z_witness)},
          {"z_agrees_with_window", opt(s.z_agrees_with_window)},
          {"balanced", opt(s.balanced)},
          {"balancing_lhs", opt(s.balancing_lhs)},
          {"automorphisms", opt(s.automorphisms)},
          {"reductivity_obstruction", opt(s.reductivity_obstruction)},
          {"futaki", s.futaki},
          {"futaki_per_alpha", s.futaki_per_alpha},
          {"futaki_exact_zero", s.futaki_exact_zero},
          {"admissible", s.admissible},
          {"reasons", s.reasons}};
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : sep) + p;
  return out;
}

vortex::NewtonOptions newton_options(const RunConfig& c) { return {c.tolerance, c.max_iter}; }

Outcome run_vortex(const RunConfig& cfg) {
  Outcome o;
  const auto higgs = cfg.higgs();
  const auto grid = AxisymGrid::build(cfg.n);
  const auto metric = geometry::round_metric(grid);
  const auto sol = vortex::solve_vortex(grid, metric, higgs, newton_options(cfg));
  const int nd = higgs.degrees[0];
  const auto& v = sol.bundle.v[0];
  const Field norm = vortex::higgs_norm(grid, v, nd, higgs.exponents[0]);
  const Field res = vortex::vortex_residual(grid, metric, sol.bundle, higgs);
  const double chern = vortex::chern_integral(grid, metric, v, nd);
  const double mass = geometry::integrate(grid, metric, norm);
  o.results["solver"] = solve_report_json(sol.report);
  o.results["chern_integral"] = chern;
  o.results["chern_expected"] = kTwoPi * nd;
  o.results["higgs_mass"] = mass;
  o.results["higgs_mass_expected"] = kTwoPi * (higgs.tau - 2.0 * nd);
  o.files.push_back({"profile.csv", profile_csv(grid.nodes(), {"v", "phi_norm_h", "residual"}, {&v, &norm, &res})});
  if (!sol.report.converged) {
    o.exit_code = kNotConverged;
    o.status = "not-converged";
    o.message = "Newton did not reach tolerance in " + std::to_string(sol.report.iterations) + " iterations";
  }
  return o;
}

Json state_json(const gravitating::GravitatingState& st) {
  return {{"alpha", st.alpha},
          {"c", st.c_value},
          {"u_parity_defect", parity_defect(st.metric.u)},
          {"v_parity_defect", parity_defect(st.bundle.v[0])}};
}

std::string state_csv(const AxisymGrid& grid, const gravitating::GravitatingState& st,
                      const bundle::HiggsConfig& higgs) {
  auto at = higgs;
  at.alpha = st.alpha;
  const auto r = gravitating::gravitating_residual(grid, st, at);
  const Field norm = vortex::higgs_norm(grid, st.bundle.v[0], higgs.degrees[0], higgs.exponents[0]);
  return profile_csv(grid.nodes(), {"u", "v", "phi_norm_h", "r1", "r2"},
                     {&st.metric.u, &st.bundle.v[0], &norm, &r.r1, &r.r2});
}

Outcome run_gravitating(const RunConfig& cfg) {
  Outcome o;
  gravitating::ContinuationSchedule schedule =
      cfg.schedule ? gravitating::ContinuationSchedule{*cfg.schedule, {}}
                   : gravitating::ContinuationSchedule::uniform(cfg.alpha.value_or(0.0));
  schedule.newton = newton_options(cfg);
  auto higgs = cfg.higgs();
  higgs.alpha = schedule.alphas.back();
  const auto grid = AxisymGrid::build(cfg.n);
  o.results["schedule"] = schedule.alphas;
  gravitating::SolveOptions options;
  options.override_obstruction = cfg.override_obstruction;
  const auto res = gravitating::solve_gravitating(higgs, schedule, grid, options);
  Json steps = Json::array();
  for (const auto& rec : res.history) {
    auto at = higgs;
    at.alpha = rec.alpha;
    steps.push_back({{"alpha", rec.alpha},
                     {"solver", solve_report_json(rec.report)},
                     {"c_est", rec.c_est},
                     {"c_identity", rec.c_identity},
                     {"c_topological", gravitating::topological_constant(at)},
                     {"c_literature", gravitating::literature_constant(at)},
                     {"r1_sup", rec.r1_sup},
                     {"r2_sup", rec.r2_sup},
                     {"kappa", rec.kernel_multiplier}});
  }
  o.results["steps"] = steps;
  o.results["solver"] = solve_report_json(res.report);
  o.results["obstruction_overridden"] = res.obstruction_overridden;
  o.results["final_state"] = state_json(res.state);
  o.files.push_back({"profile.csv", state_csv(grid, res.state, higgs)});
  if (!res.report.converged) {
    o.exit_code = kNotConverged;
    o.status = "not-converged";
    o.message = "continuation stalled at alpha = " + format_double(res.history.back().alpha);
  }
  return o;
}

Outcome run_eb(const RunConfig& cfg) {
  Outcome o;
  const auto higgs = cfg.higgs();
  const auto grid = AxisymGrid::build(cfg.n);
  gravitating::SecantOptions opts;
  opts.newton = newton_options(cfg);
  const auto nd = higgs.degrees[0];
  if (2.0 * nd >= higgs.tau) {
    throw InfeasibleError("no gravitating vortex: existence requires N < tau/2");
  }
  const auto aut = bundle::classify_automorphisms(bundle::Divisor::of_monomial(nd, higgs.exponents[0]));
  if (aut.obstruction && !cfg.override_obstruction) {
    throw ObstructedError(
        "If φ has only one zero, then there are no solutions of the gravitating vortex equations "
        "with alpha > 0: Aut(P^1, O(N), φ) is the non-reductive Borel group C* x C");
  }
  const auto eb = gravitating::einstein_bogomolnyi_solve(higgs, grid, opts);
  Json trace = Json::array();
  for (const auto& [a, c] : eb.trace) trace.push_back({{"alpha", a}, {"c_est", c}});
  o.results["converged"] = eb.converged;
  o.results["alpha_star"] = eb.alpha_star;
  o.results["c_at_alpha_star"] = eb.c_at_alpha_star;
  o.results["alpha_tau_n"] = eb.alpha_tau_n;
  o.results["prediction_literature"] = {
      {"constant", "c = 2 - 2 alpha tau N"}, {"alpha_tau_n", eb.literature_prediction}};
  o.results["prediction_conventions"] = {
      {"constant", "c = 4 - 2 alpha tau N"}, {"alpha_tau_n", eb.conventions_prediction}};
  o.results["discrepancy"] =
      "the two constants differ by the normalization of the scalar curvature (S = 4 on the round "
      "sphere of area 2 pi here); the computed product is compared with both and neither is asserted";
  o.results["iterations"] = eb.iterations;
  o.results["trace"] = trace;
  o.results["message"] = eb.message;
  if (eb.converged) {
    o.results["final_state"] = state_json(eb.state);
    o.files.push_back({"profile.csv", state_csv(grid, eb.state, higgs)});
  } else {
    o.exit_code = kNotConverged;
    o.status = "not-converged";
    o.message = eb.message;
  }
  return o;
}

Outcome run_futaki(const RunConfig& cfg) {
  Outcome o;
  const auto higgs = cfg.higgs(1.0);
  const Rational tau = cfg.tau->exact();
  const auto grid = AxisymGrid::build(cfg.n);
  const double closed = higgs.abelian() ? obstructions::abelian_futaki_closed_form(higgs)
                                        : obstructions::futaki_closed_form(higgs);
  const double quad = obstructions::futaki_quadrature(grid, obstructions::fubini_study_input(grid, higgs));
  bool zero = closed == 0.0;
  o.results["alpha"] = higgs.alpha;
  o.results["closed_form"] = closed;
  o.results["quadrature"] = quad;
  o.results["quadrature_resolution"] = cfg.n;
  const double scale = std::max(std::abs(closed), 1.0);
  o.results["difference_relative"] = std::abs(quad - closed) / scale;
  if (higgs.abelian()) {
    const auto rich = obstructions::abelian_futaki_quadrature(higgs);
    o.results["richardson"] = {{"resolutions", rich.resolutions}, {"values", rich.values},
                               {"differences", rich.differences}, {"extrapolated", rich.extrapolated},
                               {"certified", rich.certified},     {"floor", rich.floor}};
  } else {
    const Rational exact = obstructions::futaki_closed_form_exact(higgs, tau, to_rational(higgs.alpha));
    zero = exact == 0;
    o.results["closed_form_over_2pi_exact"] = to_string(exact);
  }
  o.results["vanishes"] = zero;
  if (!zero) {
    o.exit_code = kObstructed;
    o.status = "obstructed";
    o.message = "the Futaki character is nonzero (" + format_double(closed) +
                "), so there is no solution of the equations for this alpha";
  }
  return o;
}

Outcome run_stability(const RunConfig& cfg) {
  Outcome o;
  const auto higgs = cfg.higgs(1.0);
  const auto report = obstructions::stability_check(higgs, cfg.tau->exact());
  o.verdicts = stability_json(report);
  o.results["alpha"] = higgs.alpha;
  o.results["admissible"] = report.admissible;
  if (!report.admissible) {
    o.exit_code = kObstructed;
    o.status = "obstructed";
    o.message = join(report.reasons, "; ");
  }
  return o;
}

Outcome run_quiver(const RunConfig& cfg) {
  Outcome o;
  const auto& spec = cfg.quiver->spec;
  const auto grid = AxisymGrid::build(cfg.n);
  const auto metric = geometry::round_metric(grid);
  const auto nv = static_cast<std::size_t>(spec.vertex_count());

  quiver::ConstantInputs ci;
  Json slopes = Json::object();
  for (std::size_t i = 0; i < nv; ++i) {
    ci.slopes.push_back(quiver::slope(spec.degrees[i], spec.ranks[i]));
    slopes[spec.quiver.vertices[i]] = ci.slopes.back();
  }
  o.results["slopes"] = slopes;
  o.results["constant_c"] = quiver::constant_c(spec, ci);

  const bool abelian = std::all_of(spec.ranks.begin(), spec.ranks.end(), [](int r) { return r == 1; });
  o.results["abelian"] = abelian;
  if (abelian) {
    const auto h = quiver::zero_potentials(grid, spec);
    const auto res = quiver::quiver_vortex_residual(grid, metric, spec, h);
    Json vertex = Json::object();
    for (std::size_t i = 0; i < nv; ++i) vertex[spec.quiver.vertices[i]] = sup_abs(res.vertex[i]);
    o.results["fubini_study"] = {{"vertex_residual_sup", vertex},
                                 {"scalar_residual_sup", sup_abs(res.scalar)},
                                 {"c_mean", res.c_mean},
                                 {"c_identity", res.c_identity}};
    const auto norms = quiver::arrow_norms(grid, spec, h);
    const auto traces = quiver::synthetic_curvature_traces(spec, norms);
    const auto ti = quiver::trace_identity_check(grid, metric, spec, norms, traces);
    o.results["trace_identity"] = {
        {"lhs", ti.lhs}, {"middle", ti.middle}, {"rhs", ti.rhs}, {"defect", ti.defect}, {"scale", ti.scale}};
  } else {
    // Identity metrics and constant maps at one point: the commutator traces cancel.
    quiver::PointData pd;
    for (std::size_t i = 0; i < nv; ++i) pd.metrics.push_back(quiver::CMatrix::Identity(spec.ranks[i], spec.ranks[i]));
    for (const auto& a : spec.quiver.arrows) {
      const auto rh = spec.ranks[static_cast<std::size_t>(a.head)];
      const auto rt = spec.ranks[static_cast<std::size_t>(a.tail)];
      pd.maps.push_back(a.exponent ? quiver::CMatrix::Constant(rh, rt, a.coefficient) : quiver::CMatrix::Zero(rh, rt));
    }
    const auto comm = quiver::commutator(spec, pd);
    std::complex<double> total = 0.0;
    double herm = 0.0;
    for (const auto& m : comm) {
      total += m.trace();
      herm = std::max(herm, (m - m.adjoint()).cwiseAbs().maxCoeff());
    }
    o.results["commutator_trace_sum"] = std::abs(total);
    o.results["commutator_hermiticity_defect"] = herm;
  }
  if (cfg.quiver->reduction) {
    const auto p = quiver::reduction_parameters(*cfg.quiver->reduction);
    Json sigma = Json::object(), tau = Json::object();
    for (std::size_t i = 0; i < nv && i < p.sigma.size(); ++i) {
      sigma[spec.quiver.vertices[i]] = p.sigma[i];
      tau[spec.quiver.vertices[i]] = p.tau[i];
    }
    o.results["reduction"] = {{"sigma", sigma}, {"tau", tau}};
  }
  return o;
}

std::string csv_field(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_array()) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : " ") + csv_field(x);
    return s;
  }
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

Json member_summary(const Json& report) {
  const Json& r = report["results"];
  const Json& v = report.contains("verdicts") ? report["verdicts"] : Json();
  auto pick = [](const Json& obj, const char* key) { return obj.is_object() && obj.contains(key) ? obj[key] : Json(); };
  Json solver = pick(r, "solver");
  return {{"admissible", pick(v, "admissible").is_null() ? pick(r, "admissible") : pick(v, "admissible")},
          {"balanced", pick(v, "balanced")},
          {"nonabelian_window", pick(v, "nonabelian_window")},
          {"automorphisms", pick(v, "automorphisms").is_null() ? pick(r, "automorphisms") : pick(v, "automorphisms")},
          {"futaki", pick(r, "closed_form").is_null() ? pick(v, "futaki") : pick(r, "closed_form")},
          {"converged", pick(solver, "converged").is_null() ? pick(r, "converged") : pick(solver, "converged")},
          {"residual_sup", pick(solver, "residual_sup")},
          {"alpha_star", pick(r, "alpha_star")}};
}

Outcome run_sweep(const RunConfig& cfg) {
  Outcome o;
  const auto& sw = *cfg.sweep;
  RunConfig base = cfg;
  base.sweep.reset();
  base.command = sw.command;

  const auto degrees = sw.degrees.empty() ? std::vector<std::optional<std::vector<int>>>{cfg.degrees}
                                          : std::vector<std::optional<std::vector<int>>>(sw.degrees.begin(), sw.degrees.end());
  const auto exponents = sw.exponents.empty()
                             ? std::vector<std::optional<std::vector<int>>>{cfg.exponents}
                             : std::vector<std::optional<std::vector<int>>>(sw.exponents.begin(), sw.exponents.end());
  const auto taus = sw.tau.empty() ? std::vector<std::optional<TauValue>>{cfg.tau}
                                   : std::vector<std::optional<TauValue>>(sw.tau.begin(), sw.tau.end());
  const auto alphas = sw.alpha.empty() ? std::vector<std::optional<double>>{cfg.alpha}
                                       : std::vector<std::optional<double>>(sw.alpha.begin(), sw.alpha.end());
  std::vector<RunConfig> members;
  for (const auto& d : degrees)
    for (const auto& e : exponents)
      for (const auto& t : taus)
        for (const auto& a : alphas) {
          RunConfig m = base;
          m.degrees = d;
          m.exponents = e;
          m.tau = t;
          m.alpha = a;
          if (m.command == "solve-gravitating" && m.schedule && a && m.schedule->back() != *a) m.schedule.reset();
          members.push_back(std::move(m));
        }

  std::vector<Json> rows(members.size());
  auto run_member = [&](std::size_t k) {
    Json row;
    const auto& m = members[k];
    row["index"] = k;
    row["degrees"] = opt(m.degrees);
    row["exponents"] = opt(m.exponents);
    row["tau"] = m.tau ? m.tau->to_json() : Json(nullptr);
    row["alpha"] = opt(m.alpha);
    try {
      // Re-parse so each member gets the same validation as a standalone run.
      const RunConfig checked = parse_config(serialize(m));
      const RunResult r = execute(checked);
      row["status"] = r.report["status"];
      row["exit_code"] = r.exit_code;
      row["message"] = r.report["message"];
      row["summary"] = member_summary(r.report);
    } catch (const ConfigErrors& e) {
      row["status"] = "invalid";
      row["exit_code"] = kUsage;
      row["message"] = join(e.errors, "; ");
      row["summary"] = member_summary(Json::object());
    }
    rows[k] = std::move(row);
  };

  unsigned threads = sw.threads > 0 ? static_cast<unsigned>(sw.threads) : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(members.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < members.size(); k = next++) run_member(k);
    });
  }
  for (auto& th : pool) th.join();

  static const char* kSummaryCols[] = {"admissible", "balanced",  "nonabelian_window", "automorphisms",
                                       "futaki",     "converged", "residual_sup",      "alpha_star"};
  std::string csv = "index,command,degrees,exponents,tau,alpha,status,exit_code";
  for (const char* c : kSummaryCols) csv += std::string(",") + c;
  csv += ",message\n";
  for (const auto& row : rows) {
    csv += csv_field(row["index"]) + "," + sw.command + "," + csv_field(row["degrees"]) + "," +
           csv_field(row["exponents"]) + "," + csv_field(row["tau"]) + "," + csv_field(row["alpha"]) + "," +
           csv_field(row["status"]) + "," + csv_field(row["exit_code"]);
    for (const char* c : kSummaryCols) csv += "," + csv_field(row["summary"][c]);
    csv += "," + csv_field(row["message"]) + "\n";
  }
  o.results["member_count"] = members.size();
  o.results["members"] = rows;
  o.files.push_back({"summary.csv", csv});
  return o;
}

Outcome dispatch(const RunConfig& cfg) {
  const auto& c = cfg.command;
  if (c == "solve-vortex") return run_vortex(cfg);
  if (c == "solve-gravitating") return run_gravitating(cfg);
  if (c == "eb-solve") return run_eb(cfg);
  if (c == "futaki") return run_futaki(cfg);
  if (c == "stability") return run_stability(cfg);
  if (c == "quiver-check") return run_quiver(cfg);
  if (c == "sweep") return run_sweep(cfg);
  throw ConfigError("unknown command '" + c + "'");
}

int exit_code_for(const Error& e) {
  const auto& k = e.kind();
  if (k == "infeasible" || k == "obstructed") return kObstructed;
  if (k == "io") return kIo;
  return kUsage;
}

}  // namespace

RunResult execute(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult out;
  Json& rep = out.report;
  rep["artifact"] = {{"name", "kymh"}, {"version", version()}};
  rep["conventions_sha256"] = conventions_sha256();
  rep["simd"] = std::string(kernels::isa_name(kernels::active_isa()));
  rep["command"] = config.command;
  rep["config"] = serialize(config);

  Outcome o;
  try {
    o = dispatch(config);
  } catch (const Error& e) {
    o.exit_code = exit_code_for(e);
    o.status = e.kind();
    o.message = e.what();
    if (o.exit_code == kObstructed && config.degrees && config.degrees->size() == 1 && config.tau) {
      try {
        const auto higgs = config.higgs(std::max(config.alpha.value_or(1.0), 0.0));
        const auto aut = bundle::classify_automorphisms(
            bundle::Divisor::of_monomial(higgs.degrees[0], higgs.exponents[0]));
        o.results["automorphisms"] = bundle::to_string(aut.kind);
        o.results["newton_iterations"] = 0;
        o.verdicts = stability_json(obstructions::stability_check(higgs, config.tau->exact()));
      } catch (const Error&) {
      }
    }
  }
  rep["status"] = o.status;
  rep["exit_code"] = o.exit_code;
  rep["message"] = o.message;
  rep["results"] = std::move(o.results);
  if (!o.verdicts.is_null()) rep["verdicts"] = std::move(o.verdicts);
  out.exit_code = o.exit_code;
  out.files = std::move(o.files);
  rep["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace kymh::cli
