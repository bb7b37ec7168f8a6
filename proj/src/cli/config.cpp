#include "kymh/cli.hpp"

#include "kymh/geometry.hpp"
#include "kymh/rational.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace kymh::cli {

ConfigErrors::ConfigErrors(std::vector<std::string> list)
    : Error("configuration",
            [&] {
              std::string msg;
              for (const auto& e : list) msg += (msg.empty() ? "" : "\n") + e;
              return msg;
            }()),
      errors(std::move(list)) {}

Rational TauValue::exact() const { return number ? to_rational(*number) : parse_rational(text); }

double TauValue::value() const { return number ? *number : to_double(parse_rational(text)); }

Json TauValue::to_json() const { return number ? Json(*number) : Json(text); }

bundle::HiggsConfig RunConfig::higgs(double alpha_default) const {
  bundle::HiggsConfig h;
  h.degrees = degrees.value_or(std::vector<int>{});
  h.exponents = exponents.value_or(std::vector<int>{});
  h.tau = tau ? tau->value() : 0.0;
  h.alpha = alpha.value_or(alpha_default);
  return h;
}

namespace {

bool known_command(const std::string& c) {
  return std::any_of(std::begin(kCommands), std::end(kCommands), [&](const char* k) { return c == k; });
}

void split_into(const std::string& joined, std::vector<std::string>& out) {
  std::size_t start = 0;
  while (true) {
    auto pos = joined.find("; ", start);
    out.push_back(joined.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 2;
  }
}

class Reader {
 public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  void error(const std::string& msg) { errors_.push_back(msg); }

  void check_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : obj.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
        error("unknown key '" + where + key + "'");
      }
    }
  }

  std::optional<int> integer(const Json& v, const std::string& name) {
    if (v.is_number_integer()) {
      auto x = v.get<long long>();
      if (x >= -1000000 && x <= 1000000) return static_cast<int>(x);
    }
    if (v.is_number_float()) {
      double x = v.get<double>();
      if (std::isfinite(x) && x == std::floor(x) && std::abs(x) <= 1e6) return static_cast<int>(x);
    }
    error(name + " must be an integer");
    return std::nullopt;
  }

  std::optional<double> number(const Json& v, const std::string& name) {
    if (v.is_number()) {
      double x = v.get<double>();
      if (std::isfinite(x)) return x;
    }
    error(name + " must be a finite number");
    return std::nullopt;
  }

  std::optional<std::string> string(const Json& v, const std::string& name) {
    if (v.is_string()) return v.get<std::string>();
    error(name + " must be a string");
    return std::nullopt;
  }

  std::optional<std::vector<int>> int_list(const Json& v, const std::string& name) {
    if (!v.is_array()) {
      error(name + " must be an array of integers");
      return std::nullopt;
    }
    std::vector<int> out;
    bool ok = true;
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto x = integer(v[i], name + "[" + std::to_string(i) + "]");
      if (x) out.push_back(*x); else ok = false;
    }
    return ok ? std::optional(out) : std::nullopt;
  }

  std::optional<std::vector<double>> number_list(const Json& v, const std::string& name) {
    if (!v.is_array()) {
      error(name + " must be an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    bool ok = true;
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto x = number(v[i], name + "[" + std::to_string(i) + "]");
      if (x) out.push_back(*x); else ok = false;
    }
    return ok ? std::optional(out) : std::nullopt;
  }

  std::optional<TauValue> tau(const Json& v, const std::string& name) {
    TauValue t;
    if (v.is_number()) {
      auto x = number(v, name);
      if (!x) return std::nullopt;
      t.number = *x;
    } else if (v.is_string()) {
      t.text = v.get<std::string>();
      try {
        (void)parse_rational(t.text);
      } catch (const Error& e) {
        error(name + ": " + e.what());
        return std::nullopt;
      }
    } else {
      error(name + " must be a number or a rational string such as \"5/2\"");
      return std::nullopt;
    }
    if (t.exact() <= 0) {
      error(name + " must be positive");
      return std::nullopt;
    }
    return t;
  }

 private:
  std::vector<std::string>& errors_;
};

std::optional<std::map<std::string, Json>> vertex_map(Reader& r, const Json& obj, const std::string& name,
                                                      const std::vector<std::string>& vertices) {
  if (!obj.is_object()) {
    r.error("quiver." + name + " must be an object keyed by vertex id");
    return std::nullopt;
  }
  std::map<std::string, Json> out;
  for (const auto& [k, v] : obj.items()) {
    if (std::find(vertices.begin(), vertices.end(), k) == vertices.end()) {
      r.error("quiver." + name + " names unknown vertex '" + k + "'");
      continue;
    }
    out[k] = v;
  }
  for (const auto& id : vertices) {
    if (!out.count(id) && !obj.contains(id)) r.error("quiver." + name + " is missing vertex '" + id + "'");
  }
  return out;
}

std::optional<QuiverSection> parse_quiver(Reader& r, const Json& q) {
  if (!q.is_object()) {
    r.error("quiver must be an object");
    return std::nullopt;
  }
  r.check_keys(q, "quiver.", {"vertices", "arrows", "ranks", "degrees", "rho", "sigma", "tau", "reduction"});
  for (const char* k : {"vertices", "arrows", "ranks", "degrees", "sigma", "tau"}) {
    if (!q.contains(k)) r.error("missing required key 'quiver." + std::string(k) + "'");
  }
  if (!q.contains("vertices") || !q["vertices"].is_array()) {
    if (q.contains("vertices")) r.error("quiver.vertices must be an array of strings");
    return std::nullopt;
  }
  QuiverSection out;
  auto& spec = out.spec;
  bool ok = true;
  for (const auto& v : q["vertices"]) {
    if (!v.is_string()) {
      r.error("quiver.vertices must be an array of strings");
      return std::nullopt;
    }
    spec.quiver.vertices.push_back(v.get<std::string>());
  }
  const auto& vs = spec.quiver.vertices;
  auto index_of = [&](const Json& v, const std::string& name) -> std::optional<int> {
    if (v.is_string()) {
      auto it = std::find(vs.begin(), vs.end(), v.get<std::string>());
      if (it != vs.end()) return static_cast<int>(it - vs.begin());
      r.error(name + " names unknown vertex '" + v.get<std::string>() + "'");
    } else {
      r.error(name + " must be a vertex id");
    }
    return std::nullopt;
  };
  if (q.contains("arrows")) {
    if (!q["arrows"].is_array()) {
      r.error("quiver.arrows must be an array");
      ok = false;
    } else {
      for (std::size_t k = 0; k < q["arrows"].size(); ++k) {
        const auto& a = q["arrows"][k];
        const std::string where = "quiver.arrows[" + std::to_string(k) + "]";
        if (!a.is_object()) {
          r.error(where + " must be an object");
          ok = false;
          continue;
        }
        r.check_keys(a, where + ".", {"id", "tail", "head", "exponent", "coefficient"});
        quiver::Arrow arrow;
        for (const char* key : {"id", "tail", "head"}) {
          if (!a.contains(key)) {
            r.error("missing required key '" + where + "." + key + "'");
            ok = false;
          }
        }
        if (!ok) continue;
        auto id = r.string(a["id"], where + ".id");
        auto t = index_of(a["tail"], where + ".tail");
        auto h = index_of(a["head"], where + ".head");
        if (!id || !t || !h) {
          ok = false;
          continue;
        }
        arrow.id = *id;
        arrow.tail = *t;
        arrow.head = *h;
        if (a.contains("exponent") && !a["exponent"].is_null()) {
          auto e = r.integer(a["exponent"], where + ".exponent");
          if (e) arrow.exponent = *e; else ok = false;
        }
        if (a.contains("coefficient")) {
          auto c = r.number(a["coefficient"], where + ".coefficient");
          if (c) arrow.coefficient = *c; else ok = false;
        }
        spec.quiver.arrows.push_back(arrow);
      }
    }
  }
  auto read_map = [&](const char* key, auto convert, auto& dest) {
    if (!q.contains(key)) {
      ok = false;
      return;
    }
    auto m = vertex_map(r, q[key], key, vs);
    if (!m || m->size() != vs.size()) {
      ok = false;
      return;
    }
    for (const auto& id : vs) {
      auto x = convert(m->at(id), std::string("quiver.") + key + "." + id);
      if (x) dest.push_back(*x); else ok = false;
    }
  };
  auto as_int = [&](const Json& v, const std::string& n) { return r.integer(v, n); };
  auto as_num = [&](const Json& v, const std::string& n) { return r.number(v, n); };
  read_map("ranks", as_int, spec.ranks);
  read_map("degrees", as_int, spec.degrees);
  read_map("sigma", as_num, spec.sigma);
  read_map("tau", as_num, spec.tau);
  if (q.contains("rho")) {
    auto x = r.number(q["rho"], "quiver.rho");
    if (x) spec.rho = *x; else ok = false;
  }
  if (q.contains("reduction")) {
    const auto& red = q["reduction"];
    if (!red.is_object()) {
      r.error("quiver.reduction must be an object");
      ok = false;
    } else {
      r.check_keys(red, "quiver.reduction.", {"multiplicities", "vertex_slopes", "global_slope"});
      quiver::ReductionInputs in;
      for (const char* k : {"multiplicities", "vertex_slopes", "global_slope"}) {
        if (!red.contains(k)) {
          r.error("missing required key 'quiver.reduction." + std::string(k) + "'");
          ok = false;
        }
      }
      if (ok) {
        auto m = red.contains("multiplicities") ? vertex_map(r, red["multiplicities"], "reduction.multiplicities", vs)
                                                : std::nullopt;
        auto sl = vertex_map(r, red["vertex_slopes"], "reduction.vertex_slopes", vs);
        if (m && sl && m->size() == vs.size() && sl->size() == vs.size()) {
          for (const auto& id : vs) {
            auto a = r.integer(m->at(id), "quiver.reduction.multiplicities." + id);
            auto b = r.number(sl->at(id), "quiver.reduction.vertex_slopes." + id);
            if (a && b) {
              if (*a < 1) r.error("quiver.reduction.multiplicities." + id + " must be >= 1");
              in.multiplicities.push_back(*a);
              in.vertex_slopes.push_back(*b);
            } else {
              ok = false;
            }
          }
        } else {
          ok = false;
        }
        auto g = r.number(red["global_slope"], "quiver.reduction.global_slope");
        if (g) in.global_slope = *g; else ok = false;
        if (ok) out.reduction = in;
      }
    }
  }
  if (!ok) return std::nullopt;
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    std::vector<std::string> parts;
    split_into(e.what(), parts);
    for (auto& p : parts) r.error("quiver: " + p);
    return std::nullopt;
  } catch (const Error& e) {
    r.error(std::string("quiver: ") + e.what());
    return std::nullopt;
  }
  return out;
}

std::optional<SweepSpec> parse_sweep(Reader& r, const Json& s) {
  if (!s.is_object()) {
    r.error("sweep must be an object");
    return std::nullopt;
  }
  r.check_keys(s, "sweep.", {"command", "tau", "alpha", "degrees", "exponents", "threads"});
  SweepSpec out;
  bool ok = true;
  if (!s.contains("command")) {
    r.error("missing required key 'sweep.command'");
    ok = false;
  } else if (auto c = r.string(s["command"], "sweep.command")) {
    out.command = *c;
    if (*c == "sweep" || *c == "quiver-check" || !known_command(*c)) {
      r.error("sweep.command must be one of solve-vortex, solve-gravitating, eb-solve, futaki, stability");
      ok = false;
    }
  } else {
    ok = false;
  }
  auto array = [&](const char* key) -> const Json* {
    if (!s.contains(key)) return nullptr;
    if (!s[key].is_array()) {
      r.error(std::string("sweep.") + key + " must be an array");
      ok = false;
      return nullptr;
    }
    return &s[key];
  };
  if (const Json* a = array("tau")) {
    for (std::size_t i = 0; i < a->size(); ++i) {
      auto t = r.tau((*a)[i], "sweep.tau[" + std::to_string(i) + "]");
      if (t) out.tau.push_back(*t); else ok = false;
    }
  }
  if (const Json* a = array("alpha")) {
    auto v = r.number_list(*a, "sweep.alpha");
    if (v) out.alpha = *v; else ok = false;
  }
  for (const char* key : {"degrees", "exponents"}) {
    if (const Json* a = array(key)) {
      auto& dest = std::string(key) == "degrees" ? out.degrees : out.exponents;
      for (std::size_t i = 0; i < a->size(); ++i) {
        auto v = r.int_list((*a)[i], std::string("sweep.") + key + "[" + std::to_string(i) + "]");
        if (v) dest.push_back(*v); else ok = false;
      }
    }
  }
  if (s.contains("threads")) {
    auto t = r.integer(s["threads"], "sweep.threads");
    if (t && *t >= 0) out.threads = *t;
    else {
      if (t) r.error("sweep.threads must be >= 0");
      ok = false;
    }
  }
  return ok ? std::optional(out) : std::nullopt;
}

}  // namespace

RunConfig parse_config(const Json& doc) {
  std::vector<std::string> errors;
  Reader r(errors);
  RunConfig cfg;
  if (!doc.is_object()) throw ConfigErrors({"configuration must be a JSON object"});
  r.check_keys(doc, "", {"command", "degrees", "exponents", "tau", "alpha", "n", "tolerance", "max_iter",
                         "schedule", "override_obstruction", "output", "quiver", "sweep"});

  if (!doc.contains("command")) {
    r.error("missing required key 'command'");
  } else if (auto c = r.string(doc["command"], "command")) {
    cfg.command = *c;
    if (!known_command(*c)) r.error("unknown command '" + *c + "'");
  }
  if (doc.contains("degrees")) cfg.degrees = r.int_list(doc["degrees"], "degrees");
  if (doc.contains("exponents")) cfg.exponents = r.int_list(doc["exponents"], "exponents");
  if (doc.contains("tau")) cfg.tau = r.tau(doc["tau"], "tau");
  if (doc.contains("alpha")) cfg.alpha = r.number(doc["alpha"], "alpha");
  if (doc.contains("n")) {
    if (auto n = r.integer(doc["n"], "n")) {
      cfg.n = *n;
      if (*n % 2 == 0) r.error("n must be odd");
      if (*n < geometry::kMinNodes || *n > geometry::kMaxNodes) {
        r.error("n must be between " + std::to_string(geometry::kMinNodes) + " and " +
                std::to_string(geometry::kMaxNodes));
      }
    }
  }
  if (doc.contains("tolerance")) {
    if (auto t = r.number(doc["tolerance"], "tolerance")) {
      cfg.tolerance = *t;
      if (*t <= 0.0) r.error("tolerance must be positive");
    }
  }
  if (doc.contains("max_iter")) {
    if (auto m = r.integer(doc["max_iter"], "max_iter")) {
      cfg.max_iter = *m;
      if (*m < 1) r.error("max_iter must be at least 1");
    }
  }
  if (doc.contains("schedule")) {
    cfg.schedule = r.number_list(doc["schedule"], "schedule");
    if (cfg.schedule) {
      const auto& a = *cfg.schedule;
      bool increasing = !a.empty() && a.front() == 0.0;
      for (std::size_t i = 1; i < a.size(); ++i) increasing = increasing && a[i] > a[i - 1];
      if (!increasing) r.error("schedule must start at 0 and be strictly increasing");
    }
  }
  if (doc.contains("override_obstruction")) {
    if (doc["override_obstruction"].is_boolean()) cfg.override_obstruction = doc["override_obstruction"].get<bool>();
    else r.error("override_obstruction must be a boolean");
  }
  if (doc.contains("output")) {
    const auto& o = doc["output"];
    if (!o.is_object()) {
      r.error("output must be an object");
    } else {
      r.check_keys(o, "output.", {"directory", "formats"});
      if (o.contains("directory")) {
        if (auto d = r.string(o["directory"], "output.directory")) cfg.output.directory = *d;
      }
      if (o.contains("formats")) {
        if (!o["formats"].is_array()) {
          r.error("output.formats must be an array");
        } else {
          cfg.output.formats.clear();
          for (const auto& f : o["formats"]) {
            if (f.is_string() && (f == "json" || f == "csv")) {
              cfg.output.formats.push_back(f.get<std::string>());
            } else {
              r.error("output.formats entries must be \"json\" or \"csv\"");
            }
          }
        }
      }
    }
  }
  if (doc.contains("quiver")) cfg.quiver = parse_quiver(r, doc["quiver"]);
  if (doc.contains("sweep")) cfg.sweep = parse_sweep(r, doc["sweep"]);

  // Command-specific requirements.
  const std::string& cmd = cfg.command;
  std::string target = cmd;
  if (cmd == "sweep") {
    if (!doc.contains("sweep")) r.error("missing required key 'sweep'");
    target = cfg.sweep ? cfg.sweep->command : std::string();
  }
  const bool higgs_cmd = target == "solve-vortex" || target == "solve-gravitating" || target == "eb-solve" ||
                         target == "futaki" || target == "stability";
  if (higgs_cmd) {
    auto gridded = [&](const char* key) {
      if (cmd != "sweep" || !cfg.sweep) return false;
      const std::string k = key;
      return (k == "tau" && !cfg.sweep->tau.empty()) || (k == "degrees" && !cfg.sweep->degrees.empty()) ||
             (k == "exponents" && !cfg.sweep->exponents.empty());
    };
    std::vector<std::string> missing;
    for (const char* key : {"degrees", "exponents", "tau"}) {
      if (!doc.contains(key) && !gridded(key)) missing.emplace_back(key);
    }
    if (!missing.empty()) {
      std::string list;
      for (const auto& m : missing) list += (list.empty() ? "'" : ", '") + m + "'";
      r.error("missing required key" + std::string(missing.size() > 1 ? "s " : " ") + list + " for " + target);
    }
    if (cmd != "sweep" && cfg.degrees && cfg.exponents && cfg.tau) {
      try {
        cfg.higgs().validate();
      } catch (const ConfigError& e) {
        std::vector<std::string> parts;
        split_into(e.what(), parts);
        for (auto& p : parts) {
          if (p != "tau must be positive") r.error(p);
        }
      }
      if ((target == "solve-vortex" || target == "solve-gravitating" || target == "eb-solve") &&
          cfg.degrees->size() != 1) {
        r.error(target + " takes a single degree (line bundle O(N))");
      }
    }
    if (target == "solve-gravitating" && !doc.contains("alpha") && !doc.contains("schedule") &&
        !(cmd == "sweep" && cfg.sweep && !cfg.sweep->alpha.empty())) {
      r.error("missing required key 'alpha' or 'schedule' for solve-gravitating");
    }
    if (target == "solve-gravitating" && cfg.alpha && *cfg.alpha < 0.0) {
      r.error("alpha must be non-negative for solve-gravitating");
    }
    if (target == "solve-gravitating" && cfg.alpha && cfg.schedule && cfg.schedule->back() != *cfg.alpha) {
      r.error("schedule must end at alpha");
    }
  }
  if (target == "quiver-check" && !doc.contains("quiver")) r.error("missing required key 'quiver' for quiver-check");

  if (!errors.empty()) throw ConfigErrors(errors);
  return cfg;
}

RunConfig parse_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigErrors({std::string("malformed JSON: ") + e.what()});
  }
  return parse_config(doc);
}

namespace {

Json quiver_json(const QuiverSection& q) {
  const auto& spec = q.spec;
  const auto& vs = spec.quiver.vertices;
  Json out;
  out["vertices"] = vs;
  out["arrows"] = Json::array();
  for (const auto& a : spec.quiver.arrows) {
    Json j;
    j["id"] = a.id;
    j["tail"] = vs[static_cast<std::size_t>(a.tail)];
    j["head"] = vs[static_cast<std::size_t>(a.head)];
    j["exponent"] = a.exponent ? Json(*a.exponent) : Json(nullptr);
    j["coefficient"] = a.coefficient;
    out["arrows"].push_back(j);
  }
  auto by_vertex = [&](const auto& values) {
    Json m = Json::object();
    for (std::size_t i = 0; i < vs.size(); ++i) m[vs[i]] = values[i];
    return m;
  };
  out["ranks"] = by_vertex(spec.ranks);
  out["degrees"] = by_vertex(spec.degrees);
  out["rho"] = spec.rho;
  out["sigma"] = by_vertex(spec.sigma);
  out["tau"] = by_vertex(spec.tau);
  if (q.reduction) {
    out["reduction"]["multiplicities"] = by_vertex(q.reduction->multiplicities);
    out["reduction"]["vertex_slopes"] = by_vertex(q.reduction->vertex_slopes);
    out["reduction"]["global_slope"] = q.reduction->global_slope;
  }
  return out;
}

}  // namespace

Json serialize(const RunConfig& c) {
  Json out;
  out["command"] = c.command;
  if (c.degrees) out["degrees"] = *c.degrees;
  if (c.exponents) out["exponents"] = *c.exponents;
  if (c.tau) out["tau"] = c.tau->to_json();
  if (c.alpha) out["alpha"] = *c.alpha;
  out["n"] = c.n;
  out["tolerance"] = c.tolerance;
  out["max_iter"] = c.max_iter;
  if (c.schedule) out["schedule"] = *c.schedule;
  out["override_obstruction"] = c.override_obstruction;
  out["output"]["directory"] = c.output.directory;
  out["output"]["formats"] = c.output.formats;
  if (c.quiver) out["quiver"] = quiver_json(*c.quiver);
  if (c.sweep) {
    Json s;
    s["command"] = c.sweep->command;
    s["tau"] = Json::array();
    for (const auto& t : c.sweep->tau) s["tau"].push_back(t.to_json());
    s["alpha"] = c.sweep->alpha;
    s["degrees"] = c.sweep->degrees;
    s["exponents"] = c.sweep->exponents;
    s["threads"] = c.sweep->threads;
    out["sweep"] = s;
  }
  return out;
}

}  // namespace kymh::cli
