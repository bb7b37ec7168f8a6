#pragma once
// Run configuration, command dispatch and report emission for the `kymh` tool.

#include "kymh/bundle_fields.hpp"
#include "kymh/errors.hpp"
#include "kymh/quiver.hpp"

#include "json.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kymh::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kCommands[] = {"solve-vortex", "solve-gravitating", "eb-solve", "futaki",
                                            "stability",    "quiver-check",      "sweep"};

enum ExitCode : int { kOk = 0, kUsage = 1, kObstructed = 2, kNotConverged = 3, kIo = 4 };

struct OutputSpec {
  std::string directory;  // empty: --out, then KYMH_OUT_DIR, then ./kymh_out
  std::vector<std::string> formats{"json", "csv"};

  bool operator==(const OutputSpec&) const = default;
};

struct QuiverSection {
  quiver::QuiverBundleSpec spec;
  std::optional<quiver::ReductionInputs> reduction;

  bool operator==(const QuiverSection&) const = default;
};

/// tau as given: a JSON number (exact binary value) or a "p/q" / decimal string.
struct TauValue {
  std::optional<double> number;
  std::string text;

  Rational exact() const;
  double value() const;
  Json to_json() const;
  bool operator==(const TauValue&) const = default;
};

/// Parameter grid for `sweep`. Empty lists keep the base value.
struct SweepSpec {
  std::string command;
  std::vector<TauValue> tau;
  std::vector<double> alpha;
  std::vector<std::vector<int>> degrees;
  std::vector<std::vector<int>> exponents;
  int threads = 0;  // 0: hardware concurrency

  bool operator==(const SweepSpec&) const = default;
};

struct RunConfig {
  std::string command;
  std::optional<std::vector<int>> degrees;
  std::optional<std::vector<int>> exponents;
  std::optional<TauValue> tau;
  std::optional<double> alpha;
  int n = 129;
  double tolerance = 1e-10;
  int max_iter = 50;
  std::optional<std::vector<double>> schedule;
  bool override_obstruction = false;
  OutputSpec output;
  std::optional<QuiverSection> quiver;
  std::optional<SweepSpec> sweep;

  bool operator==(const RunConfig&) const = default;

  /// HiggsConfig for the abelian / rank-2 commands. `alpha_default` fills a
  /// missing alpha.
  bundle::HiggsConfig higgs(double alpha_default = 0.0) const;
};

/// Every validation failure, in document order.
struct ConfigErrors : Error {
  explicit ConfigErrors(std::vector<std::string> list);
  std::vector<std::string> errors;
};

RunConfig parse_config(const Json& doc);
RunConfig parse_config(const std::string& text);  // JSON syntax errors become ConfigErrors
Json serialize(const RunConfig& config);

struct OutputFile {
  std::string name;
  std::string content;
};

struct RunResult {
  int exit_code = kOk;
  Json report;
  std::vector<OutputFile> files;  // report.json is added by write_outputs
};

/// Dispatches to the owning module. Library errors become exit codes with the
/// report still populated; nothing is written here.
RunResult execute(const RunConfig& config);

/// Writes report.json and the CSV files, each through a temp file and rename.
/// Throws IoError.
void write_outputs(const RunResult& result, const RunConfig& config, const std::string& directory);

/// 17 significant digits.
std::string format_double(double x);
/// Columns s,<names...> with one row per node.
std::string profile_csv(std::span<const double> s, const std::vector<std::string>& names,
                        const std::vector<const std::vector<double>*>& columns);

/// Strips wall_time_seconds recursively, for determinism checks.
Json without_timing(Json report);

std::string conventions_sha256();
std::string version();

}  // namespace kymh::cli
