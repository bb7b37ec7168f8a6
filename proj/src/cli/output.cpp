#include "kymh/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#ifndef KYMH_VERSION
#define KYMH_VERSION "0.0.0"
#endif
#ifndef KYMH_CONVENTIONS_SHA256
#define KYMH_CONVENTIONS_SHA256 "unknown"
#endif

namespace kymh::cli {

namespace fs = std::filesystem;

std::string conventions_sha256() { return KYMH_CONVENTIONS_SHA256; }
std::string version() { return KYMH_VERSION; }

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string profile_csv(std::span<const double> s, const std::vector<std::string>& names,
                        const std::vector<const std::vector<double>*>& columns) {
  std::string out = "s";
  for (const auto& n : names) out += "," + n;
  out += "\n";
  for (std::size_t j = 0; j < s.size(); ++j) {
    out += format_double(s[j]);
    for (const auto* c : columns) out += "," + format_double((*c)[j]);
    out += "\n";
  }
  return out;
}

Json without_timing(Json report) {
  if (report.is_object()) {
    report.erase("wall_time_seconds");
    for (auto& [_, v] : report.items()) v = without_timing(v);
  } else if (report.is_array()) {
    for (auto& v : report) v = without_timing(v);
  }
  return report;
}

namespace {

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string() + ": " + ec.message());
  }
}

bool wants(const RunConfig& c, const char* fmt) {
  return std::find(c.output.formats.begin(), c.output.formats.end(), fmt) != c.output.formats.end();
}

}  // namespace

void write_outputs(const RunResult& result, const RunConfig& config, const std::string& directory) {
  const fs::path dir(directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + directory + (ec ? ": " + ec.message() : ""));
  }
  if (wants(config, "csv")) {
    for (const auto& f : result.files) write_atomic(dir / f.name, f.content);
  }
  if (wants(config, "json")) write_atomic(dir / "report.json", result.report.dump(2) + "\n");
}

}  // namespace kymh::cli
