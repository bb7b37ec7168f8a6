#include "kymh/cli.hpp"

#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace kymh;
using namespace kymh::cli;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> errors_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigErrors& e) {
    return e.errors;
  }
  return {};
}

bool mentions(const std::vector<std::string>& errs, const std::string& needle) {
  for (const auto& e : errs)
    if (e.find(needle) != std::string::npos) return true;
  return false;
}

fs::path scratch() {
  const char* env = std::getenv("KYMH_TEST_TMP");
  fs::path p = env ? fs::path(env) : fs::temp_directory_path() / "kymh_cli_test";
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("every shipped config parses and round-trips") {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(KYMH_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    const RunConfig c = parse_config(read_file(entry.path()));
    const RunConfig back = parse_config(serialize(c));
    CHECK(back == c);
    CHECK(serialize(back) == serialize(c));
    ++count;
  }
  CHECK(count >= 5);
}

TEST_CASE("all validation errors are collected") {
  const auto errs = errors_of(R"({"command":"solve-vortex","degrees":[1],"exponents":[0],"tau":-1,"n":128,"bogus":1})");
  CHECK(mentions(errs, "unknown key 'bogus'"));
  CHECK(mentions(errs, "tau must be positive"));
  CHECK(mentions(errs, "n must be odd"));
  CHECK(errs.size() >= 3);
  CHECK(mentions(errors_of(R"({"command":"solve-vortex"})"), "missing required key"));
  CHECK(mentions(errors_of(R"({"command":"fly"})"), "command"));
  CHECK(mentions(errors_of("{not json"), ""));
  CHECK_FALSE(errors_of("{not json").empty());
  CHECK(mentions(errors_of(R"({"command":"solve-gravitating","degrees":[2],"exponents":[1],"tau":5,"schedule":[0.1,0.2]})"),
                 "schedule must start at 0"));
  CHECK(mentions(errors_of(R"({"command":"solve-vortex","degrees":[1,2],"exponents":[0,1],"tau":9})"),
                 "single degree"));
  CHECK(mentions(errors_of(R"({"command":"solve-vortex","degrees":[1],"exponents":[0],"tau":3,"n":5001})"),
                 "n must be between"));
}

TEST_CASE("tau keeps its exact value") {
  const auto a = parse_config(std::string(R"({"command":"stability","degrees":[2,2],"exponents":[1,1],"tau":"11/2"})"));
  CHECK(a.tau->exact() == Rational(11, 2));
  const auto b = parse_config(std::string(R"({"command":"stability","degrees":[2,2],"exponents":[1,1],"tau":0.1})"));
  CHECK(b.tau->exact() == to_rational(0.1));
  CHECK(b.tau->value() == 0.1);
}

TEST_CASE("futaki and stability commands map verdicts to exit codes") {
  auto c = parse_config(std::string(R"({"command":"futaki","degrees":[1,1],"exponents":[0,1],"tau":5})"));
  auto r = execute(c);
  CHECK(r.exit_code == kOk);
  CHECK(r.report["results"]["vanishes"].get<bool>());
  c = parse_config(std::string(R"({"command":"futaki","degrees":[2,2],"exponents":[1,0],"tau":5,"alpha":1})"));
  r = execute(c);
  CHECK(r.exit_code == kObstructed);
  c = parse_config(std::string(R"({"command":"stability","degrees":[1,1],"exponents":[0,1],"tau":"7/2"})"));
  r = execute(c);
  CHECK(r.exit_code == kOk);
  CHECK(r.report["verdicts"]["admissible"].get<bool>());
}

TEST_CASE("obstructed gravitating run stops before Newton") {
  auto c = parse_config(std::string(R"({"command":"solve-gravitating","degrees":[1],"exponents":[0],"tau":3,"alpha":0.1,"n":65})"));
  const auto r = execute(c);
  CHECK(r.exit_code == kObstructed);
  CHECK(r.report["message"].get<std::string>().find("If φ has only one zero") != std::string::npos);
  CHECK(r.report["results"]["automorphisms"] == "non_reductive_borel");
  CHECK(r.report["results"]["newton_iterations"] == 0);
  c.override_obstruction = true;
  const auto o = execute(c);
  CHECK(o.exit_code != kObstructed);
}

TEST_CASE("reports are deterministic apart from timing") {
  const auto c = parse_config(std::string(R"({"command":"solve-vortex","degrees":[1],"exponents":[0],"tau":3,"n":65})"));
  const auto a = execute(c), b = execute(c);
  CHECK(without_timing(a.report) == without_timing(b.report));
  CHECK_FALSE(without_timing(a.report).contains("wall_time_seconds"));
  REQUIRE(a.files.size() == 1);
  CHECK(a.files[0].name == "profile.csv");
  CHECK(a.files[0].content == b.files[0].content);
}

TEST_CASE("sweep keeps input order") {
  const auto c = parse_config(std::string(
      R"({"command":"sweep","sweep":{"command":"stability","degrees":[[2,2]],"exponents":[[0,0],[1,0],[1,1]],"tau":[5,"11/2"],"threads":3}})"));
  const auto r = execute(c);
  const auto& members = r.report["results"]["members"];
  REQUIRE(members.size() == 6);
  for (std::size_t i = 0; i < members.size(); ++i) CHECK(members[i]["index"] == i);
  CHECK(r.files[0].name == "summary.csv");
}

TEST_CASE("outputs are written atomically and IO failures are reported") {
  const auto dir = scratch() / "out";
  fs::remove_all(dir);
  const auto c = parse_config(std::string(R"({"command":"futaki","degrees":[1,1],"exponents":[0,1],"tau":5})"));
  const auto r = execute(c);
  write_outputs(r, c, dir.string());
  CHECK(fs::exists(dir / "report.json"));
  for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().string().find(".tmp.") == std::string::npos);
  const auto parsed = Json::parse(read_file(dir / "report.json"));
  CHECK(parsed["conventions_sha256"] == conventions_sha256());

  const auto blocker = scratch() / "blocker";
  std::ofstream(blocker) << "x";
  CHECK_THROWS_AS(write_outputs(r, c, (blocker / "sub").string()), IoError);
}

TEST_CASE("doubles print with round-trip precision") {
  for (double x : {0.1, 1.0 / 3.0, 2.0e-300, -123456.789}) CHECK(std::stod(format_double(x)) == x);
}
