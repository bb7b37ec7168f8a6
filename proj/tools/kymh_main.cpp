// kymh: solve and check the Kahler-Yang-Mills-Higgs family on the sphere.

#include "kymh/cli.hpp"
#include "kymh/geometry.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  using namespace kymh::cli;
  CLI::App app{"kymh: Kahler-Yang-Mills-Higgs solvers and obstructions on P^1"};
  std::string config_path, out_dir;
  bool override_obstruction = false;
  int resolution = 0;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_dir, "output directory (default: config, then $KYMH_OUT_DIR, then ./kymh_out)");
  app.add_flag("--override-obstruction", override_obstruction,
               "run the gravitating solver even when the reductivity obstruction applies");
  app.add_option("--resolution", resolution, "grid size n (odd), overrides the config");
  app.set_version_flag("--version", version());
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read config " << config_path << "\n";
    return kIo;
  }
  std::stringstream text;
  text << in.rdbuf();

  RunConfig config;
  try {
    config = parse_config(text.str());
    if (resolution != 0) {
      Json doc = serialize(config);
      doc["n"] = resolution;
      config = parse_config(doc);
    }
  } catch (const ConfigErrors& e) {
    for (const auto& msg : e.errors) std::cerr << "config error: " << msg << "\n";
    return kUsage;
  }
  if (override_obstruction) config.override_obstruction = true;

  std::string directory = out_dir;
  if (directory.empty()) directory = config.output.directory;
  if (directory.empty()) {
    const char* env = std::getenv("KYMH_OUT_DIR");
    directory = env && *env ? env : "kymh_out";
  }

  const RunResult result = execute(config);
  try {
    write_outputs(result, config, directory);
  } catch (const kymh::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  }
  const auto& rep = result.report;
  std::cout << config.command << ": " << rep["status"].get<std::string>() << " (exit " << result.exit_code
            << ")\n";
  if (!rep["message"].get<std::string>().empty()) {
    (result.exit_code == kOk ? std::cout : std::cerr) << rep["message"].get<std::string>() << "\n";
  }
  std::cout << "output: " << directory << "\n";
  return result.exit_code;
}
