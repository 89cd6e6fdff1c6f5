// t2tsim: run a tag-to-tag backscatter scenario and write CSV + manifest.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "t2t/scenarios.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw t2t::ConfigError("cannot open config file " + path);
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw t2t::ConfigError("config file is not valid JSON: " + path);
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  namespace sc = t2t::scenarios;

  CLI::App app{"Tag-to-tag backscatter network simulator"};
  std::string config_path;
  std::string scenario;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  bool print_defaults = false;

  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--scenario", scenario,
                 "coverage | range | line-range | grid-coverage | mac-sim | efficiency | bridge");
  app.add_option("--set", overrides, "Override a config value, e.g. --set coverage.runs=200");
  auto* seed_opt = app.add_option("--seed", seed, "Base seed (overrides the config)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_flag("--print-defaults", print_defaults, "Print the default configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  if (print_defaults) {
    std::cout << sc::default_config().dump(2) << '\n';
    return 0;
  }

  nlohmann::json config;
  try {
    config = sc::default_config();
    if (!config_path.empty()) config = sc::merge_config(config, load_json(config_path));
    if (!scenario.empty()) config["scenario"] = scenario;
    for (const auto& o : overrides) sc::apply_override(config, o);
    if (*seed_opt) config["seed"] = seed;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  }

  sc::RunResult result;
  try {
    result = sc::run_scenario(config);
  } catch (const t2t::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return kExitRuntime;
  }

  try {
    sc::write_outputs(out_dir, config, result);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return kExitRuntime;
  }
  for (const auto& f : result.files) std::printf("%s/%s\n", out_dir.c_str(), f.name.c_str());
  std::printf("%s/manifest.json\n", out_dir.c_str());
  return 0;
}
