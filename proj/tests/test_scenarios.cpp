#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "t2t/scenarios.hpp"

using namespace t2t;
using namespace t2t::scenarios;
namespace fs = std::filesystem;

namespace {

json small_config(const std::string& scenario) {
  json c = default_config();
  c["scenario"] = scenario;
  c["coverage"]["runs"] = 40;
  c["coverage"]["tag_counts"] = json::array({2, 3, 4});
  c["coverage"]["area_side"] = 3.0;
  c["range"]["max_tags"] = 20;
  c["line_range"]["d1_m"] = json::array({1.0});
  c["line_range"]["max_hops"] = 2;
  c["line_range"]["validate_frames"] = 4;
  c["efficiency"]["runs"] = 50;
  c["grid_coverage"]["frames"] = 4;
  c["grid_coverage"]["runs"] = 1;
  c["grid_coverage"]["forward_area_m"] = 1.0;
  c["grid_coverage"]["backward_area_m"] = 1.0;
  c["bridge"]["frames"] = 3;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(T2TSIM_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("t2tsim_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::vector<std::string> names(const RunResult& r) {
  std::vector<std::string> out;
  for (const auto& f : r.files) out.push_back(f.name);
  return out;
}

}  // namespace

TEST_CASE("merge rejects unknown keys") {
  const json d = default_config();
  CHECK_THROWS_AS(merge_config(d, json{{"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(merge_config(d, json{{"mac", {{"sleep_period", 1}}}}), ConfigError);
  const json m = merge_config(d, json{{"mac", {{"sleep_period_ms", 30.0}}}});
  CHECK(m["mac"]["sleep_period_ms"] == 30.0);
  CHECK(m["mac"]["observation_ms"] == 6.1);

  const json dep = {{"exciters", json::array({{{"x", 0.0}, {"y", 0.0}}})},
                    {"tags", json::array({{{"id", 1}, {"x", 1.0}, {"y", 0.0}}})}};
  const json r = merge_config(d, json{{"mac_sim", {{"deployment", dep}}}});
  CHECK(r["mac_sim"]["deployment"]["tags"].size() == 1);
}

TEST_CASE("dotted overrides") {
  json c = default_config();
  apply_override(c, "coverage.runs=200");
  CHECK(c["coverage"]["runs"] == 200);
  apply_override(c, "env.gain_pattern=sector");
  CHECK(c["env"]["gain_pattern"] == "sector");
  apply_override(c, "line_range.d1_m=[1.5,2.5]");
  CHECK(c["line_range"]["d1_m"].size() == 2);
  CHECK_THROWS_AS(apply_override(c, "coverage.nope=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "coverage.runs"), ConfigError);
}

TEST_CASE("environment and mac from json") {
  const json c = default_config();
  const auto env = env_from_json(c["env"]);
  const auto ref = rf::RfEnvironment::standard();
  CHECK(env.wavelength() == doctest::Approx(ref.wavelength()).epsilon(1e-15));
  CHECK(env.exciter_power() == doctest::Approx(ref.exciter_power()).epsilon(1e-12));
  CHECK(env.exciter_boresight_gain() == doctest::Approx(ref.exciter_boresight_gain()).epsilon(1e-12));

  const auto mac = mac_from_json(c["mac"]);
  CHECK(mac.jitter_low.count() == 400);
  CHECK(mac.jitter_high.count() == 600);
  CHECK(mac.sleep_period == ms_to_ticks(26.5));
  CHECK(mac.relay.rebroadcast_limit == 1);

  json bad = c["mac"];
  bad["phase_policy"] = "sometimes";
  CHECK_THROWS_AS(mac_from_json(bad), ConfigError);

  CHECK(std::holds_alternative<topology::NoCancellation>(cancellation_from_json({{"mode", "off"}, {"band_rad", 0.2}, {"probability", 0.1}})));
  const auto b = cancellation_from_json({{"mode", "bernoulli"}, {"band_rad", 0.2}, {"probability", 0.3}});
  CHECK(std::get<topology::BernoulliCancellation>(b).probability == 0.3);
  CHECK_THROWS_AS(cancellation_from_json({{"mode", "sometimes"}, {"band_rad", 0.2}, {"probability", 0.1}}), ConfigError);
}

TEST_CASE("relay position tie-break") {
  // Midpoint (0.5, 0.75): four grid points at equal distance; smallest x then y wins.
  const auto r = relay_position({0.5, 0.5}, {0.5, 1.0}, 2.0, 0.5, {{0.0, 0.0}, {0.5, 0.5}, {0.5, 1.0}});
  CHECK(r == rf::Position{0.0, 0.5});
  const auto exact = relay_position({0.5, 0.5}, {1.5, 0.5}, 2.0, 0.5, {{0.5, 0.5}, {1.5, 0.5}});
  CHECK(exact == rf::Position{1.0, 0.5});
}

TEST_CASE("every scenario runs and names its outputs") {
  const std::vector<std::pair<std::string, std::vector<std::string>>> expect = {
      {"coverage", {"coverage.csv"}},
      {"range", {"range.csv"}},
      {"line-range", {"line_range.csv"}},
      {"grid-coverage", {"grid_coverage.csv", "grid_summary.csv"}},
      {"mac-sim", {"mac_report.json", "deliveries.csv", "energy.csv"}},
      {"efficiency", {"efficiency_table.csv", "cross_validation.csv"}},
      {"bridge", {"bridge.csv", "bridge_summary.csv"}},
  };
  for (const auto& [scenario, files] : expect) {
    CAPTURE(scenario);
    const auto r = run_scenario(small_config(scenario));
    CHECK(names(r) == files);
    for (const auto& f : r.files) CHECK_FALSE(f.content.empty());
  }
  json bad = small_config("coverage");
  bad["scenario"] = "nothing";
  CHECK_THROWS_AS(run_scenario(bad), ConfigError);
  json wrong_type = small_config("coverage");
  wrong_type["coverage"]["runs"] = "many";
  CHECK_THROWS_AS(run_scenario(wrong_type), ConfigError);
}

TEST_CASE("manifest hashes are reproducible") {
  for (const char* s : {"coverage", "mac-sim", "grid-coverage"}) {
    const json c = small_config(s);
    const auto a = make_manifest(c, run_scenario(c));
    const auto b = make_manifest(c, run_scenario(c));
    CHECK(a.at("content_hash") == b.at("content_hash"));
    CHECK(a.at("tool") == "t2tsim");
    CHECK(a.at("seed") == 1);
    CHECK(a.at("files").size() >= 1);
  }
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("line range on a short chain") {
  LineRangeParams p;
  p.d1_list = {3.0};
  p.max_hops = 2;
  p.validate_frames = 6;
  const auto rows = run_line_range(p);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    CHECK(row.range_m > 0.0);
    CHECK(row.gain >= 1.0);
    if (row.hops == 1) CHECK(row.gain == doctest::Approx(1.0));
  }
  // Backward hop from 3 m lands near the analytic optimum 1.502 m.
  for (const auto& row : rows) {
    if (row.direction == Direction::kBackward && row.hops == 1) {
      CHECK(row.range_m == doctest::Approx(1.502).epsilon(0.01));
      CHECK(row.analytic_range_m == doctest::Approx(1.50243).epsilon(1e-4));
    }
  }
}

TEST_CASE("bridge crosses clusters") {
  BridgeParams p;
  p.frames = 4;
  const auto r = run_bridge(p);
  CHECK(r.delivered() >= 1);
  CHECK(r.max_hops() >= 2);
}

TEST_CASE("cli exit codes and outputs") {
  CHECK(run_cli("--print-defaults") == 0);
  CHECK(run_cli("--set bogus.key=1 --out " + scratch("bogus").string()) == 2);
  CHECK(run_cli("--scenario nothing --out " + scratch("nothing").string()) == 2);
  CHECK(run_cli("--config /nonexistent/config.json") == 2);
  CHECK(run_cli("--no-such-flag") == 2);
  CHECK(run_cli("--scenario range --out /dev/null/out") == 3);

  const auto a = scratch("a");
  const auto b = scratch("b");
  const std::string common = "--scenario range --set range.max_tags=30 --seed 5 --out ";
  REQUIRE(run_cli(common + a.string()) == 0);
  REQUIRE(run_cli(common + b.string()) == 0);
  CHECK(fs::exists(a / "range.csv"));
  CHECK(slurp(a / "range.csv") == slurp(b / "range.csv"));
  CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
  const auto m = json::parse(slurp(a / "manifest.json"));
  CHECK(m.at("seed") == 5);
  CHECK(m.at("config").at("range").at("max_tags") == 30);

  const auto cfg = scratch("cfg");
  fs::create_directories(cfg);
  std::ofstream(cfg / "c.json") << R"({"scenario": "range", "range": {"max_tags": 10}})";
  REQUIRE(run_cli("--config " + (cfg / "c.json").string() + " --out " + (cfg / "out").string()) == 0);
  const std::string csv = slurp(cfg / "out" / "range.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
}
