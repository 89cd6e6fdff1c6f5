#include "t2t/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "t2t/seeding.hpp"

namespace t2t::scenarios {

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

json pos_json(double x, double y) { return {{"x", x}, {"y", y}}; }

rf::Position pos_from(const json& j) { return {j.at("x").get<double>(), j.at("y").get<double>()}; }

Ticks us_to_ticks(double us) { return Ticks{std::llround(us * 16.0)}; }

json cancellation_json(const char* mode) {
  return {{"mode", mode}, {"band_rad", rf::kDefaultCancellationBand}, {"probability", 0.1}};
}

// Subtrees replaced wholesale instead of merged key by key; they carry their
// own validation.
bool opaque_path(const std::string& path) { return path == "mac_sim.deployment"; }

void merge_into(json& base, const json& user, const std::string& prefix) {
  if (!user.is_object()) throw ConfigError("configuration section '" + prefix + "' must be an object");
  for (const auto& [key, value] : user.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) throw ConfigError("unknown configuration key '" + path + "'");
    json& slot = base[key];
    if (slot.is_object() && !opaque_path(path)) {
      merge_into(slot, value, path);
    } else {
      slot = value;
    }
  }
}

std::vector<mac::TrafficItem> traffic_from_json(const json& j) {
  std::vector<mac::TrafficItem> items;
  for (const auto& t : j) {
    for (const auto& [key, _] : t.items()) {
      if (key != "time_ms" && key != "src" && key != "dst" && key != "message_id" &&
          key != "payload") {
        throw ConfigError("unknown traffic key '" + key + "'");
      }
    }
    mac::TrafficItem item;
    item.time = ms_to_ticks(t.at("time_ms").get<double>());
    item.src = t.at("src").get<topology::TagId>();
    item.frame.sender_id = item.src;
    item.frame.receiver_id = t.at("dst").get<std::uint8_t>();
    item.frame.message_id = t.at("message_id").get<std::uint8_t>();
    if (t.contains("payload")) {
      const auto bytes = t.at("payload").get<std::vector<std::uint8_t>>();
      if (bytes.size() != 4) throw ConfigError("traffic payload must have 4 bytes");
      std::copy(bytes.begin(), bytes.end(), item.frame.payload.begin());
    }
    items.push_back(item);
  }
  return items;
}

rf::Position along_boresight(const rf::RfEnvironment& env, double r) {
  const double a = env.beam_direction_deg() * kPi / 180.0;
  return {r * std::cos(a), r * std::sin(a)};
}

std::vector<mac::TrafficItem> frame_train(topology::TagId src, topology::TagId dst,
                                          std::size_t frames, Ticks spacing) {
  std::vector<mac::TrafficItem> items;
  for (std::size_t k = 0; k < frames; ++k) {
    codec::Frame f;
    f.sender_id = src;
    f.receiver_id = dst;
    f.message_id = static_cast<std::uint8_t>(k + 1);
    items.push_back({ms_to_ticks(10.0) + static_cast<std::int64_t>(k) * spacing, src, f});
  }
  return items;
}

double delivery_rate(const mac::SimReport& r, topology::TagId src, topology::TagId dst,
                     std::size_t frames) {
  if (frames == 0) return 0.0;
  std::size_t got = 0;
  for (std::size_t k = 0; k < frames; ++k) {
    if (r.delivered(src, dst, static_cast<std::uint8_t>(k + 1))) ++got;
  }
  return static_cast<double>(got) / static_cast<double>(frames);
}

Ticks train_duration(std::size_t frames, Ticks spacing, double tail_ms) {
  return ms_to_ticks(10.0 + tail_ms) + static_cast<std::int64_t>(frames) * spacing;
}

std::string path_string(const std::vector<topology::TagId>& path) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(path[i]);
  }
  return s;
}

// ---- scenario bodies --------------------------------------------------------

RunResult coverage_scenario(const json& cfg, std::uint64_t seed) {
  const json& c = cfg.at("coverage");
  coverage::CoverageExperiment exp;
  exp.env = env_from_json(cfg.at("env"));
  exp.exciter = pos_from(c.at("exciter"));
  exp.area_side = c.at("area_side").get<double>();
  exp.tag_counts = c.at("tag_counts").get<std::vector<std::size_t>>();
  exp.runs_per_point = c.at("runs").get<std::size_t>();
  exp.min_spacing = c.at("min_spacing_m").get<double>();
  exp.base_seed = seed;

  std::ostringstream out;
  exp.cancellation = topology::NoCancellation{};
  coverage::write_coverage_csv(out, coverage::run_coverage(exp), exp.cancellation, true);
  const auto mode = cancellation_from_json(c.at("cancellation"));
  if (!std::holds_alternative<topology::NoCancellation>(mode)) {
    exp.cancellation = mode;
    coverage::write_coverage_csv(out, coverage::run_coverage(exp), mode, false);
  }
  return {{{"coverage.csv", out.str()}}};
}

RunResult range_scenario(const json& cfg) {
  const json& c = cfg.at("range");
  const auto steps = coverage::run_max_range_curve(
      env_from_json(cfg.at("env")), c.at("d1_m").get<double>(),
      c.at("antenna_dimension_m").get<double>(), c.at("max_tags").get<std::size_t>());
  std::ostringstream out;
  coverage::write_range_csv(out, steps);
  return {{{"range.csv", out.str()}}};
}

RunResult line_range_scenario(const json& cfg, std::uint64_t seed) {
  const json& c = cfg.at("line_range");
  LineRangeParams p;
  p.env = env_from_json(cfg.at("env"));
  p.mac = mac_from_json(cfg.at("mac"));
  p.d1_list = c.at("d1_m").get<std::vector<double>>();
  p.max_hops = c.at("max_hops").get<std::size_t>();
  p.probe_frames = c.at("probe_frames").get<std::size_t>();
  p.validate_frames = c.at("validate_frames").get<std::size_t>();
  p.frame_spacing = ms_to_ticks(c.at("frame_spacing_ms").get<double>());
  p.validate_spacing = ms_to_ticks(c.at("validate_spacing_ms").get<double>());
  p.threshold = c.at("threshold").get<double>();
  p.tolerance_m = c.at("tolerance_m").get<double>();
  p.antenna_dimension = c.at("antenna_dimension_m").get<double>();
  p.seed = seed;

  std::ostringstream out;
  out << "direction,d1_m,hops,range_m,single_hop_range_m,gain,analytic_range_m,end_to_end_rate\n";
  for (const auto& r : run_line_range(p)) {
    out << to_string(r.direction) << ',' << fmt6(r.d1) << ',' << r.hops << ',' << fmt6(r.range_m)
        << ',' << fmt6(r.single_hop_range_m) << ',' << fmt6(r.gain) << ','
        << fmt6(r.analytic_range_m) << ',' << fmt6(r.end_to_end_rate) << '\n';
  }
  return {{{"line_range.csv", out.str()}}};
}

RunResult grid_scenario(const json& cfg, std::uint64_t seed) {
  const json& c = cfg.at("grid_coverage");
  GridParams p;
  p.env = env_from_json(cfg.at("env"));
  p.mac = mac_from_json(cfg.at("mac"));
  p.exciter = pos_from(c.at("exciter"));
  p.source = pos_from(c.at("source"));
  p.forward_area = c.at("forward_area_m").get<double>();
  p.backward_area = c.at("backward_area_m").get<double>();
  p.step = c.at("step_m").get<double>();
  p.frames = c.at("frames").get<std::size_t>();
  p.runs = c.at("runs").get<std::size_t>();
  p.frame_spacing = ms_to_ticks(c.at("frame_spacing_ms").get<double>());
  p.cancellation = cancellation_from_json(c.at("cancellation"));
  p.coverage_threshold = c.at("coverage_threshold").get<double>();
  p.seed = seed;

  const GridResult g = run_grid_coverage(p);
  std::ostringstream cells;
  cells << "direction,method,x,y,relay_x,relay_y,reception_rate\n";
  for (const auto& pt : g.points) {
    cells << to_string(pt.direction) << ',' << to_string(pt.method) << ',' << fmt6(pt.point.x)
          << ',' << fmt6(pt.point.y) << ',' << (pt.relay ? fmt6(pt.relay->x) : "") << ','
          << (pt.relay ? fmt6(pt.relay->y) : "") << ',' << fmt6(pt.reception_rate) << '\n';
  }
  std::ostringstream summary;
  summary << "direction,method,coverage_fraction\n";
  for (Direction d : {Direction::kForward, Direction::kBackward}) {
    for (Method m : {Method::kVanilla, Method::kPhaseShift, Method::kMultiHop}) {
      summary << to_string(d) << ',' << to_string(m) << ',' << fmt6(g.coverage(d, m)) << '\n';
    }
  }
  return {{{"grid_coverage.csv", cells.str()}, {"grid_summary.csv", summary.str()}}};
}

RunResult mac_sim_scenario(const json& cfg, std::uint64_t seed) {
  const json& c = cfg.at("mac_sim");
  const auto env = env_from_json(cfg.at("env"));
  const auto mac = mac_from_json(cfg.at("mac"));
  const auto dep = topology::deployment_from_json(c.at("deployment"));
  const auto traffic = traffic_from_json(c.at("traffic"));
  const Ticks duration = ms_to_ticks(c.at("duration_ms").get<double>());
  const auto report = mac::simulate(env, dep, mac, traffic, duration, seed,
                                    cancellation_from_json(c.at("cancellation")));

  std::ostringstream deliveries;
  deliveries << "src,dst,message_id,sent_us,latency_us,hops,path\n";
  for (const auto& d : report.deliveries) {
    deliveries << int{d.src} << ',' << int{d.dst} << ',' << int{d.message_id} << ','
               << fmt6(to_us(d.sent)) << ',' << fmt6(d.latency_us()) << ',' << d.hops() << ','
               << path_string(d.path) << '\n';
  }
  std::ostringstream energy;
  energy << "node,sleep_ms,observe_ms,receive_ms,validate_ms,transmit_ms,on_air_ms,rx_mj,tx_mj,"
            "mcu_mj,sleep_mj,total_mj\n";
  for (const auto& n : report.nodes) {
    const auto& e = n.energy;
    energy << int{n.id};
    for (Ticks t : e.mode_time) energy << ',' << fmt6(to_ms(t));
    energy << ',' << fmt6(to_ms(e.on_air)) << ',' << fmt6(e.rx_mj) << ',' << fmt6(e.tx_mj) << ','
           << fmt6(e.mcu_mj) << ',' << fmt6(e.sleep_mj) << ',' << fmt6(e.total_mj()) << '\n';
  }
  return {{{"mac_report.json", mac::to_json(report).dump(2) + "\n"},
           {"deliveries.csv", deliveries.str()},
           {"energy.csv", energy.str()}}};
}

RunResult efficiency_scenario(const json& cfg, std::uint64_t seed) {
  const json& c = cfg.at("efficiency");
  const auto mac = mac_from_json(cfg.at("mac"));
  efficiency::EfficiencyParams p;
  p.hops = c.at("hops").get<std::size_t>();
  p.relays = c.at("relays").get<std::size_t>();
  p.p_cancel = c.at("p_cancel").get<double>();
  p.t_frame_ms = c.at("t_frame_ms").is_null() ? efficiency::frame_time_ms(mac)
                                               : c.at("t_frame_ms").get<double>();
  p.t_proc_ms = c.at("t_proc_ms").get<double>();

  RunResult result;
  std::ostringstream table;
  efficiency::write_table_csv(table, p);
  result.files.push_back({"efficiency_table.csv", table.str()});

  if (c.at("cross_validate").get<bool>()) {
    efficiency::CrossValidationOptions opt;
    opt.runs = c.at("runs").get<std::size_t>();
    opt.seed = seed;
    opt.mac = mac;
    opt.env = env_from_json(cfg.at("env"));
    opt.collisions_enabled = c.at("collisions").get<bool>();
    std::ostringstream cv;
    cv << "cell,runs,analytic_pr,simulated_pr,sigma,analytic_messages,simulated_messages,"
          "disagreement\n";
    for (const auto& cell : efficiency::all_cells()) {
      const auto r = efficiency::cross_validate(cell, p, opt);
      cv << efficiency::cell_name(cell) << ',' << r.runs << ',' << fmt6(r.analytic_success) << ','
         << fmt6(r.simulated_success) << ',' << fmt6(r.sigma) << ','
         << fmt6(r.analytic_messages) << ',' << fmt6(r.simulated_messages) << ','
         << (r.disagreement ? "yes" : "no") << '\n';
    }
    result.files.push_back({"cross_validation.csv", cv.str()});
  }
  return result;
}

RunResult bridge_scenario(const json& cfg, std::uint64_t seed) {
  const json& c = cfg.at("bridge");
  BridgeParams p;
  p.env = env_from_json(cfg.at("env"));
  p.mac = mac_from_json(cfg.at("mac"));
  p.exciters.clear();
  for (const auto& e : c.at("exciters")) p.exciters.push_back(pos_from(e));
  p.tag_x = c.at("tag_x").get<std::vector<double>>();
  p.src = c.at("src").get<topology::TagId>();
  p.dst = c.at("dst").get<topology::TagId>();
  p.frames = c.at("frames").get<std::size_t>();
  p.frame_spacing = ms_to_ticks(c.at("frame_spacing_ms").get<double>());
  p.seed = seed;

  const BridgeResult r = run_bridge(p);
  std::ostringstream frames;
  frames << "message_id,delivered,hops,latency_ms,path\n";
  for (const auto& f : r.frames) {
    frames << int{f.message_id} << ',' << (f.delivered ? 1 : 0) << ','
           << (f.path.empty() ? 0 : f.path.size() - 1) << ',' << fmt6(f.latency_ms) << ','
           << path_string(f.path) << '\n';
  }
  std::ostringstream summary;
  summary << "frames,delivered,delivery_rate,max_hops\n"
          << r.frames.size() << ',' << r.delivered() << ','
          << fmt6(r.frames.empty() ? 0.0
                                   : static_cast<double>(r.delivered()) /
                                         static_cast<double>(r.frames.size()))
          << ',' << r.max_hops() << '\n';
  return {{{"bridge.csv", frames.str()}, {"bridge_summary.csv", summary.str()}}};
}

}  // namespace

// ---- configuration -------------------------------------------------------

json default_config() {
  json tag_counts = json::array();
  for (int n = 2; n <= 15; ++n) tag_counts.push_back(n);

  json mac_deployment = {{"exciters", json::array({pos_json(0.0, 0.0)})},
                         {"area_side", 0.0},
                         {"tags", json::array({{{"id", 1}, {"x", 5.0}, {"y", 0.0}},
                                               {{"id", 2}, {"x", 4.0}, {"y", 0.0}},
                                               {{"id", 3}, {"x", 3.2}, {"y", 0.0}},
                                               {{"id", 4}, {"x", 2.5}, {"y", 0.0}}})}};
  json traffic = json::array();
  for (int k = 0; k < 10; ++k) {
    traffic.push_back({{"time_ms", 10.0 + 400.0 * k}, {"src", 1}, {"dst", 4}, {"message_id", k + 1}});
  }

  return {
      {"scenario", "coverage"},
      {"seed", 1},
      {"env",
       {{"frequency_hz", 868e6},
        {"k0", 0.4},
        {"k1", 0.9},
        {"exciter_power_dbm", 33.0},
        {"tag_sensitivity_dbm", -50.0},
        {"tag_gain_dbi", 0.0},
        {"exciter_gain_dbi", 4.0},
        {"beam_direction_deg", -45.0},
        {"beam_width_deg", 40.0},
        {"gain_pattern", "isotropic"},
        {"floor_gain", 0.01}}},
      {"mac",
       {{"sleep_period_ms", 26.5},
        {"rx_timeout_ms", 15.0},
        {"preamble_ms", 36.0},
        {"inter_frame_gap_ms", 0.25},
        {"jitter_low_us", 25.0},
        {"jitter_high_us", 37.5},
        {"cycle_randomization_ms", 5.0},
        {"observation_ms", 6.1},
        {"busy_threshold", 8},
        {"rx_buffer", 8},
        {"tx_buffer", 8},
        {"validation_ms", 1.0},
        {"lock_bits", 16},
        {"bit_cycles", 1600},
        {"noise_edge_rate", 100.0},
        {"noise_model", "poisson"},
        {"rx_power_mw", 1.3},
        {"tx_power_mw", 0.7},
        {"mcu_power_mw", 2.2},
        {"sleep_power_mw", 0.0},
        {"phase_policy", "single"},
        {"collisions", true},
        {"randomize_cycles", true},
        {"rebroadcast_limit", 1},
        {"dedup_capacity", 10}}},
      {"coverage",
       {{"area_side", 30.0},
        {"exciter", pos_json(0.0, 3.0)},
        {"tag_counts", tag_counts},
        {"runs", 1000},
        {"min_spacing_m", -1.0},
        {"cancellation", cancellation_json("geometric")}}},
      {"range", {{"d1_m", 3.0}, {"antenna_dimension_m", analysis::kDefaultAntennaDimension}, {"max_tags", 500}}},
      {"line_range",
       {{"d1_m", {0.5, 1.0, 2.0, 3.0}},
        {"max_hops", 4},
        {"probe_frames", 8},
        {"validate_frames", 20},
        {"frame_spacing_ms", 150.0},
        {"validate_spacing_ms", 1000.0},
        {"threshold", 0.75},
        {"tolerance_m", 1e-3},
        {"antenna_dimension_m", analysis::kDefaultAntennaDimension}}},
      {"grid_coverage",
       {{"exciter", pos_json(0.0, 0.0)},
        {"source", pos_json(0.5, 0.5)},
        {"forward_area_m", 2.0},
        {"backward_area_m", 2.0},
        {"step_m", 0.5},
        {"frames", 25},
        {"runs", 3},
        {"frame_spacing_ms", 300.0},
        {"coverage_threshold", 0.5},
        {"cancellation", cancellation_json("geometric")}}},
      {"mac_sim",
       {{"deployment", mac_deployment},
        {"traffic", traffic},
        {"duration_ms", 5000.0},
        {"cancellation", cancellation_json("off")}}},
      {"efficiency",
       {{"hops", 3},
        {"relays", 2},
        {"p_cancel", 0.1},
        {"t_frame_ms", nullptr},
        {"t_proc_ms", 1.0},
        {"cross_validate", true},
        {"runs", 2000},
        {"collisions", false}}},
      {"bridge",
       {{"exciters", json::array({pos_json(0.0, 0.0), pos_json(12.4, 0.0)})},
        {"tag_x", {2.0, 3.5, 5.0, 6.15, 7.2, 8.4, 9.8}},
        {"src", 1},
        {"dst", 7},
        {"frames", 20},
        {"frame_spacing_ms", 400.0}}},
  };
}

json merge_config(const json& defaults, const json& user) {
  json merged = defaults;
  merge_into(merged, user, "");
  return merged;
}

void apply_override(json& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override must look like key=value: '" + std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* slot = &config;
  std::string path;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    path += (path.empty() ? "" : ".") + part;
    if (!slot->is_object() || !slot->contains(part)) {
      throw ConfigError("unknown configuration key '" + path + "'");
    }
    slot = &(*slot)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *slot = value;
}

rf::RfEnvironment env_from_json(const json& j) {
  const std::string pattern = j.at("gain_pattern").get<std::string>();
  rf::GainPattern gp;
  if (pattern == "isotropic") {
    gp = rf::GainPattern::kIsotropic;
  } else if (pattern == "sector") {
    gp = rf::GainPattern::kSector;
  } else {
    throw ConfigError("gain_pattern must be 'isotropic' or 'sector'");
  }
  return rf::RfEnvironment(
      j.at("frequency_hz").get<double>(), j.at("k0").get<double>(), j.at("k1").get<double>(),
      dbm_to_watts(j.at("exciter_power_dbm").get<double>()),
      dbm_to_watts(j.at("tag_sensitivity_dbm").get<double>()),
      db_to_linear(j.at("tag_gain_dbi").get<double>()),
      db_to_linear(j.at("exciter_gain_dbi").get<double>()),
      j.at("beam_direction_deg").get<double>(), j.at("beam_width_deg").get<double>(), gp,
      j.at("floor_gain").get<double>());
}

mac::MacConfig mac_from_json(const json& j) {
  mac::MacConfig m;
  m.sleep_period = ms_to_ticks(j.at("sleep_period_ms").get<double>());
  m.rx_timeout = ms_to_ticks(j.at("rx_timeout_ms").get<double>());
  m.preamble = ms_to_ticks(j.at("preamble_ms").get<double>());
  m.inter_frame_gap = ms_to_ticks(j.at("inter_frame_gap_ms").get<double>());
  m.jitter_low = us_to_ticks(j.at("jitter_low_us").get<double>());
  m.jitter_high = us_to_ticks(j.at("jitter_high_us").get<double>());
  m.cycle_randomization = ms_to_ticks(j.at("cycle_randomization_ms").get<double>());
  m.observation = ms_to_ticks(j.at("observation_ms").get<double>());
  m.busy_threshold = j.at("busy_threshold").get<std::size_t>();
  m.rx_buffer = j.at("rx_buffer").get<std::size_t>();
  m.tx_buffer = j.at("tx_buffer").get<std::size_t>();
  m.validation_time = ms_to_ticks(j.at("validation_ms").get<double>());
  m.lock_bits = j.at("lock_bits").get<std::size_t>();
  m.bit_cycles = j.at("bit_cycles").get<std::uint32_t>();
  m.noise_edge_rate = j.at("noise_edge_rate").get<double>();
  const std::string noise = j.at("noise_model").get<std::string>();
  if (noise == "poisson") {
    m.noise_model = mac::NoiseModel::kPoisson;
  } else if (noise == "periodic") {
    m.noise_model = mac::NoiseModel::kPeriodic;
  } else {
    throw ConfigError("noise_model must be 'poisson' or 'periodic'");
  }
  m.rx_power_mw = j.at("rx_power_mw").get<double>();
  m.tx_power_mw = j.at("tx_power_mw").get<double>();
  m.mcu_power_mw = j.at("mcu_power_mw").get<double>();
  m.sleep_power_mw = j.at("sleep_power_mw").get<double>();
  const std::string policy = j.at("phase_policy").get<std::string>();
  if (policy == "single") {
    m.phase_policy = mac::PhasePolicy::kSingle;
  } else if (policy == "phase_shift_repeat") {
    m.phase_policy = mac::PhasePolicy::kPhaseShiftRepeat;
  } else {
    throw ConfigError("phase_policy must be 'single' or 'phase_shift_repeat'");
  }
  m.collisions_enabled = j.at("collisions").get<bool>();
  m.randomize_cycles = j.at("randomize_cycles").get<bool>();
  m.relay.rebroadcast_limit = j.at("rebroadcast_limit").get<std::size_t>();
  m.dedup_capacity = j.at("dedup_capacity").get<std::size_t>();
  m.validate();
  return m;
}

topology::CancellationMode cancellation_from_json(const json& j) {
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "off") return topology::NoCancellation{};
  if (mode == "geometric") return topology::GeometricCancellation{j.at("band_rad").get<double>()};
  if (mode == "bernoulli") {
    const double p = j.at("probability").get<double>();
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("cancellation probability must lie in [0, 1]");
    return topology::BernoulliCancellation{p};
  }
  throw ConfigError("cancellation mode must be 'off', 'geometric' or 'bernoulli'");
}

// ---- line range ------------------------------------------------------------

const char* to_string(Direction d) { return d == Direction::kForward ? "forward" : "backward"; }

std::vector<LineRangeRow> run_line_range(const LineRangeParams& p) {
  if (!(p.threshold > 0.0 && p.threshold <= 1.0)) throw ConfigError("threshold must lie in (0, 1]");
  if (!(p.tolerance_m > 0.0)) throw ConfigError("tolerance must be positive");
  if (p.probe_frames == 0) throw ConfigError("probe_frames must be at least 1");
  const double d_min = analysis::fraunhofer_distance(p.antenna_dimension, p.env.wavelength());
  const rf::Position exciter{0.0, 0.0};
  std::uint64_t probe = 0;

  auto deployment = [&](const std::vector<double>& radii) {
    topology::Deployment dep;
    dep.exciters = {exciter};
    for (std::size_t i = 0; i < radii.size(); ++i) {
      dep.tags.push_back({static_cast<topology::TagId>(i + 1), along_boresight(p.env, radii[i])});
    }
    return dep;
  };

  auto link_rate = [&](double tx_r, double rx_r) {
    const auto dep = deployment({tx_r, rx_r});
    const auto traffic = frame_train(1, 2, p.probe_frames, p.frame_spacing);
    const auto r = mac::simulate(p.env, dep, p.mac, traffic,
                                 train_duration(p.probe_frames, p.frame_spacing, 300.0),
                                 derive_seed(p.seed, 7, probe++));
    return delivery_rate(r, 1, 2, p.probe_frames);
  };

  std::vector<LineRangeRow> rows;
  for (Direction dir : {Direction::kForward, Direction::kBackward}) {
    for (double d1 : p.d1_list) {
      if (!(d1 > 0.0)) throw ConfigError("d1 values must be positive");
      auto usable = [&](double x, double d) {
        const double rate = dir == Direction::kBackward ? link_rate(x + d, x) : link_rate(x, x + d);
        return rate >= p.threshold;
      };

      std::vector<double> radii{d1};
      for (std::size_t hop = 0; hop < p.max_hops; ++hop) {
        const double x = radii.back();
        if (!usable(x, d_min)) break;
        double lo = d_min;
        double hi = 2.0 * d_min;
        while (usable(x, hi)) {
          lo = hi;
          hi *= 2.0;
          if (hi > 1e4) throw std::runtime_error("line range: link never fails");
        }
        while (hi - lo > p.tolerance_m) {
          const double mid = 0.5 * (lo + hi);
          (usable(x, mid) ? lo : hi) = mid;
        }
        radii.push_back(x + lo);
      }

      // Analytic counterpart from the link budget.
      std::vector<double> analytic{d1};
      for (std::size_t hop = 0; hop + 1 < radii.size(); ++hop) {
        const double x = analytic.back();
        double d;
        if (dir == Direction::kBackward) {
          const double g = rf::exciter_gain_toward(p.env, exciter, along_boresight(p.env, x + d_min));
          d = analysis::optimal_spacing(p.env, x, g);
        } else {
          const double g = rf::exciter_gain_toward(p.env, exciter, along_boresight(p.env, x));
          d = analysis::spacing_epsilon(p.env, g) / x;
        }
        analytic.push_back(x + d);
      }

      for (std::size_t h = 1; h < radii.size(); ++h) {
        std::vector<double> chain(radii.begin(), radii.begin() + static_cast<std::ptrdiff_t>(h + 1));
        const auto dep = deployment(chain);
        const topology::TagId near = 1;
        const auto far = static_cast<topology::TagId>(h + 1);
        const topology::TagId src = dir == Direction::kBackward ? far : near;
        const topology::TagId dst = dir == Direction::kBackward ? near : far;
        const auto traffic = frame_train(src, dst, p.validate_frames, p.validate_spacing);
        const auto r = mac::simulate(
            p.env, dep, p.mac, traffic,
            train_duration(p.validate_frames, p.validate_spacing, 300.0 + 150.0 * static_cast<double>(h)),
            derive_seed(p.seed, 8, probe++));

        LineRangeRow row;
        row.direction = dir;
        row.d1 = d1;
        row.hops = h;
        row.range_m = radii[h] - radii[0];
        row.single_hop_range_m = radii[1] - radii[0];
        row.gain = row.range_m / row.single_hop_range_m;
        row.analytic_range_m = analytic[h] - analytic[0];
        row.end_to_end_rate = delivery_rate(r, src, dst, p.validate_frames);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

// ---- grid coverage ---------------------------------------------------------

const char* to_string(Method m) {
  switch (m) {
    case Method::kVanilla:
      return "vanilla";
    case Method::kPhaseShift:
      return "phase_shift";
    case Method::kMultiHop:
      return "multi_hop";
  }
  return "unknown";
}

double GridResult::coverage(Direction d, Method m) const {
  std::size_t total = 0;
  std::size_t covered = 0;
  for (const auto& p : points) {
    if (p.direction != d || p.method != m) continue;
    ++total;
    if (p.reception_rate >= coverage_threshold) ++covered;
  }
  return total ? static_cast<double>(covered) / static_cast<double>(total) : 0.0;
}

namespace {

std::vector<rf::Position> grid_points(double area, double step) {
  const auto n = static_cast<int>(std::floor(area / step + 1e-9));
  std::vector<rf::Position> pts;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) pts.push_back({i * step, j * step});
  }
  return pts;
}

bool near_any(rf::Position p, const std::vector<rf::Position>& set) {
  return std::any_of(set.begin(), set.end(),
                     [&](const rf::Position& q) { return rf::distance(p, q) < 1e-9; });
}

}  // namespace

rf::Position relay_position(rf::Position a, rf::Position b, double area, double step,
                            const std::vector<rf::Position>& occupied) {
  const rf::Position mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
  std::optional<rf::Position> best;
  double best_d = 0.0;
  for (const auto& g : grid_points(area, step)) {
    if (near_any(g, occupied)) continue;
    const double d = rf::distance(g, mid);
    // Grid distances tie exactly in theory; 1e-12 absorbs rounding.
    const bool closer = !best || d < best_d - 1e-12;
    const bool tie_wins = best && std::abs(d - best_d) <= 1e-12 &&
                          std::make_pair(g.x, g.y) < std::make_pair(best->x, best->y);
    if (closer || tie_wins) {
      best = g;
      best_d = d;
    }
  }
  if (!best) throw ConfigError("no free grid point for the relay");
  return *best;
}

GridResult run_grid_coverage(const GridParams& p) {
  if (!(p.step > 0.0)) throw ConfigError("grid step must be positive");
  if (p.runs == 0 || p.frames == 0) throw ConfigError("grid needs at least one run and frame");
  GridResult result;
  result.coverage_threshold = p.coverage_threshold;
  const Ticks duration = train_duration(p.frames, p.frame_spacing, 500.0);

  std::uint64_t index = 0;
  for (Direction dir : {Direction::kForward, Direction::kBackward}) {
    const double area = dir == Direction::kForward ? p.forward_area : p.backward_area;
    for (const auto& pt : grid_points(area, p.step)) {
      if (near_any(pt, {p.exciter, p.source})) continue;
      for (Method m : {Method::kVanilla, Method::kPhaseShift, Method::kMultiHop}) {
        topology::Deployment dep;
        dep.exciters = {p.exciter};
        dep.tags = {{1, p.source}, {2, pt}};
        GridPoint out{dir, m, pt, std::nullopt, 0.0};
        if (m == Method::kMultiHop) {
          out.relay = relay_position(p.source, pt, area, p.step, {p.exciter, p.source, pt});
          dep.tags.push_back({3, *out.relay});
        }
        mac::MacConfig mac = p.mac;
        mac.phase_policy =
            m == Method::kPhaseShift ? mac::PhasePolicy::kPhaseShiftRepeat : mac::PhasePolicy::kSingle;
        const topology::TagId src = dir == Direction::kForward ? 1 : 2;
        const topology::TagId dst = dir == Direction::kForward ? 2 : 1;
        const auto traffic = frame_train(src, dst, p.frames, p.frame_spacing);
        double sum = 0.0;
        for (std::size_t run = 0; run < p.runs; ++run) {
          const auto r = mac::simulate(p.env, dep, mac, traffic, duration,
                                       derive_seed(p.seed, index, run), p.cancellation);
          sum += delivery_rate(r, src, dst, p.frames);
        }
        out.reception_rate = sum / static_cast<double>(p.runs);
        result.points.push_back(out);
        ++index;
      }
    }
  }
  return result;
}

// ---- bridge ----------------------------------------------------------------

std::size_t BridgeResult::delivered() const {
  return static_cast<std::size_t>(
      std::count_if(frames.begin(), frames.end(), [](const BridgeFrame& f) { return f.delivered; }));
}

std::size_t BridgeResult::max_hops() const {
  std::size_t best = 0;
  for (const auto& f : frames) {
    if (f.delivered && !f.path.empty()) best = std::max(best, f.path.size() - 1);
  }
  return best;
}

BridgeResult run_bridge(const BridgeParams& p) {
  topology::Deployment dep;
  dep.exciters = p.exciters;
  for (std::size_t i = 0; i < p.tag_x.size(); ++i) {
    dep.tags.push_back({static_cast<topology::TagId>(i + 1), {p.tag_x[i], 0.0}});
  }
  const auto traffic = frame_train(p.src, p.dst, p.frames, p.frame_spacing);
  const auto r = mac::simulate(p.env, dep, p.mac, traffic,
                               train_duration(p.frames, p.frame_spacing, 1000.0), p.seed);
  BridgeResult out;
  for (const auto& t : traffic) {
    BridgeFrame f;
    f.message_id = t.frame.message_id;
    for (const auto& d : r.deliveries) {
      if (d.src == p.src && d.dst == p.dst && d.message_id == f.message_id) {
        f.delivered = true;
        f.path = d.path;
        f.latency_ms = d.latency_us() / 1000.0;
        break;
      }
    }
    out.frames.push_back(f);
  }
  return out;
}

// ---- runner ----------------------------------------------------------------

RunResult run_scenario(const json& config) {
  std::string scenario;
  std::uint64_t seed = 0;
  try {
    scenario = config.at("scenario").get<std::string>();
    seed = config.at("seed").get<std::uint64_t>();
    if (scenario == "coverage") return coverage_scenario(config, seed);
    if (scenario == "range") return range_scenario(config);
    if (scenario == "line-range") return line_range_scenario(config, seed);
    if (scenario == "grid-coverage") return grid_scenario(config, seed);
    if (scenario == "mac-sim") return mac_sim_scenario(config, seed);
    if (scenario == "efficiency") return efficiency_scenario(config, seed);
    if (scenario == "bridge") return bridge_scenario(config, seed);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  throw ConfigError("unknown scenario '" + scenario +
                    "' (coverage, range, line-range, grid-coverage, mac-sim, efficiency, bridge)");
}

}  // namespace t2t::scenarios
