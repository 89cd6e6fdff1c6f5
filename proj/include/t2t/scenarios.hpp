#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "t2t/efficiency_model.hpp"
#include "t2t/mac_engine.hpp"
#include "t2t/montecarlo_coverage.hpp"

namespace t2t::scenarios {

inline constexpr const char* kToolName = "t2tsim";
inline constexpr const char* kToolVersion = "1.0.0";

using nlohmann::json;

// ---- configuration -------------------------------------------------------

/// Complete configuration tree with every default filled in.
json default_config();

/// Overlays `user` on `defaults`. Throws ConfigError for any key that does
/// not exist in `defaults`.
json merge_config(const json& defaults, const json& user);

/// Applies "dotted.key=value". The value is parsed as JSON when possible and
/// taken as a string otherwise; the key must already exist.
void apply_override(json& config, std::string_view assignment);

rf::RfEnvironment env_from_json(const json& j);
mac::MacConfig mac_from_json(const json& j);
topology::CancellationMode cancellation_from_json(const json& j);

// ---- line range ------------------------------------------------------------

enum class Direction { kForward, kBackward };
const char* to_string(Direction d);

struct LineRangeParams {
  rf::RfEnvironment env = rf::RfEnvironment::standard();
  mac::MacConfig mac;
  std::vector<double> d1_list{0.5, 1.0, 2.0, 3.0};
  std::size_t max_hops = 4;
  std::size_t probe_frames = 8;
  std::size_t validate_frames = 20;
  Ticks frame_spacing = ms_to_ticks(150.0);
  /// End-to-end frames must not overlap in flight along the chain.
  Ticks validate_spacing = ms_to_ticks(1000.0);
  double threshold = 0.75;   // minimum reception rate for a usable hop
  double tolerance_m = 1e-3;
  double antenna_dimension = analysis::kDefaultAntennaDimension;
  std::uint64_t seed = 1;
};

struct LineRangeRow {
  Direction direction = Direction::kBackward;
  double d1 = 0.0;
  std::size_t hops = 0;
  double range_m = 0.0;             // first tag to last tag
  double single_hop_range_m = 0.0;
  double gain = 0.0;                // range / single-hop range
  double analytic_range_m = 0.0;
  double end_to_end_rate = 0.0;
};

/// Places tags hop by hop along the exciter boresight: each spacing is the
/// largest (to `tolerance_m`) whose two-tag simulation reaches `threshold`.
/// The whole chain is then simulated end to end with flooding.
std::vector<LineRangeRow> run_line_range(const LineRangeParams& p);

// ---- grid coverage ---------------------------------------------------------

enum class Method { kVanilla, kPhaseShift, kMultiHop };
const char* to_string(Method m);

struct GridParams {
  rf::RfEnvironment env = rf::RfEnvironment::standard();
  mac::MacConfig mac;
  rf::Position exciter{0.0, 0.0};
  rf::Position source{0.5, 0.5};
  double forward_area = 2.0;
  double backward_area = 2.0;
  double step = 0.5;
  std::size_t frames = 25;
  std::size_t runs = 3;
  Ticks frame_spacing = ms_to_ticks(300.0);
  topology::CancellationMode cancellation = topology::GeometricCancellation{};
  double coverage_threshold = 0.5;
  std::uint64_t seed = 1;
};

struct GridPoint {
  Direction direction = Direction::kForward;
  Method method = Method::kVanilla;
  rf::Position point;
  std::optional<rf::Position> relay;
  double reception_rate = 0.0;
};

struct GridResult {
  std::vector<GridPoint> points;
  double coverage_threshold = 0.5;

  /// Fraction of grid points with reception rate >= threshold.
  double coverage(Direction d, Method m) const;
};

/// Grid point nearest the midpoint of a and b, skipping occupied points.
/// Ties break on distance, then x, then y.
rf::Position relay_position(rf::Position a, rf::Position b, double area, double step,
                            const std::vector<rf::Position>& occupied);

GridResult run_grid_coverage(const GridParams& p);

// ---- bridge ----------------------------------------------------------------

struct BridgeParams {
  rf::RfEnvironment env = rf::RfEnvironment::standard();
  mac::MacConfig mac;
  std::vector<rf::Position> exciters{{0.0, 0.0}, {12.4, 0.0}};
  std::vector<double> tag_x{2.0, 3.5, 5.0, 6.15, 7.2, 8.4, 9.8};
  topology::TagId src = 1;
  topology::TagId dst = 7;
  std::size_t frames = 20;
  Ticks frame_spacing = ms_to_ticks(400.0);
  std::uint64_t seed = 1;
};

struct BridgeFrame {
  std::uint8_t message_id = 0;
  bool delivered = false;
  std::vector<topology::TagId> path;
  double latency_ms = 0.0;
};

struct BridgeResult {
  std::vector<BridgeFrame> frames;
  std::size_t delivered() const;
  std::size_t max_hops() const;
};

BridgeResult run_bridge(const BridgeParams& p);

// ---- runner ----------------------------------------------------------------

struct OutputFile {
  std::string name;
  std::string content;
};

struct RunResult {
  std::vector<OutputFile> files;
};

/// Runs the scenario named in `config["scenario"]`; performs no I/O.
RunResult run_scenario(const json& config);

std::string sha256_hex(std::string_view data);

/// Config echo, seed, version, per-file SHA-256 and an overall content hash.
json make_manifest(const json& config, const RunResult& result);

/// Writes every output file plus manifest.json into `dir`.
void write_outputs(const std::filesystem::path& dir, const json& config, const RunResult& result);

}  // namespace t2t::scenarios
