#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "t2t/flood_relay.hpp"
#include "t2t/frame_codec.hpp"
#include "t2t/topology_graph.hpp"

namespace t2t::mac {

enum class Mode : std::uint8_t { kSleep, kObserve, kReceive, kValidate, kTransmit };
inline constexpr std::size_t kModeCount = 5;
const char* to_string(Mode m);

/// Legal edges of the tag state machine.
bool allowed_transition(Mode from, Mode to);

enum class PhasePolicy { kSingle, kPhaseShiftRepeat };
enum class NoiseModel { kPoisson, kPeriodic };

struct MacConfig {
  Ticks sleep_period = ms_to_ticks(26.5);        // t_s
  Ticks rx_timeout = ms_to_ticks(15.0);          // t_x
  Ticks preamble = ms_to_ticks(36.0);            // t_p
  Ticks inter_frame_gap = ms_to_ticks(0.25);     // gap between phase-shifted copies
  Ticks jitter_low = Ticks{400};                 // t_l = 25 us
  Ticks jitter_high = Ticks{600};                // t_h = 37.5 us
  Ticks cycle_randomization = ms_to_ticks(5.0);  // extra U[0, x] per wake-up
  Ticks observation = ms_to_ticks(6.1);          // t_o
  std::size_t busy_threshold = 8;                // n_o
  std::size_t rx_buffer = 8;                     // b_r
  std::size_t tx_buffer = 8;                     // b_t
  Ticks validation_time = ms_to_ticks(1.0);
  std::size_t lock_bits = codec::kDefaultPreambleDetectBits;
  std::uint32_t bit_cycles = codec::BitTiming::kCycles10k;

  double noise_edge_rate = 100.0;  // edges per second, observation only
  NoiseModel noise_model = NoiseModel::kPoisson;

  double rx_power_mw = 1.3;
  double tx_power_mw = 0.7;
  double mcu_power_mw = 2.2;
  double sleep_power_mw = 0.0;

  PhasePolicy phase_policy = PhasePolicy::kSingle;
  bool collisions_enabled = true;
  bool randomize_cycles = true;
  flood::RelayPolicy relay;
  std::size_t dedup_capacity = flood::DedupRing::kDefaultCapacity;
  bool record_trace = false;
  /// Per-node first wake-up offsets; random in [0, t_s) when empty.
  std::vector<Ticks> wake_phases;

  void validate() const;
  /// A sleeping receiver is guaranteed to sample every preamble.
  bool wakeup_guarantee() const { return preamble >= sleep_period + observation; }
  codec::BitTiming timing() const { return codec::BitTiming(bit_cycles); }
  /// On-air time of one copy (preamble, SFD, body, CRC).
  Ticks frame_airtime() const;
};

struct EnergyLedger {
  std::array<Ticks, kModeCount> mode_time{};
  Ticks on_air{0};
  double rx_mj = 0.0;
  double tx_mj = 0.0;
  double mcu_mj = 0.0;
  double sleep_mj = 0.0;

  Ticks time_in(Mode m) const { return mode_time[static_cast<std::size_t>(m)]; }
  Ticks total_time() const;
  double total_mj() const { return rx_mj + tx_mj + mcu_mj + sleep_mj; }
};

/// RX power in Observe/Receive, TX power while on air, MCU power in
/// Observe/Validate/Transmit, sleep power in Sleep.
EnergyLedger energy_report(const std::array<Ticks, kModeCount>& mode_time, Ticks on_air,
                           const MacConfig& cfg);

struct TrafficItem {
  Ticks time{0};
  topology::TagId src = 0;
  codec::Frame frame;
};

struct Delivery {
  topology::TagId src = 0;
  topology::TagId dst = 0;
  std::uint8_t message_id = 0;
  Ticks sent{0};
  Ticks delivered{0};
  std::vector<topology::TagId> path;  // src ... dst

  double latency_us() const { return to_us(delivered - sent); }
  std::size_t hops() const { return path.empty() ? 0 : path.size() - 1; }
};

struct TransmissionRecord {
  topology::TagId node = 0;
  Ticks start{0};
  Ticks end{0};
  bool phase_shifted = false;
  bool forwarded = false;
  codec::Frame frame;
};

struct TraceEntry {
  Ticks time{0};
  topology::TagId node = 0;
  Mode from = Mode::kSleep;
  Mode to = Mode::kSleep;
};

struct NodeCounters {
  std::size_t wakeups = 0;
  std::size_t busy_observations = 0;
  std::size_t false_triggers = 0;  // busy only because of noise edges
  std::size_t rx_timeouts = 0;
  std::size_t receptions = 0;      // locked onto a preamble
  std::size_t frames_ok = 0;
  std::size_t crc_failures = 0;
  std::size_t collisions = 0;
  std::size_t duplicates = 0;
  std::size_t forward_limit_drops = 0;
  std::size_t tx_overflow = 0;
  std::size_t rx_overflow = 0;
  std::size_t transmissions = 0;   // channel occupancies
  std::size_t delivered = 0;
};

struct NodeReport {
  topology::TagId id = 0;
  EnergyLedger energy;
  NodeCounters counters;
};

struct SimReport {
  std::uint64_t seed = 0;
  Ticks duration{0};
  std::vector<Delivery> deliveries;
  std::vector<NodeReport> nodes;
  std::vector<TransmissionRecord> transmissions;
  std::vector<TraceEntry> trace;
  std::size_t collisions = 0;
  std::size_t false_triggers = 0;

  const NodeReport& node(topology::TagId id) const;
  bool delivered(topology::TagId src, topology::TagId dst, std::uint8_t message_id) const;
};

nlohmann::json to_json(const SimReport& r);

struct ObservationResult {
  std::size_t transitions = 0;
  bool busy = false;
};

/// Busy iff signal plus noise transitions reach the threshold.
ObservationResult channel_observe(std::size_t signal_transitions, std::size_t noise_edges,
                                  std::size_t threshold);

/// Noise edges falling in a window of length `window`.
std::size_t sample_noise_edges(double rate_per_s, NoiseModel model, Ticks window,
                               std::mt19937_64& rng);

/// Level transitions of an FM0 stream starting at `start` inside (from, to].
/// The rising edge at the first half-symbol and the falling edge at the end
/// count as transitions.
std::size_t count_transitions(const codec::SymbolStream& s, Ticks start, Ticks from, Ticks to);

SimReport simulate(const rf::RfEnvironment& env, const topology::Deployment& dep,
                   const MacConfig& mac, const std::vector<TrafficItem>& traffic, Ticks duration,
                   std::uint64_t seed,
                   const topology::CancellationMode& cancellation = topology::NoCancellation{});

/// Same, over a precomputed (possibly hand-edited) link budget.
SimReport simulate(const topology::LinkBudget& budget, const topology::Deployment& dep,
                   const MacConfig& mac, const std::vector<TrafficItem>& traffic, Ticks duration,
                   std::uint64_t seed);

/// Replays the recorded trace; returns a description of the first illegal
/// transition, time reversal or accounting mismatch.
std::optional<std::string> check_trace(const SimReport& r);

/// Largest number of unshifted transmissions of one (sender, message) key by
/// one node.
std::size_t max_transmissions_per_key(const SimReport& r);

}  // namespace t2t::mac
