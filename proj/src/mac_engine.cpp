#include "t2t/mac_engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <queue>
#include <set>
#include <tuple>

#include "t2t/seeding.hpp"

namespace t2t::mac {

namespace {

using topology::TagId;

enum class EventKind : std::uint8_t {
  kTxEnd,
  kRxEnd,
  kRxTimeout,
  kValidationEnd,
  kObservationEnd,
  kTrafficArrival,
  kWakeUp,
};

struct Event {
  Ticks time;
  std::size_t node;
  EventKind kind;
  std::uint64_t seq;
  std::size_t payload;
};

struct EventLater {
  bool operator()(const Event& a, const Event& b) const {
    return std::make_tuple(a.time.count(), a.node, a.kind, a.seq) >
           std::make_tuple(b.time.count(), b.node, b.kind, b.seq);
  }
};

struct Airing {
  std::size_t node;
  Ticks start;
  Ticks end;
  bool shifted;
  std::size_t sfd_half;
  codec::SymbolStream stream;
};

struct QueuedFrame {
  codec::Frame frame;
  bool forwarded;
};

struct RxFrame {
  codec::Frame frame;
  std::size_t from;
};

struct Reception {
  std::size_t airing;
  Ticks from;
  std::size_t first_half;
};

struct Node {
  TagId id;
  Mode mode = Mode::kSleep;
  Ticks since{0};
  std::array<Ticks, kModeCount> mode_time{};
  Ticks phase{0};
  std::int64_t cycle = 0;
  Ticks wake{0};
  std::deque<QueuedFrame> tx_queue;
  std::deque<RxFrame> rx_queue;
  std::optional<Reception> rx;
  flood::RelayNode relay;
  std::mt19937_64 rng;
  NodeCounters counters;
  std::map<flood::FrameKey, std::size_t> parent;
};

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return a <= 0 ? 0 : (a + b - 1) / b; }

std::size_t mode_index(Mode m) { return static_cast<std::size_t>(m); }

class Simulator {
 public:
  Simulator(const topology::LinkBudget& budget, const topology::Deployment& dep,
            const MacConfig& cfg, Ticks duration, std::uint64_t seed)
      : budget_(budget), cfg_(cfg), timing_(cfg.timing()), duration_(duration), seed_(seed) {
    nodes_.reserve(dep.tags.size());
    for (std::size_t i = 0; i < dep.tags.size(); ++i) {
      nodes_.push_back(Node{dep.tags[i].id, Mode::kSleep, Ticks{0}, {}, Ticks{0}, 0, Ticks{0},
                            {}, {}, std::nullopt,
                            flood::RelayNode(dep.tags[i].id, cfg.relay, cfg.dedup_capacity),
                            std::mt19937_64(derive_seed(seed, 1, i)), {}, {}});
    }
    preamble_bytes_ = codec::preamble_bytes_for(to_ms(cfg.preamble), timing_);
    horizon_ = Ticks{4 * cfg.frame_airtime().count()} + cfg.inter_frame_gap + cfg.observation;
  }

  SimReport run(const std::vector<TrafficItem>& traffic, const topology::Deployment& dep) {
    for (std::size_t i = 0; i < traffic.size(); ++i) {
      const std::size_t node = dep.index_of(traffic[i].src);
      origin_time_.emplace(flood::key_of(traffic[i].frame), traffic[i].time);
      push(traffic[i].time, node, EventKind::kTrafficArrival, i);
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      Node& n = nodes_[i];
      if (!cfg_.wake_phases.empty()) {
        n.phase = cfg_.wake_phases[i];
      } else {
        std::uniform_int_distribution<std::int64_t> phase(0, cfg_.sleep_period.count() - 1);
        n.phase = Ticks{phase(n.rng)};
      }
      push(wake_time(n, 0), i, EventKind::kWakeUp);
    }

    while (!queue_.empty()) {
      const Event e = queue_.top();
      if (e.time > duration_) break;
      queue_.pop();
      switch (e.kind) {
        case EventKind::kWakeUp:
          on_wake(e.node, e.time);
          break;
        case EventKind::kObservationEnd:
          on_observation_end(e.node, e.time);
          break;
        case EventKind::kRxEnd:
          on_rx_end(e.node, e.time);
          break;
        case EventKind::kRxTimeout:
          set_mode(e.node, e.time, Mode::kSleep);
          break;
        case EventKind::kValidationEnd:
          on_validation_end(e.node, e.time);
          break;
        case EventKind::kTxEnd:
          set_mode(e.node, e.time, Mode::kSleep);
          break;
        case EventKind::kTrafficArrival:
          on_traffic(e.node, traffic[e.payload]);
          break;
      }
    }
    return finish();
  }

 private:
  void push(Ticks t, std::size_t node, EventKind kind, std::size_t payload = 0) {
    queue_.push(Event{t, node, kind, seq_++, payload});
  }

  void set_mode(std::size_t i, Ticks t, Mode m) {
    Node& n = nodes_[i];
    n.mode_time[mode_index(n.mode)] += t - n.since;
    if (cfg_.record_trace) trace_.push_back(TraceEntry{t, n.id, n.mode, m});
    n.mode = m;
    n.since = t;
  }

  Ticks wake_time(Node& n, std::int64_t cycle) {
    Ticks t = n.phase + cycle * cfg_.sleep_period;
    if (cfg_.randomize_cycles) {
      std::uniform_int_distribution<std::int64_t> spread(0, cfg_.cycle_randomization.count());
      t += Ticks{spread(n.rng)};
    }
    std::uniform_int_distribution<std::int64_t> jitter(cfg_.jitter_low.count(),
                                                       cfg_.jitter_high.count());
    return t + Ticks{jitter(n.rng)};
  }

  bool audible(const Airing& a, std::size_t rx) const {
    return budget_.audible(a.node, rx, a.shifted);
  }

  void prune(Ticks now) {
    if (live_.size() < 64) return;
    std::erase_if(live_, [&](std::size_t k) { return airings_[k].end < now - horizon_; });
  }

  void on_wake(std::size_t i, Ticks t) {
    Node& n = nodes_[i];
    ++n.cycle;
    push(wake_time(n, n.cycle), i, EventKind::kWakeUp);
    if (n.mode != Mode::kSleep) return;
    ++n.counters.wakeups;
    n.wake = t;
    set_mode(i, t, Mode::kObserve);
    push(t + cfg_.observation, i, EventKind::kObservationEnd);
  }

  void on_observation_end(std::size_t i, Ticks t) {
    Node& n = nodes_[i];
    prune(t);
    const Ticks w = n.wake;
    std::size_t signal = 0;
    for (std::size_t k : live_) {
      const Airing& a = airings_[k];
      if (a.start < t && a.end > w && audible(a, i)) {
        signal += count_transitions(a.stream, a.start, w, t);
      }
    }
    const std::size_t noise =
        sample_noise_edges(cfg_.noise_edge_rate, cfg_.noise_model, cfg_.observation, n.rng);
    const ObservationResult obs = channel_observe(signal, noise, cfg_.busy_threshold);

    if (!obs.busy) {
      if (!n.tx_queue.empty()) {
        start_transmission(i, t);
      } else {
        set_mode(i, t, Mode::kSleep);
      }
      return;
    }

    ++n.counters.busy_observations;
    if (signal < cfg_.busy_threshold) {
      ++n.counters.false_triggers;
      ++false_triggers_;
    }

    // Lock onto the earliest audible transmission with enough preamble left.
    const std::int64_t half = timing_.half_symbol().count();
    std::optional<Reception> best;
    for (std::size_t k : live_) {
      const Airing& a = airings_[k];
      if (a.start > t || a.end <= t || !audible(a, i)) continue;
      const Ticks from = std::max(w, a.start);
      const auto first = static_cast<std::size_t>(ceil_div((from - a.start).count(), half));
      if (a.sfd_half < first + 2 * cfg_.lock_bits) continue;
      if (!best || std::make_pair(a.start, a.node) <
                       std::make_pair(airings_[best->airing].start, airings_[best->airing].node)) {
        best = Reception{k, from, first};
      }
    }

    set_mode(i, t, Mode::kReceive);
    if (best) {
      ++n.counters.receptions;
      n.rx = best;
      push(airings_[best->airing].end, i, EventKind::kRxEnd);
    } else {
      ++n.counters.rx_timeouts;
      push(t + cfg_.rx_timeout, i, EventKind::kRxTimeout);
    }
  }

  void start_transmission(std::size_t i, Ticks t) {
    Node& n = nodes_[i];
    const QueuedFrame q = n.tx_queue.front();
    n.tx_queue.pop_front();
    set_mode(i, t, Mode::kTransmit);

    const std::size_t copies = cfg_.phase_policy == PhasePolicy::kPhaseShiftRepeat ? 2 : 1;
    Ticks s = t;
    for (std::size_t c = 0; c < copies; ++c) {
      codec::SymbolStream stream = codec::encode_frame(q.frame, to_ms(cfg_.preamble), timing_);
      const Ticks end = s + stream.duration();
      const bool shifted = c == 1;
      airings_.push_back(Airing{i, s, end, shifted, preamble_bytes_ * 16, std::move(stream)});
      live_.push_back(airings_.size() - 1);
      records_.push_back(TransmissionRecord{n.id, s, end, shifted, q.forwarded, q.frame});
      ++n.counters.transmissions;
      s = end + cfg_.inter_frame_gap;
    }
    push(records_.back().end, i, EventKind::kTxEnd);
  }

  void on_rx_end(std::size_t i, Ticks t) {
    Node& n = nodes_[i];
    const Reception rx = *n.rx;
    n.rx.reset();
    const std::size_t ai = rx.airing;

    bool collided = false;
    if (cfg_.collisions_enabled) {
      for (std::size_t k : live_) {
        if (k == ai) continue;
        const Airing& b = airings_[k];
        if (b.start < airings_[ai].end && b.end > rx.from && audible(b, i)) {
          collided = true;
          break;
        }
      }
    }

    const Airing& a = airings_[ai];
    std::vector<std::uint8_t> levels(a.stream.levels.begin() + static_cast<std::ptrdiff_t>(rx.first_half),
                                     a.stream.levels.end());
    if (collided) {
      ++n.counters.collisions;
      ++collisions_;
      // Corrupt the first body half-symbol; the CRC rejects a single bit error.
      levels[a.sfd_half + 16 - rx.first_half] ^= 1;
    }

    const codec::DecodeResult res =
        codec::decode_stream(levels, timing_, codec::DecodeOptions{cfg_.lock_bits});
    const codec::DecodedFrame* ok = nullptr;
    for (const auto& d : res.frames) {
      if (d.crc_ok) {
        ok = &d;
        break;
      }
    }
    if (!ok) {
      if (res.frames.empty()) {
        ++n.counters.rx_timeouts;
      } else {
        ++n.counters.crc_failures;
      }
      set_mode(i, t, Mode::kSleep);
      return;
    }

    ++n.counters.frames_ok;
    if (n.rx_queue.size() >= cfg_.rx_buffer) {
      ++n.counters.rx_overflow;
      set_mode(i, t, Mode::kSleep);
      return;
    }
    n.rx_queue.push_back(RxFrame{ok->frame, a.node});
    set_mode(i, t, Mode::kValidate);
    push(t + cfg_.validation_time, i, EventKind::kValidationEnd);
  }

  void on_validation_end(std::size_t i, Ticks t) {
    Node& n = nodes_[i];
    const RxFrame f = n.rx_queue.front();
    n.rx_queue.pop_front();
    const flood::FrameKey key = flood::key_of(f.frame);
    n.parent.try_emplace(key, f.from);

    const std::size_t free = cfg_.tx_buffer - std::min(cfg_.tx_buffer, n.tx_queue.size());
    const flood::RelayDecision d = n.relay.handle_frame(f.frame, free);
    if (std::holds_alternative<flood::Deliver>(d)) {
      ++n.counters.delivered;
      record_delivery(i, key, t);
    } else if (const auto* fw = std::get_if<flood::Forward>(&d)) {
      for (std::size_t c = 0; c < fw->copies; ++c) n.tx_queue.push_back({f.frame, true});
    } else {
      switch (std::get<flood::Drop>(d).reason) {
        case flood::DropReason::kDuplicate:
          ++n.counters.duplicates;
          break;
        case flood::DropReason::kOverflow:
          ++n.counters.tx_overflow;
          break;
        case flood::DropReason::kForwardLimit:
          ++n.counters.forward_limit_drops;
          break;
      }
    }
    set_mode(i, t, Mode::kSleep);
  }

  void record_delivery(std::size_t i, flood::FrameKey key, Ticks t) {
    Delivery d;
    d.src = key.sender_id;
    d.dst = nodes_[i].id;
    d.message_id = key.message_id;
    auto origin = origin_time_.find(key);
    d.sent = origin == origin_time_.end() ? Ticks{0} : origin->second;
    d.delivered = t;

    std::vector<TagId> rev{nodes_[i].id};
    std::size_t cur = i;
    for (std::size_t guard = 0; guard < nodes_.size() && nodes_[cur].id != key.sender_id; ++guard) {
      auto it = nodes_[cur].parent.find(key);
      if (it == nodes_[cur].parent.end()) break;
      cur = it->second;
      rev.push_back(nodes_[cur].id);
    }
    d.path.assign(rev.rbegin(), rev.rend());
    deliveries_.push_back(std::move(d));
  }

  void on_traffic(std::size_t i, const TrafficItem& item) {
    Node& n = nodes_[i];
    if (n.tx_queue.size() >= cfg_.tx_buffer) {
      ++n.counters.tx_overflow;
      return;
    }
    n.tx_queue.push_back({item.frame, false});
    n.relay.originate(item.frame);
  }

  SimReport finish() {
    SimReport r;
    r.seed = seed_;
    r.duration = duration_;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      Node& n = nodes_[i];
      n.mode_time[mode_index(n.mode)] += duration_ - n.since;
      n.since = duration_;
      Ticks on_air{0};
      for (const auto& rec : records_) {
        if (rec.node != n.id || rec.start >= duration_) continue;
        on_air += std::min(rec.end, duration_) - rec.start;
      }
      r.nodes.push_back(NodeReport{n.id, energy_report(n.mode_time, on_air, cfg_), n.counters});
    }
    r.deliveries = std::move(deliveries_);
    r.transmissions = std::move(records_);
    r.trace = std::move(trace_);
    r.collisions = collisions_;
    r.false_triggers = false_triggers_;
    return r;
  }

  const topology::LinkBudget& budget_;
  const MacConfig& cfg_;
  codec::BitTiming timing_;
  Ticks duration_;
  std::uint64_t seed_;
  std::size_t preamble_bytes_ = 0;
  Ticks horizon_{0};

  std::vector<Node> nodes_;
  std::priority_queue<Event, std::vector<Event>, EventLater> queue_;
  std::uint64_t seq_ = 0;
  std::vector<Airing> airings_;
  std::vector<std::size_t> live_;
  std::vector<TransmissionRecord> records_;
  std::vector<TraceEntry> trace_;
  std::vector<Delivery> deliveries_;
  std::map<flood::FrameKey, Ticks> origin_time_;
  std::size_t collisions_ = 0;
  std::size_t false_triggers_ = 0;
};

void validate_traffic(const topology::Deployment& dep, const std::vector<TrafficItem>& traffic,
                      Ticks duration) {
  std::set<flood::FrameKey> keys;
  for (const auto& item : traffic) {
    if (item.time < Ticks{0} || item.time > duration) {
      throw ConfigError("traffic time outside the simulated interval");
    }
    bool known = false;
    for (const auto& t : dep.tags) known = known || t.id == item.src;
    if (!known) throw ConfigError("traffic source is not in the deployment");
    if (item.frame.sender_id != item.src) {
      throw ConfigError("traffic frame sender id differs from its source");
    }
    if (!keys.insert(flood::key_of(item.frame)).second) {
      throw ConfigError("duplicate (sender, message id) in traffic");
    }
  }
}

}  // namespace

const char* to_string(Mode m) {
  switch (m) {
    case Mode::kSleep:
      return "sleep";
    case Mode::kObserve:
      return "observe";
    case Mode::kReceive:
      return "receive";
    case Mode::kValidate:
      return "validate";
    case Mode::kTransmit:
      return "transmit";
  }
  return "unknown";
}

bool allowed_transition(Mode from, Mode to) {
  switch (from) {
    case Mode::kSleep:
      return to == Mode::kObserve;
    case Mode::kObserve:
      return to == Mode::kReceive || to == Mode::kTransmit || to == Mode::kSleep;
    case Mode::kReceive:
      return to == Mode::kValidate || to == Mode::kSleep;
    case Mode::kValidate:
    case Mode::kTransmit:
      return to == Mode::kSleep;
  }
  return false;
}

void MacConfig::validate() const {
  const Ticks zero{0};
  if (sleep_period <= zero || rx_timeout <= zero || observation <= zero || preamble < zero) {
    throw ConfigError("MAC durations must be positive");
  }
  if (inter_frame_gap < zero || validation_time < zero || cycle_randomization < zero) {
    throw ConfigError("MAC gaps must be non-negative");
  }
  if (jitter_low < zero || jitter_high < jitter_low) {
    throw ConfigError("wake-up jitter must satisfy 0 <= t_l <= t_h");
  }
  if (busy_threshold == 0) throw ConfigError("busy threshold must be at least 1");
  if (rx_buffer == 0 || tx_buffer == 0) throw ConfigError("buffers must hold at least one frame");
  if (lock_bits == 0) throw ConfigError("lock_bits must be at least 1");
  if (!(noise_edge_rate >= 0.0)) throw ConfigError("noise edge rate must be non-negative");
  if (!(rx_power_mw >= 0.0 && tx_power_mw >= 0.0 && mcu_power_mw >= 0.0 && sleep_power_mw >= 0.0)) {
    throw ConfigError("powers must be non-negative");
  }
  if (dedup_capacity == 0) throw ConfigError("dedup capacity must be at least 1");
  for (Ticks p : wake_phases) {
    if (p < zero) throw ConfigError("wake phases must be non-negative");
  }
  relay.validate();
  (void)timing();
}

Ticks MacConfig::frame_airtime() const {
  const codec::BitTiming t = timing();
  const std::size_t bytes = codec::preamble_bytes_for(to_ms(preamble), t) + codec::kOnAirBytes;
  return Ticks{static_cast<std::int64_t>(bytes * 8) * t.bit_duration().count()};
}

Ticks EnergyLedger::total_time() const {
  Ticks t{0};
  for (Ticks m : mode_time) t += m;
  return t;
}

EnergyLedger energy_report(const std::array<Ticks, kModeCount>& mode_time, Ticks on_air,
                           const MacConfig& cfg) {
  EnergyLedger e;
  e.mode_time = mode_time;
  e.on_air = on_air;
  auto secs = [&](Mode m) { return to_seconds(mode_time[mode_index(m)]); };
  e.rx_mj = cfg.rx_power_mw * (secs(Mode::kObserve) + secs(Mode::kReceive));
  e.tx_mj = cfg.tx_power_mw * to_seconds(on_air);
  e.mcu_mj =
      cfg.mcu_power_mw * (secs(Mode::kObserve) + secs(Mode::kValidate) + secs(Mode::kTransmit));
  e.sleep_mj = cfg.sleep_power_mw * secs(Mode::kSleep);
  return e;
}

const NodeReport& SimReport::node(topology::TagId id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return n;
  }
  throw std::out_of_range("no such node in report");
}

bool SimReport::delivered(topology::TagId src, topology::TagId dst,
                          std::uint8_t message_id) const {
  return std::any_of(deliveries.begin(), deliveries.end(), [&](const Delivery& d) {
    return d.src == src && d.dst == dst && d.message_id == message_id;
  });
}

nlohmann::json to_json(const SimReport& r) {
  using nlohmann::json;
  json doc;
  doc["seed"] = r.seed;
  doc["duration_us"] = to_us(r.duration);
  json deliveries = json::array();
  for (const auto& d : r.deliveries) {
    deliveries.push_back({{"src", d.src},
                          {"dst", d.dst},
                          {"message_id", d.message_id},
                          {"path", d.path},
                          {"sent_us", to_us(d.sent)},
                          {"latency_us", d.latency_us()}});
  }
  doc["deliveries"] = deliveries;
  json nodes = json::array();
  for (const auto& n : r.nodes) {
    json modes;
    for (std::size_t m = 0; m < kModeCount; ++m) {
      modes[to_string(static_cast<Mode>(m))] = to_ms(n.energy.mode_time[m]);
    }
    const auto& c = n.counters;
    nodes.push_back({{"id", n.id},
                     {"energy",
                      {{"rx_mj", n.energy.rx_mj},
                       {"tx_mj", n.energy.tx_mj},
                       {"mcu_mj", n.energy.mcu_mj},
                       {"sleep_mj", n.energy.sleep_mj},
                       {"on_air_ms", to_ms(n.energy.on_air)},
                       {"mode_ms", modes}}},
                     {"counters",
                      {{"wakeups", c.wakeups},
                       {"busy_observations", c.busy_observations},
                       {"false_triggers", c.false_triggers},
                       {"rx_timeouts", c.rx_timeouts},
                       {"receptions", c.receptions},
                       {"frames_ok", c.frames_ok},
                       {"crc_failures", c.crc_failures},
                       {"collisions", c.collisions},
                       {"duplicates", c.duplicates},
                       {"forward_limit_drops", c.forward_limit_drops},
                       {"tx_overflow", c.tx_overflow},
                       {"rx_overflow", c.rx_overflow},
                       {"transmissions", c.transmissions},
                       {"delivered", c.delivered}}}});
  }
  doc["nodes"] = nodes;
  doc["collisions"] = r.collisions;
  doc["false_triggers"] = r.false_triggers;
  doc["transmissions"] = r.transmissions.size();
  return doc;
}

ObservationResult channel_observe(std::size_t signal_transitions, std::size_t noise_edges,
                                  std::size_t threshold) {
  const std::size_t total = signal_transitions + noise_edges;
  return {total, total >= threshold};
}

std::size_t sample_noise_edges(double rate_per_s, NoiseModel model, Ticks window,
                               std::mt19937_64& rng) {
  const double mean = rate_per_s * to_seconds(window);
  if (!(mean > 0.0)) return 0;
  if (model == NoiseModel::kPoisson) {
    std::poisson_distribution<std::size_t> edges(mean);
    return edges(rng);
  }
  const double whole = std::floor(mean);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return static_cast<std::size_t>(whole) + (u(rng) < mean - whole ? 1 : 0);
}

std::size_t count_transitions(const codec::SymbolStream& s, Ticks start, Ticks from, Ticks to) {
  const std::int64_t h = s.timing.half_symbol().count();
  const auto n = static_cast<std::int64_t>(s.levels.size());
  if (n == 0 || to <= from) return 0;
  // Edge j sits at start + j*h; keep those in (from, to].
  std::int64_t lo = (from - start).count() < 0 ? 0 : (from - start).count() / h + 1;
  std::int64_t hi = (to - start).count() < 0 ? -1 : (to - start).count() / h;
  hi = std::min(hi, n);
  std::size_t count = 0;
  for (std::int64_t j = lo; j <= hi; ++j) {
    const std::uint8_t before = j == 0 ? 0 : s.levels[static_cast<std::size_t>(j - 1)];
    const std::uint8_t after = j == n ? 0 : s.levels[static_cast<std::size_t>(j)];
    if (before != after) ++count;
  }
  return count;
}

SimReport simulate(const rf::RfEnvironment& env, const topology::Deployment& dep,
                   const MacConfig& mac, const std::vector<TrafficItem>& traffic, Ticks duration,
                   std::uint64_t seed, const topology::CancellationMode& cancellation) {
  dep.validate();
  const topology::LinkBudget budget(env, dep, cancellation, derive_seed(seed, 2, 0));
  return simulate(budget, dep, mac, traffic, duration, seed);
}

SimReport simulate(const topology::LinkBudget& budget, const topology::Deployment& dep,
                   const MacConfig& mac, const std::vector<TrafficItem>& traffic, Ticks duration,
                   std::uint64_t seed) {
  mac.validate();
  if (duration < Ticks{0}) throw ConfigError("duration must be non-negative");
  if (budget.size() != dep.tags.size()) throw ConfigError("link budget does not match deployment");
  if (!mac.wake_phases.empty() && mac.wake_phases.size() != dep.tags.size()) {
    throw ConfigError("wake_phases needs one entry per tag");
  }
  validate_traffic(dep, traffic, duration);
  Simulator sim(budget, dep, mac, duration, seed);
  return sim.run(traffic, dep);
}

std::optional<std::string> check_trace(const SimReport& r) {
  for (const auto& n : r.nodes) {
    Mode mode = Mode::kSleep;
    Ticks since{0};
    std::array<Ticks, kModeCount> acc{};
    for (const auto& e : r.trace) {
      if (e.node != n.id) continue;
      const std::string where = "node " + std::to_string(n.id) + " at " +
                                std::to_string(to_us(e.time)) + " us: ";
      if (e.time < since) return where + "time went backwards";
      if (e.from != mode) return where + "trace discontinuity";
      if (!allowed_transition(e.from, e.to)) {
        return where + "illegal " + to_string(e.from) + " -> " + to_string(e.to);
      }
      acc[mode_index(mode)] += e.time - since;
      mode = e.to;
      since = e.time;
    }
    acc[mode_index(mode)] += r.duration - since;
    if (acc != n.energy.mode_time) {
      return "node " + std::to_string(n.id) + ": mode durations disagree with the ledger";
    }
    if (n.energy.total_time() != r.duration) {
      return "node " + std::to_string(n.id) + ": mode durations do not sum to the duration";
    }
  }
  return std::nullopt;
}

std::size_t max_transmissions_per_key(const SimReport& r) {
  std::map<std::tuple<TagId, std::uint8_t, std::uint8_t>, std::size_t> counts;
  std::size_t best = 0;
  for (const auto& t : r.transmissions) {
    if (t.phase_shifted) continue;
    best = std::max(best, ++counts[{t.node, t.frame.sender_id, t.frame.message_id}]);
  }
  return best;
}

}  // namespace t2t::mac
