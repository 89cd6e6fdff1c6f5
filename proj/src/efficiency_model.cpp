#include "t2t/efficiency_model.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "t2t/link_analysis.hpp"
#include "t2t/seeding.hpp"

namespace t2t::efficiency {

namespace {

const char* strategy_name(Strategy s) { return s == Strategy::kPhaseShift ? "A" : "B"; }
const char* knowledge_name(Knowledge k) { return k == Knowledge::kKnown ? "known" : "unknown"; }
const char* range_name(Range r) { return r == Range::kSingleHop ? "SHR" : "MHR"; }

std::size_t require_hops(const Cell& c, const EfficiencyParams& p) {
  if (!p.hops) throw ConfigError(cell_name(c) + " needs the hop count H");
  if (*p.hops < 1) throw ConfigError(cell_name(c) + " needs H >= 1");
  return *p.hops;
}

std::pair<std::size_t, double> require_relays(const Cell& c, const EfficiencyParams& p) {
  if (!p.relays || !p.p_cancel) {
    throw ConfigError(cell_name(c) + " needs the relay count M and cancellation probability p_c");
  }
  return {*p.relays, *p.p_cancel};
}

struct Scenario {
  topology::Deployment dep;
  topology::TagId src;
  topology::TagId dst;
  mac::PhasePolicy policy;
  // Plain-copy cancellation probability for links into dst.
  double p_into_dst = 0.0;
  // Links into dst from the source only (otherwise every tag).
  bool source_link_only = false;
  Ticks duration;
};

topology::Deployment single_exciter(std::vector<rf::Position> tags) {
  topology::Deployment dep;
  dep.exciters = {{0.0, 0.0}};
  for (std::size_t i = 0; i < tags.size(); ++i) {
    dep.tags.push_back({static_cast<topology::TagId>(i + 1), tags[i]});
  }
  return dep;
}

Scenario build_scenario(const Cell& c, const EfficiencyParams& p, const rf::RfEnvironment& env) {
  Scenario s;
  s.src = 1;
  s.dst = 2;
  s.policy = c.strategy == Strategy::kPhaseShift ? mac::PhasePolicy::kPhaseShiftRepeat
                                                 : mac::PhasePolicy::kSingle;
  s.duration = ms_to_ticks(600.0);

  if (c.strategy == Strategy::kPhaseShift) {
    if (c.range == Range::kSingleHop) {
      s.dep = single_exciter({{1.0, 0.0}, {2.0, 0.0}});
      s.p_into_dst = p.p_cancel.value_or(0.0);
      s.source_link_only = true;
    } else {
      s.dep = single_exciter({{1.0, 0.0}, {9.0, 0.0}});
    }
    return s;
  }

  if (c.knowledge == Knowledge::kUnknown) {
    const auto [relays, pc] = require_relays(c, p);
    std::vector<rf::Position> pos{{1.0, 0.0}, {-1.0, 0.0}};
    for (std::size_t k = 0; k < relays; ++k) {
      const double a = kPi / 2.0 + kPi * static_cast<double>(k) / static_cast<double>(relays);
      pos.push_back({std::cos(a) * 1.0, std::sin(a) * 1.0});
    }
    s.dep = single_exciter(pos);
    s.p_into_dst = pc;
    s.duration = ms_to_ticks(600.0 + 150.0 * static_cast<double>(relays));
    return s;
  }

  if (c.range == Range::kSingleHop) {
    s.dep = single_exciter({{1.0, 0.0}, {2.0, 0.0}});
    return s;
  }

  // Backward line: src farthest from the exciter, each hop just inside range.
  const std::size_t hops = require_hops(c, p);
  const auto ladder =
      analysis::max_range_ladder(env.with_gain_pattern(rf::GainPattern::kIsotropic), 3.0,
                                 analysis::kDefaultAntennaDimension, hops + 1);
  if (ladder.size() < hops + 1) throw ConfigError("line too long for the Fraunhofer limit");
  std::vector<rf::Position> pos;
  for (const auto& step : ladder) pos.push_back({3.0 + 0.98 * (step.range_m - 3.0), 0.0});
  s.dep = single_exciter(pos);
  s.src = static_cast<topology::TagId>(hops + 1);
  s.dst = 1;
  s.duration = ms_to_ticks(600.0 + 150.0 * static_cast<double>(hops));
  return s;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string cell_name(const Cell& c) {
  return std::string(strategy_name(c.strategy)) + "/" + knowledge_name(c.knowledge) + "/" +
         range_name(c.range);
}

std::vector<Cell> all_cells() {
  std::vector<Cell> cells;
  for (Strategy s : {Strategy::kPhaseShift, Strategy::kMultiHop}) {
    for (Knowledge k : {Knowledge::kKnown, Knowledge::kUnknown}) {
      for (Range r : {Range::kSingleHop, Range::kMultiHop}) cells.push_back({s, k, r});
    }
  }
  return cells;
}

void EfficiencyParams::validate() const {
  if (hops && *hops < 1) throw ConfigError("H must be at least 1");
  if (p_cancel && !(*p_cancel >= 0.0 && *p_cancel <= 1.0)) {
    throw ConfigError("p_c must lie in [0, 1]");
  }
  if (!(t_frame_ms >= 0.0) || !(t_proc_ms >= 0.0)) {
    throw ConfigError("t_f and t_proc must be non-negative");
  }
}

double frame_time_ms(const mac::MacConfig& cfg) { return to_ms(cfg.frame_airtime()); }

Metrics evaluate(const Cell& c, const EfficiencyParams& p) {
  p.validate();
  const double tf = p.t_frame_ms;
  const double tp = p.t_proc_ms;
  if (c.strategy == Strategy::kPhaseShift) {
    return {2.0, 2.0 * tf, c.range == Range::kSingleHop ? 1.0 : 0.0};
  }
  if (c.knowledge == Knowledge::kKnown) {
    if (c.range == Range::kSingleHop) return {1.0, tf, 1.0};
    const double h = static_cast<double>(require_hops(c, p));
    return {h, h * (tf + tp) - tp, 1.0};
  }
  const auto [relays, pc] = require_relays(c, p);
  const double m = static_cast<double>(relays);
  return {m + 1.0, m * (tf + tp) + tf, flood::flood_delivery_probability(relays, pc)};
}

void write_table_csv(std::ostream& out, const EfficiencyParams& p) {
  out << "case,topology,range,E_m,E_t_ms,Pr_s\n";
  for (const Cell& c : all_cells()) {
    const Metrics m = evaluate(c, p);
    out << strategy_name(c.strategy) << ',' << knowledge_name(c.knowledge) << ','
        << range_name(c.range) << ',' << fmt(m.expected_messages) << ','
        << fmt(m.expected_time_ms) << ',' << fmt(m.success_probability) << '\n';
  }
}

CrossValidation cross_validate(const Cell& cell, const EfficiencyParams& p,
                               const CrossValidationOptions& opt) {
  CrossValidation cv;
  cv.cell = cell;
  cv.runs = opt.runs;
  const Metrics analytic = evaluate(cell, p);
  cv.analytic_success = analytic.success_probability;
  cv.analytic_messages = analytic.expected_messages;

  const Scenario s = build_scenario(cell, p, opt.env);
  mac::MacConfig mac = opt.mac;
  mac.phase_policy = s.policy;
  mac.collisions_enabled = opt.collisions_enabled;

  codec::Frame frame;
  frame.sender_id = s.src;
  frame.receiver_id = s.dst;
  frame.message_id = 1;
  const std::vector<mac::TrafficItem> traffic{{ms_to_ticks(1.0), s.src, frame}};
  const std::size_t dst_index = s.dep.index_of(s.dst);
  const std::size_t src_index = s.dep.index_of(s.src);
  const std::uint64_t cell_tag = static_cast<std::uint64_t>(cell.strategy) * 4 +
                                 static_cast<std::uint64_t>(cell.knowledge) * 2 +
                                 static_cast<std::uint64_t>(cell.range);

  std::size_t messages = 0;
  for (std::size_t run = 0; run < opt.runs; ++run) {
    const std::uint64_t seed = derive_seed(opt.seed, cell_tag, run);
    topology::LinkBudget budget(opt.env, s.dep, topology::NoCancellation{}, 0);
    std::mt19937_64 rng(derive_seed(seed, 3, 0));
    std::bernoulli_distribution cancel(s.p_into_dst);
    for (std::size_t tx = 0; tx < s.dep.tags.size(); ++tx) {
      if (tx == dst_index || (s.source_link_only && tx != src_index)) continue;
      budget.set_cancelled(tx, dst_index, false, cancel(rng));
    }
    const mac::SimReport r = mac::simulate(budget, s.dep, mac, traffic, s.duration, seed);
    if (r.delivered(s.src, s.dst, frame.message_id)) ++cv.successes;
    messages += r.transmissions.size();
  }

  const double n = static_cast<double>(opt.runs);
  cv.simulated_success = opt.runs ? static_cast<double>(cv.successes) / n : 0.0;
  cv.simulated_messages = opt.runs ? static_cast<double>(messages) / n : 0.0;
  const double pa = cv.analytic_success;
  cv.sigma = opt.runs ? std::sqrt(pa * (1.0 - pa) / n) : 0.0;
  cv.disagreement = std::abs(cv.simulated_success - pa) > 3.0 * cv.sigma;
  return cv;
}

}  // namespace t2t::efficiency
