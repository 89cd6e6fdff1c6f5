#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "t2t/mac_engine.hpp"

namespace t2t::efficiency {

enum class Strategy { kPhaseShift, kMultiHop };  // case A, case B
enum class Knowledge { kKnown, kUnknown };
enum class Range { kSingleHop, kMultiHop };      // SHR, MHR

struct Cell {
  Strategy strategy = Strategy::kMultiHop;
  Knowledge knowledge = Knowledge::kKnown;
  Range range = Range::kMultiHop;

  friend bool operator==(const Cell&, const Cell&) = default;
};

std::string cell_name(const Cell& c);  // e.g. "B/unknown/MHR"
/// All eight cells in table order: case, then topology knowledge, then range.
std::vector<Cell> all_cells();

struct EfficiencyParams {
  std::optional<std::size_t> hops;        // H, known topology with MHR
  std::optional<std::size_t> relays;      // M, unknown topology
  std::optional<double> p_cancel;         // p_c, unknown topology
  double t_frame_ms = 44.8;               // t_f
  double t_proc_ms = 1.0;                 // per-hop forwarding time

  void validate() const;
};

/// Frame time on air for a MAC configuration (preamble plus 11 bytes).
double frame_time_ms(const mac::MacConfig& cfg);

struct Metrics {
  double expected_messages = 0.0;   // E[m]
  double expected_time_ms = 0.0;    // E[t]
  double success_probability = 0.0; // Pr(s)
};

Metrics evaluate(const Cell& cell, const EfficiencyParams& p);

/// One row per cell: case,topology,range,E_m,E_t_ms,Pr_s.
void write_table_csv(std::ostream& out, const EfficiencyParams& p);

struct CrossValidationOptions {
  std::size_t runs = 2000;
  std::uint64_t seed = 1;
  bool collisions_enabled = false;
  mac::MacConfig mac;
  rf::RfEnvironment env = rf::RfEnvironment::standard();
};

struct CrossValidation {
  Cell cell;
  std::size_t runs = 0;
  std::size_t successes = 0;
  double analytic_success = 0.0;
  double simulated_success = 0.0;
  double sigma = 0.0;  // sqrt(p(1-p)/n) at the analytic p
  double analytic_messages = 0.0;
  double simulated_messages = 0.0;  // mean channel occupancies per run
  bool disagreement = false;         // |sim - analytic| > 3 sigma
};

/// Monte Carlo twin of a cell:
///  - B/unknown: star of src, M relays and dst; every link into dst is
///    cancelled with probability p_c;
///  - B/known/MHR: H-hop backward line;
///  - B/known/SHR: one in-range link;
///  - A/SHR: one in-range link cancelled with probability p_c for the plain
///    copy, phase-shift repeat on;
///  - A/MHR: src and dst out of single-hop range, phase-shift repeat on.
CrossValidation cross_validate(const Cell& cell, const EfficiencyParams& p,
                               const CrossValidationOptions& opt = {});

}  // namespace t2t::efficiency
