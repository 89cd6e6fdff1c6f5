#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "t2t/link_analysis.hpp"
#include "t2t/topology_graph.hpp"

namespace t2t::coverage {

struct CoverageExperiment {
  rf::RfEnvironment env = rf::RfEnvironment::standard();
  rf::Position exciter{0.0, 3.0};
  double area_side = 30.0;
  std::vector<std::size_t> tag_counts;
  std::size_t runs_per_point = 1000;
  topology::CancellationMode cancellation = topology::NoCancellation{};
  std::uint64_t base_seed = 1;
  /// Defaults to the Fraunhofer distance of the default antenna when negative.
  double min_spacing = -1.0;

  void validate() const;
};

struct CoveragePoint {
  std::size_t tags = 0;
  double sh_probability = 0.0;
  double mh_probability = 0.0;
  double confidence_halfwidth = 0.0;  // 95% Wilson, largest of the two estimates
  std::uint64_t seed = 0;
};

/// Half-width of the 95% Wilson score interval for `successes` out of `trials`.
double wilson_halfwidth(std::size_t successes, std::size_t trials);

/// Deterministic per-run seed from (base, point, run).
std::uint64_t run_seed(std::uint64_t base_seed, std::uint64_t point, std::uint64_t run);

std::vector<CoveragePoint> run_coverage(const CoverageExperiment& exp);

/// CSV with columns N,sh_prob,mh_prob,ci,mode,seed.
void write_coverage_csv(std::ostream& out, const std::vector<CoveragePoint>& points,
                        const topology::CancellationMode& mode, bool header = true);

/// Maximum range versus tag count; thin wrapper over the max-range ladder.
std::vector<analysis::LadderStep> run_max_range_curve(const rf::RfEnvironment& env, double d1,
                                                      double antenna_dimension,
                                                      std::size_t max_tags);

/// CSV with columns N,range_m,d_N_m.
void write_range_csv(std::ostream& out, const std::vector<analysis::LadderStep>& steps);

}  // namespace t2t::coverage
