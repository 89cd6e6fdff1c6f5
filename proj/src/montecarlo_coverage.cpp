#include "t2t/montecarlo_coverage.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "t2t/seeding.hpp"

namespace t2t::coverage {

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

}  // namespace

void CoverageExperiment::validate() const {
  if (runs_per_point < 1) throw ConfigError("runs_per_point must be at least 1");
  if (tag_counts.empty()) throw ConfigError("tag_counts must not be empty");
  if (!(area_side > 0.0)) throw ConfigError("area side must be positive");
  for (auto n : tag_counts) {
    if (n < 1 || n > 255) throw ConfigError("tag counts must lie in [1, 255]");
  }
}

double wilson_halfwidth(std::size_t successes, std::size_t trials) {
  if (trials == 0) return 0.0;
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  return z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
}

std::uint64_t run_seed(std::uint64_t base_seed, std::uint64_t point, std::uint64_t run) {
  return derive_seed(base_seed, point, run);
}

std::vector<CoveragePoint> run_coverage(const CoverageExperiment& exp) {
  exp.validate();
  const double min_spacing =
      exp.min_spacing >= 0.0
          ? exp.min_spacing
          : analysis::fraunhofer_distance(analysis::kDefaultAntennaDimension, exp.env.wavelength());

  std::vector<CoveragePoint> points;
  points.reserve(exp.tag_counts.size());
  for (std::size_t pi = 0; pi < exp.tag_counts.size(); ++pi) {
    const std::size_t n = exp.tag_counts[pi];
    std::size_t sh = 0;
    std::size_t mh = 0;
    for (std::size_t run = 0; run < exp.runs_per_point; ++run) {
      std::mt19937_64 rng(run_seed(exp.base_seed, pi, run));
      const auto dep = topology::random_deployment(n, exp.area_side, {exp.exciter}, min_spacing, rng);
      const auto g = topology::build_graph(exp.env, dep, exp.cancellation, rng());
      if (topology::is_single_hop_connected(g)) ++sh;
      if (topology::is_multi_hop_connected(g)) ++mh;
    }
    CoveragePoint pt;
    pt.tags = n;
    pt.sh_probability = static_cast<double>(sh) / static_cast<double>(exp.runs_per_point);
    pt.mh_probability = static_cast<double>(mh) / static_cast<double>(exp.runs_per_point);
    pt.confidence_halfwidth = std::max(wilson_halfwidth(sh, exp.runs_per_point),
                                       wilson_halfwidth(mh, exp.runs_per_point));
    pt.seed = exp.base_seed;
    points.push_back(pt);
  }
  return points;
}

void write_coverage_csv(std::ostream& out, const std::vector<CoveragePoint>& points,
                        const topology::CancellationMode& mode, bool header) {
  if (header) out << "N,sh_prob,mh_prob,ci,mode,seed\n";
  const std::string mode_name = topology::describe(mode);
  for (const auto& p : points) {
    out << p.tags << ',' << fmt("%.6f", p.sh_probability) << ',' << fmt("%.6f", p.mh_probability)
        << ',' << fmt("%.6f", p.confidence_halfwidth) << ',' << mode_name << ',' << p.seed << '\n';
  }
}

std::vector<analysis::LadderStep> run_max_range_curve(const rf::RfEnvironment& env, double d1,
                                                      double antenna_dimension,
                                                      std::size_t max_tags) {
  return analysis::max_range_ladder(env, d1, antenna_dimension, max_tags);
}

void write_range_csv(std::ostream& out, const std::vector<analysis::LadderStep>& steps) {
  out << "N,range_m,d_N_m\n";
  for (const auto& s : steps) {
    out << s.tags << ',' << fmt("%.6f", s.range_m) << ',' << fmt("%.6f", s.spacing_m) << '\n';
  }
}

}  // namespace t2t::coverage
