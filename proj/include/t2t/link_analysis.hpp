#pragma once

#include <cstddef>
#include <vector>

#include "t2t/rf_propagation.hpp"

namespace t2t::analysis {

/// Tags on a straight line away from the exciter. spacings[0] is the
/// exciter-to-tag-1 distance, spacings[k] the distance from tag k to tag k+1
/// (1-based tag numbering throughout this header).
class LineTopology {
 public:
  explicit LineTopology(std::vector<double> spacings);
  static LineTopology equally_spaced(std::size_t tags, double spacing);

  std::size_t tag_count() const { return spacings_.size(); }
  double spacing(std::size_t k) const { return spacings_.at(k - 1); }

  /// Sum of spacings a..b inclusive (1-based); 0 when a > b.
  double cumulative(std::size_t a, std::size_t b) const;

 private:
  std::vector<double> spacings_;
  std::vector<double> prefix_;  // prefix_[k] = sum of the first k spacings
};

/// Forward over backward received power between tags n and m.
double asymmetry_ratio(const rf::RfEnvironment& env, rf::Position exciter, rf::Position n,
                       rf::Position m);

/// Backward-link power gain of relaying through tag i instead of tag N
/// talking to tag 1 directly. Requires 1 < i < N.
double backward_multihop_gain(const LineTopology& line, std::size_t relay_index);

/// Closed form of backward_multihop_gain for equal spacing.
double equal_spacing_gain(std::size_t tags, std::size_t relay_index);

/// Relay index in (1, N) with the largest backward gain. Requires N >= 3.
std::size_t optimal_relay_index(const LineTopology& line);

/// Product d_{E,i} * d_{i-1,i} at which the backward link sits exactly at the
/// sensitivity threshold.
double spacing_epsilon(const rf::RfEnvironment& env, double exciter_gain_toward_tag);

/// Largest spacing of tag i from tag i-1 keeping the backward link alive:
/// positive root of d^2 + prefix * d - epsilon = 0, where prefix is the
/// exciter-to-tag-(i-1) distance.
double optimal_spacing(const rf::RfEnvironment& env, double prefix_length,
                       double exciter_gain_toward_tag);
double optimal_spacing(const rf::RfEnvironment& env, const LineTopology& line_prefix,
                       std::size_t i, double exciter_gain_toward_tag);

double fraunhofer_distance(double antenna_dimension, double wavelength);

struct LadderStep {
  std::size_t tags;
  double range_m;    // exciter to the last tag
  double spacing_m;  // spacing of the last tag (d_1 for the first row)
};

/// Greedy line extension with optimal spacings until the next spacing would
/// fall under the Fraunhofer distance or `max_tags` is reached.
std::vector<LadderStep> max_range_ladder(const rf::RfEnvironment& env, double d1,
                                         double antenna_dimension, std::size_t max_tags);

inline constexpr double kDefaultAntennaDimension = 0.17;  // m

}  // namespace t2t::analysis
