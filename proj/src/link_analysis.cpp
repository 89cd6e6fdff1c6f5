#include "t2t/link_analysis.hpp"

#include <cmath>

namespace t2t::analysis {

LineTopology::LineTopology(std::vector<double> spacings) : spacings_(std::move(spacings)) {
  if (spacings_.empty()) throw ConfigError("line topology needs at least one tag");
  prefix_.reserve(spacings_.size() + 1);
  prefix_.push_back(0.0);
  for (double d : spacings_) {
    if (!(d > 0.0)) throw ConfigError("line spacings must be positive");
    prefix_.push_back(prefix_.back() + d);
  }
}

LineTopology LineTopology::equally_spaced(std::size_t tags, double spacing) {
  return LineTopology(std::vector<double>(tags, spacing));
}

double LineTopology::cumulative(std::size_t a, std::size_t b) const {
  if (a == 0 || b > spacings_.size()) throw std::out_of_range("line index out of range");
  if (a > b) return 0.0;
  return prefix_[b] - prefix_[a - 1];
}

double asymmetry_ratio(const rf::RfEnvironment& env, rf::Position exciter, rf::Position n,
                       rf::Position m) {
  const double d_en = rf::distance(exciter, n);
  const double d_em = rf::distance(exciter, m);
  if (!(d_en > 0.0 && d_em > 0.0)) throw DomainError("asymmetry_ratio: tag at the exciter");
  const double gain_ratio =
      rf::exciter_gain_toward(env, exciter, n) / rf::exciter_gain_toward(env, exciter, m);
  const double r = d_em / d_en;
  return gain_ratio * r * r;
}

double backward_multihop_gain(const LineTopology& line, std::size_t relay_index) {
  const std::size_t n = line.tag_count();
  if (!(relay_index > 1 && relay_index < n)) {
    throw ConfigError("relay index must lie strictly between 1 and N");
  }
  const double far = line.cumulative(1, n) * line.cumulative(2, n);
  const double relay = line.cumulative(1, relay_index) * line.cumulative(2, relay_index);
  const double r = far / relay;
  return r * r;
}

double equal_spacing_gain(std::size_t tags, std::size_t relay_index) {
  if (!(relay_index > 1 && relay_index < tags)) {
    throw ConfigError("relay index must lie strictly between 1 and N");
  }
  const double n = static_cast<double>(tags);
  const double i = static_cast<double>(relay_index);
  const double r = (n * (n - 1.0)) / (i * (i - 1.0));
  return r * r;
}

std::size_t optimal_relay_index(const LineTopology& line) {
  if (line.tag_count() < 3) throw ConfigError("optimal relay needs at least 3 tags");
  std::size_t best = 2;
  double best_gain = backward_multihop_gain(line, 2);
  for (std::size_t i = 3; i < line.tag_count(); ++i) {
    const double g = backward_multihop_gain(line, i);
    if (g > best_gain) {
      best_gain = g;
      best = i;
    }
  }
  return best;
}

double spacing_epsilon(const rf::RfEnvironment& env, double exciter_gain_toward_tag) {
  const double lambda = env.wavelength();
  const double four_pi = 4.0 * kPi;
  const double radicand =
      env.exciter_power() * exciter_gain_toward_tag * env.tag_gain() / env.tag_sensitivity();
  if (!(radicand > 0.0)) throw ConfigError("spacing epsilon must be positive");
  const double eps = lambda * lambda / (four_pi * four_pi) * env.tag_gain() * env.k0() *
                     std::sqrt(radicand);
  if (!(eps > 0.0)) throw ConfigError("spacing epsilon must be positive");
  return eps;
}

double optimal_spacing(const rf::RfEnvironment& env, double prefix_length,
                       double exciter_gain_toward_tag) {
  if (prefix_length < 0.0) throw ConfigError("prefix length must be non-negative");
  const double eps = spacing_epsilon(env, exciter_gain_toward_tag);
  return 0.5 * (std::sqrt(prefix_length * prefix_length + 4.0 * eps) - prefix_length);
}

double optimal_spacing(const rf::RfEnvironment& env, const LineTopology& line_prefix,
                       std::size_t i, double exciter_gain_toward_tag) {
  if (i < 2 || i - 1 > line_prefix.tag_count()) {
    throw ConfigError("optimal_spacing needs the first i-1 spacings");
  }
  return optimal_spacing(env, line_prefix.cumulative(1, i - 1), exciter_gain_toward_tag);
}

double fraunhofer_distance(double antenna_dimension, double wavelength) {
  return 2.0 * antenna_dimension * antenna_dimension / wavelength;
}

std::vector<LadderStep> max_range_ladder(const rf::RfEnvironment& env, double d1,
                                         double antenna_dimension, std::size_t max_tags) {
  if (!(d1 > 0.0)) throw ConfigError("d1 must be positive");
  if (!(antenna_dimension > 0.0)) throw ConfigError("antenna dimension must be positive");
  const double d_min = fraunhofer_distance(antenna_dimension, env.wavelength());

  // Tags sit on the exciter boresight.
  const rf::Position exciter{0.0, 0.0};
  const double beam = env.beam_direction_deg() * kPi / 180.0;
  auto on_line = [&](double r) { return rf::Position{r * std::cos(beam), r * std::sin(beam)}; };

  std::vector<LadderStep> steps;
  if (max_tags == 0) return steps;
  double range = d1;
  steps.push_back({1, range, d1});
  while (steps.size() < max_tags) {
    // The gain toward the next tag is evaluated just beyond the current one;
    // on the boresight it is constant.
    const double gain = rf::exciter_gain_toward(env, exciter, on_line(range + d_min));
    const double d = optimal_spacing(env, range, gain);
    if (d < d_min) break;
    range += d;
    steps.push_back({steps.size() + 1, range, d});
  }
  return steps;
}

}  // namespace t2t::analysis
