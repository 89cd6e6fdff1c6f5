#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include <json.hpp>

#include "t2t/rf_propagation.hpp"

namespace t2t::topology {

using TagId = std::uint8_t;

struct TagPlacement {
  TagId id = 0;
  rf::Position position;
};

/// One or more exciters plus a set of static tags. With several exciters a
/// tag backscatters the strongest carrier it sees.
struct Deployment {
  std::vector<rf::Position> exciters;
  std::vector<TagPlacement> tags;
  double area_side = 0.0;

  /// Throws ConfigError on duplicate ids, missing exciter or no tags.
  void validate() const;
  std::size_t index_of(TagId id) const;
};

nlohmann::json to_json(const Deployment& dep);
Deployment deployment_from_json(const nlohmann::json& doc);

/// Exciter delivering the largest available power at `tag`.
rf::Position dominant_exciter(const rf::RfEnvironment& env, std::span<const rf::Position> exciters,
                              rf::Position tag);

struct NoCancellation {};
struct GeometricCancellation {
  double band = rf::kDefaultCancellationBand;
};
struct BernoulliCancellation {
  double probability = 0.1;
};
using CancellationMode = std::variant<NoCancellation, GeometricCancellation, BernoulliCancellation>;

std::string describe(const CancellationMode& mode);

/// Pairwise received power and cancellation state for every ordered tag pair,
/// indexed by position in Deployment::tags. Shared by graph construction and
/// the MAC channel.
class LinkBudget {
 public:
  LinkBudget(const rf::RfEnvironment& env, const Deployment& dep, const CancellationMode& mode,
             std::uint64_t seed);

  std::size_t size() const { return n_; }
  double power(std::size_t tx, std::size_t rx) const { return power_[tx * n_ + rx]; }
  bool alive(std::size_t tx, std::size_t rx) const { return alive_[tx * n_ + rx] != 0; }
  bool cancelled(std::size_t tx, std::size_t rx, bool phase_shifted) const;
  /// Link usable by a given transmission copy.
  bool audible(std::size_t tx, std::size_t rx, bool phase_shifted) const {
    return tx != rx && alive(tx, rx) && !cancelled(tx, rx, phase_shifted);
  }
  void set_cancelled(std::size_t tx, std::size_t rx, bool phase_shifted, bool value);

 private:
  std::size_t n_;
  std::vector<double> power_;
  std::vector<std::uint8_t> alive_;
  std::vector<std::uint8_t> cancelled_plain_;
  std::vector<std::uint8_t> cancelled_shifted_;
};

/// Directed link graph; a present edge carries the received power in watts.
class LinkGraph {
 public:
  explicit LinkGraph(std::vector<TagId> nodes);

  void add_link(TagId from, TagId to, double weight_w);
  std::optional<double> weight(TagId from, TagId to) const;
  bool has_link(TagId from, TagId to) const { return weight(from, to).has_value(); }

  const std::vector<TagId>& nodes() const { return nodes_; }
  std::size_t link_count() const;
  std::size_t index_of(TagId id) const;

  /// Fewest-hop distance from the node at index `src` to every node (-1: unreachable).
  std::vector<int> hop_distances_from(std::size_t src) const;

 private:
  std::vector<TagId> nodes_;
  std::vector<std::optional<double>> weights_;
};

LinkGraph build_graph(const rf::RfEnvironment& env, const Deployment& dep,
                      const CancellationMode& mode, std::uint64_t seed);
LinkGraph graph_from_budget(const LinkBudget& budget, const Deployment& dep);

bool is_single_hop_connected(const LinkGraph& g);
bool is_multi_hop_connected(const LinkGraph& g);
std::optional<int> hop_count(const LinkGraph& g, TagId src, TagId dst);

/// Uniform placement of `count` tags (ids 1..count) in [0, area_side]^2,
/// rejecting and resampling any tag closer than `min_spacing` to another tag
/// or to an exciter.
Deployment random_deployment(std::size_t count, double area_side,
                             std::vector<rf::Position> exciters, double min_spacing,
                             std::mt19937_64& rng);

}  // namespace t2t::topology
