#include "t2t/topology_graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace t2t::topology {

void Deployment::validate() const {
  if (exciters.empty()) throw ConfigError("deployment needs at least one exciter");
  if (tags.empty()) throw ConfigError("deployment needs at least one tag");
  std::set<TagId> seen;
  for (const auto& t : tags) {
    if (!seen.insert(t.id).second) {
      throw ConfigError("duplicate tag id " + std::to_string(t.id));
    }
    if (!std::isfinite(t.position.x) || !std::isfinite(t.position.y)) {
      throw ConfigError("tag " + std::to_string(t.id) + " has a non-finite coordinate");
    }
  }
}

std::size_t Deployment::index_of(TagId id) const {
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i].id == id) return i;
  }
  throw std::out_of_range("unknown tag id " + std::to_string(id));
}

nlohmann::json to_json(const Deployment& dep) {
  nlohmann::json doc;
  auto pos = [](rf::Position p) { return nlohmann::json{{"x", p.x}, {"y", p.y}}; };
  doc["exciter"] = pos(dep.exciters.front());
  if (dep.exciters.size() > 1) {
    doc["exciters"] = nlohmann::json::array();
    for (const auto& e : dep.exciters) doc["exciters"].push_back(pos(e));
  }
  doc["area_side"] = dep.area_side;
  doc["tags"] = nlohmann::json::array();
  for (const auto& t : dep.tags) {
    doc["tags"].push_back({{"id", t.id}, {"x", t.position.x}, {"y", t.position.y}});
  }
  return doc;
}

Deployment deployment_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("deployment must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "exciter" && key != "exciters" && key != "area_side" && key != "tags") {
      throw ConfigError("unknown deployment key '" + key + "'");
    }
  }
  auto pos = [](const nlohmann::json& j) {
    return rf::Position{j.at("x").get<double>(), j.at("y").get<double>()};
  };
  Deployment dep;
  try {
    if (doc.contains("exciters")) {
      for (const auto& e : doc.at("exciters")) dep.exciters.push_back(pos(e));
    } else {
      dep.exciters.push_back(pos(doc.at("exciter")));
    }
    dep.area_side = doc.value("area_side", 0.0);
    for (const auto& t : doc.at("tags")) {
      const int id = t.at("id").get<int>();
      if (id < 0 || id > 255) throw ConfigError("tag id out of 1-byte range");
      dep.tags.push_back({static_cast<TagId>(id), pos(t)});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed deployment: ") + e.what());
  }
  dep.validate();
  return dep;
}

rf::Position dominant_exciter(const rf::RfEnvironment& env, std::span<const rf::Position> exciters,
                              rf::Position tag) {
  if (exciters.empty()) throw ConfigError("no exciter");
  std::size_t best = 0;
  double best_power = -1.0;
  for (std::size_t i = 0; i < exciters.size(); ++i) {
    const double p = rf::available_power(env, exciters[i], tag);
    if (p > best_power) {
      best_power = p;
      best = i;
    }
  }
  return exciters[best];
}

std::string describe(const CancellationMode& mode) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, NoCancellation>) {
          return "off";
        } else if constexpr (std::is_same_v<T, GeometricCancellation>) {
          return "geometric";
        } else {
          return "bernoulli";
        }
      },
      mode);
}

LinkBudget::LinkBudget(const rf::RfEnvironment& env, const Deployment& dep,
                       const CancellationMode& mode, std::uint64_t seed)
    : n_(dep.tags.size()),
      power_(n_ * n_, 0.0),
      alive_(n_ * n_, 0),
      cancelled_plain_(n_ * n_, 0),
      cancelled_shifted_(n_ * n_, 0) {
  dep.validate();
  const auto* bernoulli = std::get_if<BernoulliCancellation>(&mode);
  if (bernoulli && !(bernoulli->probability >= 0.0 && bernoulli->probability <= 1.0)) {
    throw ConfigError("cancellation probability must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(bernoulli ? bernoulli->probability : 0.0);

  for (std::size_t tx = 0; tx < n_; ++tx) {
    const rf::Position txp = dep.tags[tx].position;
    const rf::Position exciter = dominant_exciter(env, dep.exciters, txp);
    for (std::size_t rx = 0; rx < n_; ++rx) {
      if (tx == rx) continue;
      const rf::Position rxp = dep.tags[rx].position;
      const std::size_t k = tx * n_ + rx;
      power_[k] = rf::received_power(env, exciter, txp, rxp);
      alive_[k] = power_[k] >= env.tag_sensitivity() ? 1 : 0;
      if (const auto* g = std::get_if<GeometricCancellation>(&mode)) {
        cancelled_plain_[k] = rf::link_cancelled(env, exciter, txp, rxp, 0.0, g->band);
        cancelled_shifted_[k] = rf::link_cancelled(env, exciter, txp, rxp, kPi / 2.0, g->band);
      } else if (std::holds_alternative<BernoulliCancellation>(mode)) {
        // Drawn for every ordered pair, alive or not, so the stream does not
        // depend on the power threshold.
        cancelled_plain_[k] = coin(rng) ? 1 : 0;
      }
    }
  }
}

bool LinkBudget::cancelled(std::size_t tx, std::size_t rx, bool phase_shifted) const {
  const std::size_t k = tx * n_ + rx;
  return (phase_shifted ? cancelled_shifted_[k] : cancelled_plain_[k]) != 0;
}

void LinkBudget::set_cancelled(std::size_t tx, std::size_t rx, bool phase_shifted, bool value) {
  auto& m = phase_shifted ? cancelled_shifted_ : cancelled_plain_;
  m.at(tx * n_ + rx) = value ? 1 : 0;
}

LinkGraph::LinkGraph(std::vector<TagId> nodes)
    : nodes_(std::move(nodes)), weights_(nodes_.size() * nodes_.size()) {
  std::set<TagId> unique(nodes_.begin(), nodes_.end());
  if (unique.size() != nodes_.size()) throw ConfigError("duplicate node id in graph");
}

std::size_t LinkGraph::index_of(TagId id) const {
  auto it = std::find(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end()) throw std::out_of_range("unknown node id " + std::to_string(id));
  return static_cast<std::size_t>(it - nodes_.begin());
}

void LinkGraph::add_link(TagId from, TagId to, double weight_w) {
  if (from == to) throw ConfigError("self links are not allowed");
  weights_[index_of(from) * nodes_.size() + index_of(to)] = weight_w;
}

std::optional<double> LinkGraph::weight(TagId from, TagId to) const {
  return weights_[index_of(from) * nodes_.size() + index_of(to)];
}

std::size_t LinkGraph::link_count() const {
  return static_cast<std::size_t>(
      std::count_if(weights_.begin(), weights_.end(), [](const auto& w) { return w.has_value(); }));
}

std::vector<int> LinkGraph::hop_distances_from(std::size_t src) const {
  const std::size_t n = nodes_.size();
  std::vector<int> dist(n, -1);
  std::deque<std::size_t> frontier{src};
  dist[src] = 0;
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop_front();
    for (std::size_t v = 0; v < n; ++v) {
      if (dist[v] < 0 && weights_[u * n + v]) {
        dist[v] = dist[u] + 1;
        frontier.push_back(v);
      }
    }
  }
  return dist;
}

LinkGraph graph_from_budget(const LinkBudget& budget, const Deployment& dep) {
  std::vector<TagId> ids;
  ids.reserve(dep.tags.size());
  for (const auto& t : dep.tags) ids.push_back(t.id);
  LinkGraph g(std::move(ids));
  for (std::size_t tx = 0; tx < budget.size(); ++tx) {
    for (std::size_t rx = 0; rx < budget.size(); ++rx) {
      if (budget.audible(tx, rx, false)) {
        g.add_link(dep.tags[tx].id, dep.tags[rx].id, budget.power(tx, rx));
      }
    }
  }
  return g;
}

LinkGraph build_graph(const rf::RfEnvironment& env, const Deployment& dep,
                      const CancellationMode& mode, std::uint64_t seed) {
  return graph_from_budget(LinkBudget(env, dep, mode, seed), dep);
}

bool is_single_hop_connected(const LinkGraph& g) {
  for (TagId a : g.nodes()) {
    for (TagId b : g.nodes()) {
      if (a != b && !g.has_link(a, b)) return false;
    }
  }
  return true;
}

bool is_multi_hop_connected(const LinkGraph& g) {
  const std::size_t n = g.nodes().size();
  if (n <= 1) return true;
  // Strongly connected iff node 0 reaches everyone and everyone reaches node 0.
  const auto forward = g.hop_distances_from(0);
  if (std::any_of(forward.begin(), forward.end(), [](int d) { return d < 0; })) return false;
  for (std::size_t v = 1; v < n; ++v) {
    if (g.hop_distances_from(v)[0] < 0) return false;
  }
  return true;
}

std::optional<int> hop_count(const LinkGraph& g, TagId src, TagId dst) {
  const std::size_t s = g.index_of(src);
  const std::size_t d = g.index_of(dst);
  const int hops = g.hop_distances_from(s)[d];
  if (hops < 0) return std::nullopt;
  return hops;
}

Deployment random_deployment(std::size_t count, double area_side,
                             std::vector<rf::Position> exciters, double min_spacing,
                             std::mt19937_64& rng) {
  if (count == 0 || count > 255) throw ConfigError("tag count must lie in [1, 255]");
  if (!(area_side > 0.0)) throw ConfigError("area side must be positive");
  std::uniform_real_distribution<double> coord(0.0, area_side);
  Deployment dep;
  dep.exciters = std::move(exciters);
  dep.area_side = area_side;
  constexpr int kMaxAttempts = 100'000;
  for (std::size_t i = 0; i < count; ++i) {
    int attempts = 0;
    while (true) {
      if (++attempts > kMaxAttempts) {
        throw ConfigError("cannot place tags with the requested minimum spacing");
      }
      const rf::Position p{coord(rng), coord(rng)};
      auto too_close = [&](rf::Position q) { return rf::distance(p, q) < min_spacing; };
      if (std::any_of(dep.exciters.begin(), dep.exciters.end(), too_close)) continue;
      if (std::any_of(dep.tags.begin(), dep.tags.end(),
                      [&](const TagPlacement& t) { return too_close(t.position); })) {
        continue;
      }
      dep.tags.push_back({static_cast<TagId>(i + 1), p});
      break;
    }
  }
  return dep;
}

}  // namespace t2t::topology
