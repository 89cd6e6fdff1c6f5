#include "t2t/flood_relay.hpp"

#include <algorithm>
#include <cmath>

namespace t2t::flood {

DedupRing::DedupRing(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw ConfigError("dedup ring capacity must be at least 1");
}

bool DedupRing::contains(FrameKey key) const {
  return std::find(entries_.begin(), entries_.end(), key) != entries_.end();
}

void DedupRing::insert(FrameKey key) {
  if (contains(key)) return;
  if (entries_.size() == capacity_) entries_.pop_front();
  entries_.push_back(key);
}

void RelayPolicy::validate() const {
  if (rebroadcast_limit == 0) throw ConfigError("rebroadcast limit must be at least 1");
}

const char* to_string(DropReason r) {
  switch (r) {
    case DropReason::kDuplicate:
      return "duplicate";
    case DropReason::kOverflow:
      return "overflow";
    case DropReason::kForwardLimit:
      return "forward_limit";
  }
  return "unknown";
}

RelayNode::RelayNode(std::uint8_t id, RelayPolicy policy, std::size_t ring_capacity)
    : id_(id), policy_(policy), ring_(ring_capacity) {
  policy_.validate();
}

RelayDecision RelayNode::handle_frame(const codec::Frame& f, std::size_t tx_free_slots) {
  const FrameKey key = key_of(f);
  if (ring_.contains(key)) return Drop{DropReason::kDuplicate};
  if (f.receiver_id == id_) {
    ring_.insert(key);
    return Deliver{};
  }
  std::size_t& done = forwarded_[key];
  const std::size_t allowed = policy_.rebroadcast_limit > done ? policy_.rebroadcast_limit - done : 0;
  const std::size_t copies = std::min(allowed, tx_free_slots);
  if (copies == 0) {
    if (allowed == 0) {
      // Key was evicted from the ring but this node already used its z forwards.
      ring_.insert(key);
      return Drop{DropReason::kForwardLimit};
    }
    // Key stays out of the ring so a later copy can still be forwarded.
    return Drop{DropReason::kOverflow};
  }
  done += copies;
  ring_.insert(key);
  return Forward{copies};
}

void RelayNode::originate(const codec::Frame& f) {
  ring_.insert(key_of(f));
  forwarded_[key_of(f)] = policy_.rebroadcast_limit;
}

std::size_t RelayNode::forwards_of(FrameKey key) const {
  auto it = forwarded_.find(key);
  return it == forwarded_.end() ? 0 : it->second;
}

double flood_delivery_probability(std::size_t relays, double p_cancel) {
  if (!(p_cancel >= 0.0 && p_cancel <= 1.0)) {
    throw ConfigError("cancellation probability must lie in [0, 1]");
  }
  return 1.0 - std::pow(p_cancel, static_cast<double>(relays) + 1.0);
}

}  // namespace t2t::flood
