#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <variant>

#include "t2t/frame_codec.hpp"

namespace t2t::flood {

struct FrameKey {
  std::uint8_t sender_id = 0;
  std::uint8_t message_id = 0;

  friend auto operator<=>(const FrameKey&, const FrameKey&) = default;
};

inline FrameKey key_of(const codec::Frame& f) { return {f.sender_id, f.message_id}; }

/// FIFO set of the most recent `capacity` frame keys.
class DedupRing {
 public:
  static constexpr std::size_t kDefaultCapacity = 10;

  explicit DedupRing(std::size_t capacity = kDefaultCapacity);

  bool contains(FrameKey key) const;
  /// No-op for a key already present; otherwise evicts the oldest when full.
  void insert(FrameKey key);

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  const std::deque<FrameKey>& entries() const { return entries_; }

 private:
  std::size_t capacity_;
  std::deque<FrameKey> entries_;
};

struct RelayPolicy {
  std::size_t rebroadcast_limit = 1;  // z

  void validate() const;
};

enum class DropReason { kDuplicate, kOverflow, kForwardLimit };

struct Deliver {};
struct Forward {
  std::size_t copies = 1;
};
struct Drop {
  DropReason reason = DropReason::kDuplicate;
};
using RelayDecision = std::variant<Deliver, Forward, Drop>;

const char* to_string(DropReason r);

/// Link-layer state of one tag: freshness ring plus forwarding bookkeeping.
class RelayNode {
 public:
  RelayNode(std::uint8_t id, RelayPolicy policy = {},
            std::size_t ring_capacity = DedupRing::kDefaultCapacity);

  std::uint8_t id() const { return id_; }
  const DedupRing& ring() const { return ring_; }

  /// Decision for a CRC-valid frame. `tx_free_slots` is the free space in the
  /// node's transmit buffer; a forward queues min(z, free) copies.
  RelayDecision handle_frame(const codec::Frame& f, std::size_t tx_free_slots);

  /// Marks a locally originated frame as seen so echoes are dropped.
  void originate(const codec::Frame& f);

  std::size_t forwards_of(FrameKey key) const;

 private:
  std::uint8_t id_;
  RelayPolicy policy_;
  DedupRing ring_;
  std::map<FrameKey, std::size_t> forwarded_;
};

/// Parallel-relay abstraction: direct path plus `relays` independent relays,
/// each route lost with probability `p_cancel`.
double flood_delivery_probability(std::size_t relays, double p_cancel);

}  // namespace t2t::flood
