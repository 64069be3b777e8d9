#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "manet/sim/rng.hpp"
#include "manet/sim/scheduler.hpp"

namespace manet::dsdv {

using SeqNo = std::uint32_t;

/// Hop metric of a route declared broken.
inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();
/// Largest hop count accepted in an advertisement.
inline constexpr std::uint32_t kMaxMetric = 0xFFFF;

struct RouteEntry {
  NodeId dest = 0;
  NodeId next_hop = 0;
  std::uint32_t metric = kUnreachable;
  SeqNo seq = 0;
  SimTime installed_at = 0.0;

  [[nodiscard]] bool reachable() const { return metric != kUnreachable; }
  friend bool operator==(const RouteEntry&, const RouteEntry&) = default;
};

struct RouteMetric {
  std::uint32_t metric = kUnreachable;
  SeqNo seq = 0;
};

/// Newer sequence number wins; on equal sequence numbers the shorter route wins.
constexpr bool route_preferred(RouteMetric candidate, RouteMetric incumbent) {
  return candidate.seq > incumbent.seq ||
         (candidate.seq == incumbent.seq && candidate.metric < incumbent.metric);
}

struct AdvertisedRoute {
  NodeId dest = 0;
  std::uint32_t metric = 0;
  SeqNo seq = 0;
  friend bool operator==(const AdvertisedRoute&, const AdvertisedRoute&) = default;
};

enum class UpdateKind : std::uint8_t { full_dump, incremental };

struct UpdateMessage {
  NodeId origin = 0;
  UpdateKind kind = UpdateKind::full_dump;
  std::vector<AdvertisedRoute> entries;

  static constexpr std::size_t kHeaderBytes = 20;
  static constexpr std::size_t kEntryBytes = 12;

  /// On-air size; control traffic competes with data for the link.
  [[nodiscard]] std::size_t size_bytes() const {
    return kHeaderBytes + kEntryBytes * entries.size();
  }
};

struct DsdvConfig {
  double periodic_interval = 15.0;
  double jitter = 1.0;  ///< uniform [0, jitter] added to each periodic interval
  std::size_t pending_packet_buffer = 64;
  double pending_timeout = 8.0;
  std::uint32_t ttl = 32;  ///< hop limit for data packets

  void validate() const;
};

/// Delay until a node's next periodic full dump.
SimTime next_periodic_delay(const DsdvConfig& cfg, sim::RngStream& rng);

/// A table mutation that broke the parity or monotonicity rules.
struct InvariantViolation {
  NodeId owner = 0;
  NodeId dest = 0;
  SeqNo old_seq = 0;
  SeqNo new_seq = 0;
  std::string what;
};

struct LinkBreak {
  std::vector<NodeId> invalidated;
  UpdateMessage update;  ///< incremental; empty entries if nothing was invalidated
};

/// Per-node DSDV routing table.
///
/// Sequence numbers originated by a destination are even; a node that sees
/// a route break bumps the stored number to the next odd value and marks it
/// unreachable. Every mutation is checked against those parity rules and
/// against per-destination monotonicity; violations are recorded, not thrown,
/// so fuzz runs can count them.
class RoutingTable {
 public:
  explicit RoutingTable(NodeId owner, SimTime now = 0.0);

  [[nodiscard]] NodeId owner() const { return owner_; }
  [[nodiscard]] SeqNo own_seq() const { return entries_[owner_].seq; }

  [[nodiscard]] const RouteEntry* find(NodeId dest) const;
  /// Next hop of a reachable route, if any.
  [[nodiscard]] std::optional<NodeId> next_hop(NodeId dest) const;
  /// Number of known destinations (including self).
  [[nodiscard]] std::size_t size() const { return known_count_; }
  /// Known entries in ascending destination order.
  [[nodiscard]] std::vector<RouteEntry> entries() const;

  /// Applies a neighbour's advertisement; returns the destinations whose
  /// entry changed, ascending.
  std::vector<NodeId> handle_update(NodeId from, const UpdateMessage& msg, SimTime now);

  /// Bumps the own sequence number by 2 and returns a full dump.
  UpdateMessage periodic_advertise(SimTime now);

  /// Invalidates every reachable route through `neighbor`.
  LinkBreak link_broken(NodeId neighbor, SimTime now);

  [[nodiscard]] UpdateMessage full_dump() const;
  [[nodiscard]] UpdateMessage incremental(std::span<const NodeId> dests) const;

  /// Direct installation for scripted scenarios; subject to the same checks.
  void install(const RouteEntry& entry);

  [[nodiscard]] std::uint64_t malformed() const { return malformed_; }
  [[nodiscard]] std::uint64_t mutations() const { return mutations_; }
  [[nodiscard]] const std::vector<InvariantViolation>& violations() const { return violations_; }

  /// `node<TAB>dest<TAB>next_hop<TAB>metric<TAB>seq` per known entry;
  /// unreachable metrics print as "inf".
  void dump(std::ostream& out) const;

 private:
  void check_and_store(const RouteEntry& e);

  NodeId owner_;
  std::vector<RouteEntry> entries_;
  std::vector<bool> known_;
  std::size_t known_count_ = 0;
  std::uint64_t malformed_ = 0;
  std::uint64_t mutations_ = 0;
  std::vector<InvariantViolation> violations_;
};

}  // namespace manet::dsdv
