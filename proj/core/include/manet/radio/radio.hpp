#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "manet/mobility/trace.hpp"
#include "manet/sim/scheduler.hpp"

namespace manet::radio {

using mobility::Position;

inline constexpr NodeId kBroadcast = kGlobalTarget;

/// Unit-disk connectivity and an ideal per-sender FIFO link.
struct RadioConfig {
  double range = 250.0;            ///< metres
  double bandwidth = 2'000'000.0;  ///< bits/s
  std::size_t queue_capacity = 50; ///< frames waiting behind the one in service
  double processing_delay = 0.001; ///< seconds added per hop

  void validate() const;
};

using Adjacency = std::vector<std::vector<NodeId>>;

/// Boundary inclusive: nodes exactly `range` apart are adjacent.
inline bool in_range(Position a, Position b, double range) {
  return mobility::distance_squared(a, b) <= range * range;
}

/// Adjacency lists (ascending ids) of the unit-disk graph.
Adjacency neighbors(std::span<const Position> positions, const RadioConfig& cfg);

enum class FrameKind : std::uint8_t { data, control };

struct Frame {
  FrameKind kind = FrameKind::data;
  NodeId src = 0;
  NodeId dst = kBroadcast;
  std::size_t size = 0;  ///< bytes
  /// Payload reference owned by the caller: packet id or message slot.
  std::uint64_t tag = 0;
};

enum class TransmitStatus { queued, dropped_no_link, dropped_queue_full };

struct TransmitResult {
  TransmitStatus status = TransmitStatus::queued;
  SimTime delivery_time = 0.0;
};

struct FrameCounters {
  std::uint64_t transmitted = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped_no_link = 0;
  std::uint64_t dropped_queue_full = 0;

  [[nodiscard]] std::uint64_t in_flight() const {
    return transmitted - delivered - dropped_no_link - dropped_queue_full;
  }
};

/// FIFO transmit queue of one sender. Frames are serialised back to back at
/// the link bandwidth; the frame at the head is in service.
class TransmitQueue {
 public:
  /// Returns the time serialisation of the new frame completes, or nothing
  /// if `capacity` frames are already waiting behind the one in service.
  std::optional<SimTime> admit(SimTime at, SimTime serialization, std::size_t capacity);
  [[nodiscard]] std::size_t occupancy(SimTime at);

 private:
  std::deque<SimTime> completions_;
};

/// The shared medium for one simulation run.
///
/// transmit() checks connectivity at the send instant, queues the frame on
/// the sender, and schedules one packet-receive event at
///   at + queueing + size*8/bandwidth + processing_delay
/// that hands the frame to its receiver(s): the unicast destination, or every
/// neighbour of the sender at send time for a broadcast.
class Radio {
 public:
  using Receiver = std::function<void(const Frame&, std::span<const NodeId> receivers)>;

  Radio(RadioConfig cfg, const mobility::MobilityTrace& trace, sim::Scheduler& scheduler,
        Receiver on_receive);

  TransmitResult transmit(const Frame& frame);

  [[nodiscard]] SimTime serialization_time(std::size_t bytes) const {
    return static_cast<double>(bytes) * 8.0 / cfg_.bandwidth;
  }
  [[nodiscard]] const RadioConfig& config() const { return cfg_; }
  [[nodiscard]] const FrameCounters& counters() const { return counters_; }

  /// Positions of all nodes at the current clock.
  std::span<const Position> positions();
  [[nodiscard]] bool adjacent(NodeId a, NodeId b);
  [[nodiscard]] std::vector<NodeId> neighbors_of(NodeId node);

 private:
  RadioConfig cfg_;
  sim::Scheduler* scheduler_;
  Receiver on_receive_;
  mobility::TraceCursor cursor_;
  std::size_t node_count_;
  std::vector<Position> positions_;
  SimTime positions_at_ = -1.0;
  std::vector<TransmitQueue> queues_;
  FrameCounters counters_;
};

}  // namespace manet::radio
