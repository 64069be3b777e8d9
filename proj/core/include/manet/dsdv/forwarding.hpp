#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <vector>

#include "manet/dsdv/routing_table.hpp"

namespace manet::dsdv {

enum class ForwardAction { transmit, buffer, drop_ttl };

struct ForwardDecision {
  ForwardAction action = ForwardAction::buffer;
  NodeId next_hop = 0;  ///< meaningful for transmit only
};

/// Routing decision for a data packet held by the table's owner. `hops` is
/// the number of links the packet has already crossed.
ForwardDecision forward(const RoutingTable& table, NodeId dst, std::uint32_t hops,
                        const DsdvConfig& cfg);

struct PendingPacket {
  std::uint64_t id = 0;
  NodeId dst = 0;
  SimTime enqueued_at = 0.0;
};

/// Packets waiting at a node for a route to appear.
class PendingBuffer {
 public:
  explicit PendingBuffer(std::size_t capacity) : capacity_(capacity) {}

  /// False (and nothing stored) when the buffer is full.
  bool push(const PendingPacket& p);
  /// Removes and returns, oldest first, every packet addressed to `dst`.
  std::vector<PendingPacket> release(NodeId dst);
  /// Removes one packet; false if it is no longer buffered.
  bool remove(std::uint64_t id);

  [[nodiscard]] std::size_t size() const { return packets_.size(); }
  [[nodiscard]] bool holds_for(NodeId dst) const;

 private:
  std::size_t capacity_;
  std::deque<PendingPacket> packets_;
};

}  // namespace manet::dsdv
