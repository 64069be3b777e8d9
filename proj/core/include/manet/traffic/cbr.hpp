#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "manet/sim/rng.hpp"
#include "manet/sim/scheduler.hpp"

namespace manet::traffic {

struct CbrConfig {
  std::size_t pair_count = 10;
  double rate = 4.0;  ///< packets/s per pair
  std::size_t packet_size = 350;  ///< bytes
  /// Upper bound of each pair's start offset; unset means 1/rate.
  std::optional<double> start_jitter;

  void validate() const;
  [[nodiscard]] double max_start_offset() const { return start_jitter.value_or(1.0 / rate); }
};

struct FlowPair {
  NodeId src = 0;
  NodeId dst = 0;
  friend bool operator==(const FlowPair&, const FlowPair&) = default;
};

/// Data unit of a CBR flow, tracked from origination to delivery.
struct Packet {
  std::uint64_t id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  SimTime created_at = 0.0;
  std::optional<SimTime> delivered_at;
  std::uint32_t hops = 0;
};

/// `pair_count` distinct ordered (src, dst) pairs with src != dst, drawn
/// uniformly without replacement.
std::vector<FlowPair> generate_pairs(std::size_t n_nodes, const CbrConfig& cfg,
                                     sim::RngStream& rng);

struct CbrSend {
  SimTime at = 0.0;
  std::size_t pair = 0;
  FlowPair flow;
};

/// Per-pair start offsets drawn uniformly on [0, max_start_offset).
std::vector<SimTime> draw_start_offsets(std::size_t pairs, const CbrConfig& cfg,
                                        sim::RngStream& rng);

/// Send instants offset + k/rate for k = 0..floor((duration - offset)*rate),
/// i.e. t == duration is included. Sorted by (time, pair).
std::vector<CbrSend> schedule_cbr(const std::vector<FlowPair>& pairs,
                                  const std::vector<SimTime>& offsets, const CbrConfig& cfg,
                                  SimTime duration);

}  // namespace manet::traffic
