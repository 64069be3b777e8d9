#include "manet/radio/radio.hpp"

#include <algorithm>
#include <stdexcept>

namespace manet::radio {

void RadioConfig::validate() const {
  if (!(range > 0.0)) throw std::invalid_argument("RadioConfig: range must be > 0");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("RadioConfig: bandwidth must be > 0");
  if (queue_capacity < 1) throw std::invalid_argument("RadioConfig: queue_capacity must be >= 1");
  if (!(processing_delay >= 0.0)) throw std::invalid_argument("RadioConfig: processing_delay < 0");
}

Adjacency neighbors(std::span<const Position> positions, const RadioConfig& cfg) {
  Adjacency adj(positions.size());
  for (NodeId i = 0; i < positions.size(); ++i) {
    for (NodeId j = i + 1; j < positions.size(); ++j) {
      if (in_range(positions[i], positions[j], cfg.range)) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

std::optional<SimTime> TransmitQueue::admit(SimTime at, SimTime serialization,
                                            std::size_t capacity) {
  while (!completions_.empty() && completions_.front() <= at) completions_.pop_front();
  // completions_.front(), if any, is the frame in service.
  if (!completions_.empty() && completions_.size() - 1 >= capacity) return std::nullopt;
  const SimTime start = completions_.empty() ? at : completions_.back();
  completions_.push_back(start + serialization);
  return completions_.back();
}

std::size_t TransmitQueue::occupancy(SimTime at) {
  while (!completions_.empty() && completions_.front() <= at) completions_.pop_front();
  return completions_.size();
}

Radio::Radio(RadioConfig cfg, const mobility::MobilityTrace& trace, sim::Scheduler& scheduler,
             Receiver on_receive)
    : cfg_(cfg),
      scheduler_(&scheduler),
      on_receive_(std::move(on_receive)),
      cursor_(trace),
      node_count_(trace.node_count()),
      positions_(trace.node_count()),
      queues_(trace.node_count()) {
  cfg_.validate();
}

std::span<const Position> Radio::positions() {
  const SimTime now = scheduler_->now();
  if (now != positions_at_) {
    for (NodeId i = 0; i < node_count_; ++i) positions_[i] = cursor_.position(i, now);
    positions_at_ = now;
  }
  return positions_;
}

bool Radio::adjacent(NodeId a, NodeId b) {
  if (a == b) return false;
  auto pos = positions();
  return in_range(pos[a], pos[b], cfg_.range);
}

std::vector<NodeId> Radio::neighbors_of(NodeId node) {
  auto pos = positions();
  std::vector<NodeId> out;
  const double r2 = cfg_.range * cfg_.range;
  for (NodeId j = 0; j < node_count_; ++j) {
    if (j != node && mobility::distance_squared(pos[node], pos[j]) <= r2) out.push_back(j);
  }
  return out;
}

TransmitResult Radio::transmit(const Frame& frame) {
  if (frame.size == 0) throw std::invalid_argument("Radio::transmit: empty frame");
  if (frame.src >= node_count_) throw std::out_of_range("Radio::transmit: unknown sender");
  ++counters_.transmitted;
  const SimTime at = scheduler_->now();

  std::vector<NodeId> receivers;
  if (frame.dst == kBroadcast) {
    receivers = neighbors_of(frame.src);
  } else {
    if (frame.dst >= node_count_ || !adjacent(frame.src, frame.dst)) {
      ++counters_.dropped_no_link;
      return {TransmitStatus::dropped_no_link, at};
    }
    receivers.push_back(frame.dst);
  }

  const auto done = queues_[frame.src].admit(at, serialization_time(frame.size), cfg_.queue_capacity);
  if (!done) {
    ++counters_.dropped_queue_full;
    return {TransmitStatus::dropped_queue_full, at};
  }
  const SimTime delivery = *done + cfg_.processing_delay;
  scheduler_->schedule(delivery, frame.dst == kBroadcast ? frame.src : frame.dst,
                       sim::EventKind::packet_receive,
                       [this, frame, receivers = std::move(receivers)] {
                         ++counters_.delivered;
                         on_receive_(frame, receivers);
                       });
  return {TransmitStatus::queued, delivery};
}

}  // namespace manet::radio
