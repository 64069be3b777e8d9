#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "manet/dsdv/forwarding.hpp"
#include "manet/dsdv/routing_table.hpp"
#include "manet/metrics/metrics.hpp"
#include "manet/mobility/trace.hpp"
#include "manet/radio/radio.hpp"
#include "manet/sim/rng.hpp"
#include "manet/sim/scheduler.hpp"
#include "manet/traffic/cbr.hpp"

namespace manet::harness {

/// One simulated network: scheduler, shared radio, a DSDV table and pending
/// buffer per node, and the packet ledger.
class Network {
 public:
  Network(const mobility::MobilityTrace& trace, radio::RadioConfig radio_cfg,
          dsdv::DsdvConfig dsdv_cfg, std::uint64_t seed);
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  /// Schedules every node's first periodic full dump at U[0, jitter].
  void start_protocol();
  void add_traffic(const std::vector<traffic::CbrSend>& sends, std::size_t packet_size);
  /// Writes every table at each of `times` (those within the run).
  void schedule_table_dumps(const std::vector<SimTime>& times, std::ostream& out);

  sim::RunStats run(SimTime until);

  sim::Scheduler& scheduler() { return scheduler_; }
  radio::Radio& radio() { return radio_; }
  metrics::PacketLedger& ledger() { return ledger_; }
  [[nodiscard]] const dsdv::RoutingTable& table(NodeId node) const { return tables_.at(node); }
  [[nodiscard]] std::size_t node_count() const { return tables_.size(); }
  [[nodiscard]] std::size_t buffered(NodeId node) const { return pending_.at(node).size(); }
  [[nodiscard]] std::uint64_t invariant_violations() const;
  [[nodiscard]] std::uint64_t control_frames_lost() const { return control_lost_; }

 private:
  void periodic_tick(NodeId node);
  void broadcast(dsdv::UpdateMessage msg);
  void on_frame(const radio::Frame& frame, std::span<const NodeId> receivers);
  void note_changes(NodeId node, const std::vector<NodeId>& changed);
  void send_triggered(NodeId node);
  void route(NodeId node, std::uint64_t packet_id);
  void buffer(NodeId node, std::uint64_t packet_id);
  void release_pending(NodeId node, NodeId dest);

  dsdv::DsdvConfig dsdv_cfg_;
  sim::Scheduler scheduler_;
  radio::Radio radio_;
  sim::RngStream jitter_;
  std::vector<dsdv::RoutingTable> tables_;
  std::vector<dsdv::PendingBuffer> pending_;
  std::unordered_map<std::uint64_t, sim::EventHandle> timeouts_;
  std::vector<std::vector<NodeId>> dirty_;
  std::vector<bool> triggered_pending_;
  std::unordered_map<std::uint64_t, dsdv::UpdateMessage> in_air_;
  std::uint64_t next_message_ = 0;
  std::uint64_t control_lost_ = 0;
  std::size_t packet_size_ = 0;
  metrics::PacketLedger ledger_;
};

}  // namespace manet::harness
