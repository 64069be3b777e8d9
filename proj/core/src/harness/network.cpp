#include "manet/harness/network.hpp"

#include <algorithm>
#include <ostream>

namespace manet::harness {

using sim::EventKind;

Network::Network(const mobility::MobilityTrace& trace, radio::RadioConfig radio_cfg,
                 dsdv::DsdvConfig dsdv_cfg, std::uint64_t seed)
    : dsdv_cfg_(dsdv_cfg),
      radio_(radio_cfg, trace, scheduler_,
             [this](const radio::Frame& f, std::span<const NodeId> r) { on_frame(f, r); }),
      jitter_(seed, sim::StreamId::protocol_jitter),
      dirty_(trace.node_count()),
      triggered_pending_(trace.node_count(), false) {
  dsdv_cfg_.validate();
  tables_.reserve(trace.node_count());
  pending_.reserve(trace.node_count());
  for (NodeId i = 0; i < trace.node_count(); ++i) {
    tables_.emplace_back(i, 0.0);
    pending_.emplace_back(dsdv_cfg_.pending_packet_buffer);
  }
}

void Network::start_protocol() {
  for (NodeId i = 0; i < tables_.size(); ++i) {
    const SimTime first = jitter_.uniform() * dsdv_cfg_.jitter;
    scheduler_.schedule(first, i, EventKind::periodic_advertisement, [this, i] { periodic_tick(i); });
  }
}

void Network::add_traffic(const std::vector<traffic::CbrSend>& sends, std::size_t packet_size) {
  for (const auto& s : sends) {
    const NodeId src = s.flow.src;
    const NodeId dst = s.flow.dst;
    scheduler_.schedule(s.at, src, EventKind::packet_send, [this, src, dst] {
      route(src, ledger_.originate(src, dst, scheduler_.now()));
    });
  }
  packet_size_ = packet_size;
}

void Network::schedule_table_dumps(const std::vector<SimTime>& times, std::ostream& out) {
  for (SimTime t : times) {
    scheduler_.schedule(t, kGlobalTarget, EventKind::metric_sample, [this, &out, t] {
      out << "# t=" << t << '\n';
      for (const auto& table : tables_) table.dump(out);
    });
  }
}

sim::RunStats Network::run(SimTime until) { return scheduler_.run(until); }

std::uint64_t Network::invariant_violations() const {
  std::uint64_t n = 0;
  for (const auto& t : tables_) n += t.violations().size();
  return n;
}

void Network::periodic_tick(NodeId node) {
  broadcast(tables_[node].periodic_advertise(scheduler_.now()));
  // The full dump supersedes any incremental still waiting at this instant.
  dirty_[node].clear();
  scheduler_.schedule_in(dsdv::next_periodic_delay(dsdv_cfg_, jitter_), node,
                         EventKind::periodic_advertisement, [this, node] { periodic_tick(node); });
}

void Network::broadcast(dsdv::UpdateMessage msg) {
  const std::uint64_t slot = next_message_++;
  radio::Frame frame{radio::FrameKind::control, msg.origin, radio::kBroadcast, msg.size_bytes(), slot};
  in_air_.emplace(slot, std::move(msg));
  if (radio_.transmit(frame).status != radio::TransmitStatus::queued) {
    in_air_.erase(slot);
    ++control_lost_;
  }
}

void Network::on_frame(const radio::Frame& frame, std::span<const NodeId> receivers) {
  if (frame.kind == radio::FrameKind::data) {
    route(frame.dst, frame.tag);
    return;
  }
  auto it = in_air_.find(frame.tag);
  const dsdv::UpdateMessage msg = std::move(it->second);
  in_air_.erase(it);
  const SimTime now = scheduler_.now();
  for (NodeId r : receivers) {
    const auto changed = tables_[r].handle_update(msg.origin, msg, now);
    if (changed.empty()) continue;
    note_changes(r, changed);
    for (NodeId d : changed) {
      if (tables_[r].next_hop(d)) release_pending(r, d);
    }
  }
}

void Network::note_changes(NodeId node, const std::vector<NodeId>& changed) {
  auto& dirty = dirty_[node];
  dirty.insert(dirty.end(), changed.begin(), changed.end());
  if (triggered_pending_[node]) return;
  triggered_pending_[node] = true;
  scheduler_.schedule(scheduler_.now(), node, EventKind::triggered_advertisement,
                      [this, node] { send_triggered(node); });
}

void Network::send_triggered(NodeId node) {
  triggered_pending_[node] = false;
  auto& dirty = dirty_[node];
  if (dirty.empty()) return;
  std::sort(dirty.begin(), dirty.end());
  dirty.erase(std::unique(dirty.begin(), dirty.end()), dirty.end());
  auto msg = tables_[node].incremental(dirty);
  dirty.clear();
  if (!msg.entries.empty()) broadcast(std::move(msg));
}

void Network::route(NodeId node, std::uint64_t packet_id) {
  traffic::Packet& p = ledger_.packet(packet_id);
  const SimTime now = scheduler_.now();
  if (p.dst == node) {
    ledger_.deliver(packet_id, now);
    return;
  }
  while (true) {
    const auto decision = dsdv::forward(tables_[node], p.dst, p.hops, dsdv_cfg_);
    switch (decision.action) {
      case dsdv::ForwardAction::drop_ttl:
        ledger_.drop(packet_id, metrics::PacketFate::dropped_ttl, now);
        return;
      case dsdv::ForwardAction::buffer:
        buffer(node, packet_id);
        return;
      case dsdv::ForwardAction::transmit:
        break;
    }
    radio::Frame frame{radio::FrameKind::data, node, decision.next_hop, packet_size_, packet_id};
    const auto result = radio_.transmit(frame);
    switch (result.status) {
      case radio::TransmitStatus::queued:
        ++p.hops;
        return;
      case radio::TransmitStatus::dropped_queue_full:
        ledger_.drop(packet_id, metrics::PacketFate::dropped_queue, now);
        return;
      case radio::TransmitStatus::dropped_no_link: {
        auto lb = tables_[node].link_broken(decision.next_hop, now);
        if (!lb.update.entries.empty()) broadcast(std::move(lb.update));
        break;  // re-route; the broken entry now sends the packet to the buffer
      }
    }
  }
}

void Network::buffer(NodeId node, std::uint64_t packet_id) {
  const traffic::Packet& p = ledger_.packet(packet_id);
  const SimTime now = scheduler_.now();
  if (!pending_[node].push({packet_id, p.dst, now})) {
    ledger_.drop(packet_id, metrics::PacketFate::dropped_no_route, now);
    return;
  }
  timeouts_[packet_id] = scheduler_.schedule_in(
      dsdv_cfg_.pending_timeout, node, EventKind::packet_timeout, [this, node, packet_id] {
        timeouts_.erase(packet_id);
        if (pending_[node].remove(packet_id)) {
          ledger_.drop(packet_id, metrics::PacketFate::dropped_no_route, scheduler_.now());
        }
      });
}

void Network::release_pending(NodeId node, NodeId dest) {
  if (!pending_[node].holds_for(dest)) return;
  for (const auto& pp : pending_[node].release(dest)) {
    if (auto it = timeouts_.find(pp.id); it != timeouts_.end()) {
      scheduler_.cancel(it->second);
      timeouts_.erase(it);
    }
    route(node, pp.id);
  }
}

}  // namespace manet::harness
