#include "manet/dsdv/routing_table.hpp"

#include <ostream>
#include <stdexcept>

namespace manet::dsdv {

void DsdvConfig::validate() const {
  if (!(periodic_interval > 0.0)) throw std::invalid_argument("DsdvConfig: periodic_interval <= 0");
  if (!(jitter >= 0.0 && jitter < periodic_interval)) {
    throw std::invalid_argument("DsdvConfig: jitter must lie in [0, periodic_interval)");
  }
  if (!(pending_timeout > 0.0)) throw std::invalid_argument("DsdvConfig: pending_timeout <= 0");
  if (ttl == 0) throw std::invalid_argument("DsdvConfig: ttl must be positive");
}

SimTime next_periodic_delay(const DsdvConfig& cfg, sim::RngStream& rng) {
  return cfg.periodic_interval + rng.uniform() * cfg.jitter;
}

RoutingTable::RoutingTable(NodeId owner, SimTime now) : owner_(owner) {
  entries_.resize(static_cast<std::size_t>(owner) + 1);
  known_.resize(entries_.size(), false);
  check_and_store(RouteEntry{owner, owner, 0, 0, now});
}

const RouteEntry* RoutingTable::find(NodeId dest) const {
  if (dest >= entries_.size() || !known_[dest]) return nullptr;
  return &entries_[dest];
}

std::optional<NodeId> RoutingTable::next_hop(NodeId dest) const {
  const RouteEntry* e = find(dest);
  if (e == nullptr || !e->reachable()) return std::nullopt;
  return e->next_hop;
}

std::vector<RouteEntry> RoutingTable::entries() const {
  std::vector<RouteEntry> out;
  out.reserve(known_count_);
  for (std::size_t d = 0; d < entries_.size(); ++d) {
    if (known_[d]) out.push_back(entries_[d]);
  }
  return out;
}

void RoutingTable::check_and_store(const RouteEntry& e) {
  ++mutations_;
  auto violation = [&](SeqNo old_seq, const char* what) {
    violations_.push_back(InvariantViolation{owner_, e.dest, old_seq, e.seq, what});
  };
  const RouteEntry* old = find(e.dest);
  const SeqNo old_seq = old != nullptr ? old->seq : 0;
  if (old != nullptr && e.seq < old->seq) violation(old_seq, "sequence number decreased");
  if (e.reachable() && e.seq % 2 != 0) violation(old_seq, "reachable route with odd sequence number");
  if (!e.reachable() && e.seq % 2 == 0) violation(old_seq, "broken route with even sequence number");
  if ((e.metric == 0) != (e.dest == owner_)) violation(old_seq, "metric 0 for a foreign destination");
  if (e.dest == owner_ && e.next_hop != owner_) violation(old_seq, "self entry not via self");

  if (e.dest >= entries_.size()) {
    entries_.resize(static_cast<std::size_t>(e.dest) + 1);
    known_.resize(entries_.size(), false);
  }
  if (!known_[e.dest]) {
    known_[e.dest] = true;
    ++known_count_;
  }
  entries_[e.dest] = e;
}

void RoutingTable::install(const RouteEntry& entry) { check_and_store(entry); }

std::vector<NodeId> RoutingTable::handle_update(NodeId from, const UpdateMessage& msg,
                                                SimTime now) {
  std::vector<NodeId> changed;
  for (const AdvertisedRoute& adv : msg.entries) {
    const bool broken = adv.metric == kUnreachable;
    const bool well_formed =
        (broken ? adv.seq % 2 == 1 : adv.seq % 2 == 0 && adv.metric <= kMaxMetric) &&
        ((adv.metric == 0) == (adv.dest == msg.origin));
    if (!well_formed) {
      ++malformed_;
      continue;
    }
    if (adv.dest == owner_) continue;

    RouteEntry candidate{adv.dest, from, broken ? kUnreachable : adv.metric + 1, adv.seq, now};
    const RouteEntry* incumbent = find(adv.dest);
    if (incumbent != nullptr) {
      if (!route_preferred({candidate.metric, candidate.seq}, {incumbent->metric, incumbent->seq})) {
        continue;
      }
    } else if (broken) {
      // Nothing to invalidate.
      continue;
    }
    check_and_store(candidate);
    changed.push_back(adv.dest);
  }
  return changed;
}

UpdateMessage RoutingTable::periodic_advertise(SimTime now) {
  RouteEntry self = entries_[owner_];
  self.seq += 2;
  self.installed_at = now;
  check_and_store(self);
  return full_dump();
}

LinkBreak RoutingTable::link_broken(NodeId neighbor, SimTime now) {
  LinkBreak out;
  for (std::size_t d = 0; d < entries_.size(); ++d) {
    if (!known_[d] || d == owner_) continue;
    const RouteEntry& e = entries_[d];
    if (!e.reachable() || e.next_hop != neighbor) continue;
    RouteEntry broken = e;
    broken.metric = kUnreachable;
    broken.seq = e.seq + 1;
    broken.installed_at = now;
    check_and_store(broken);
    out.invalidated.push_back(static_cast<NodeId>(d));
  }
  out.update = incremental(out.invalidated);
  return out;
}

UpdateMessage RoutingTable::full_dump() const {
  UpdateMessage msg{owner_, UpdateKind::full_dump, {}};
  msg.entries.reserve(known_count_);
  for (std::size_t d = 0; d < entries_.size(); ++d) {
    if (known_[d]) {
      const RouteEntry& e = entries_[d];
      msg.entries.push_back(AdvertisedRoute{e.dest, e.metric, e.seq});
    }
  }
  return msg;
}

UpdateMessage RoutingTable::incremental(std::span<const NodeId> dests) const {
  UpdateMessage msg{owner_, UpdateKind::incremental, {}};
  msg.entries.reserve(dests.size());
  for (NodeId d : dests) {
    if (const RouteEntry* e = find(d)) msg.entries.push_back(AdvertisedRoute{e->dest, e->metric, e->seq});
  }
  return msg;
}

void RoutingTable::dump(std::ostream& out) const {
  for (std::size_t d = 0; d < entries_.size(); ++d) {
    if (!known_[d]) continue;
    const RouteEntry& e = entries_[d];
    out << owner_ << '\t' << e.dest << '\t' << e.next_hop << '\t';
    if (e.reachable()) {
      out << e.metric;
    } else {
      out << "inf";
    }
    out << '\t' << e.seq << '\n';
  }
}

}  // namespace manet::dsdv
