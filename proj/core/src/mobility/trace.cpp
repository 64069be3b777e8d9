#include "manet/mobility/trace.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace manet::mobility {

MobilityTrace::MobilityTrace(Field field, SimTime duration, std::vector<std::vector<Waypoint>> nodes)
    : field_(field), duration_(duration), nodes_(std::move(nodes)) {
  field_.validate();
  if (!(duration_ > 0.0)) throw std::invalid_argument("MobilityTrace: duration must be > 0");
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    const auto& wps = nodes_[n];
    const std::string who = "MobilityTrace: node " + std::to_string(n);
    if (wps.empty()) throw std::invalid_argument(who + " has no waypoints");
    if (wps.front().time != 0.0) throw std::invalid_argument(who + " does not start at t=0");
    for (std::size_t i = 0; i < wps.size(); ++i) {
      if (!field_.contains(wps[i].pos)) throw std::invalid_argument(who + " leaves the field");
      if (!(wps[i].speed >= 0.0)) throw std::invalid_argument(who + " has a negative speed");
      if (wps[i].time > duration_) throw std::invalid_argument(who + " runs past the duration");
      if (i > 0 && !(wps[i].time > wps[i - 1].time)) {
        throw std::invalid_argument(who + " has non-increasing waypoint times");
      }
    }
  }
}

std::span<const Waypoint> MobilityTrace::waypoints(NodeId node) const {
  if (node >= nodes_.size()) throw std::out_of_range("MobilityTrace: unknown node");
  return nodes_[node];
}

Position interpolate(std::span<const Waypoint> wps, SimTime t) {
  auto it = std::upper_bound(wps.begin(), wps.end(), t,
                             [](SimTime v, const Waypoint& w) { return v < w.time; });
  // it points at the first waypoint strictly after t.
  if (it == wps.end()) return wps.back().pos;
  const Waypoint& b = *it;
  const Waypoint& a = *(it - 1);
  if (t == a.time) return a.pos;
  const double f = (t - a.time) / (b.time - a.time);
  return {a.pos.x + (b.pos.x - a.pos.x) * f, a.pos.y + (b.pos.y - a.pos.y) * f};
}

Position MobilityTrace::position_at(NodeId node, SimTime t) const {
  if (node >= nodes_.size()) throw std::out_of_range("MobilityTrace: unknown node");
  if (!(t >= 0.0) || t > duration_) {
    throw std::out_of_range("MobilityTrace: t=" + std::to_string(t) + " outside [0, " +
                            std::to_string(duration_) + "]");
  }
  return interpolate(nodes_[node], t);
}

TraceCursor::TraceCursor(const MobilityTrace& trace)
    : trace_(&trace), index_(trace.node_count(), 0) {}

Position TraceCursor::position(NodeId node, SimTime t) {
  auto wps = trace_->waypoints(node);
  std::size_t& i = index_[node];
  if (i < wps.size() && wps[i].time > t) i = 0;  // went backwards; restart
  while (i + 1 < wps.size() && wps[i + 1].time <= t) ++i;
  if (i + 1 == wps.size() || wps[i].time == t) return wps[i].pos;
  const Waypoint& a = wps[i];
  const Waypoint& b = wps[i + 1];
  const double f = (t - a.time) / (b.time - a.time);
  return {a.pos.x + (b.pos.x - a.pos.x) * f, a.pos.y + (b.pos.y - a.pos.y) * f};
}

TraceBuilder::TraceBuilder(Field field, SimTime duration, std::size_t node_count)
    : field_(field), duration_(duration), nodes_(node_count) {}

void TraceBuilder::start(NodeId node, Position p) {
  nodes_.at(node).assign(1, Waypoint{0.0, field_.clamp(p), 0.0});
}

void TraceBuilder::move_to(NodeId node, SimTime t, Position p) {
  const Waypoint& last = nodes_.at(node).back();
  if (!(t > last.time)) return;
  p = field_.clamp(p);
  move_to(node, t, p, distance(last.pos, p) / (t - last.time));
}

void TraceBuilder::move_to(NodeId node, SimTime t, Position p, double speed) {
  auto& wps = nodes_.at(node);
  if (!(t > wps.back().time)) return;
  wps.push_back(Waypoint{t, field_.clamp(p), speed});
}

void TraceBuilder::hold_until(NodeId node, SimTime t) {
  auto& wps = nodes_.at(node);
  if (!(t > wps.back().time)) return;
  wps.push_back(Waypoint{t, wps.back().pos, 0.0});
}

MobilityTrace make_trace(Field field, SimTime duration, std::vector<std::vector<Waypoint>> nodes) {
  for (auto& wps : nodes) {
    if (wps.empty()) throw std::invalid_argument("make_trace: node without waypoints");
    auto past = std::find_if(wps.begin(), wps.end(),
                             [&](const Waypoint& w) { return w.time > duration; });
    if (past != wps.end() && past != wps.begin()) {
      const Waypoint& prev = *(past - 1);
      Waypoint cut{duration, interpolate(std::span<const Waypoint>(&prev, 2), duration), past->speed};
      const bool keep = prev.time < duration;
      wps.erase(past, wps.end());
      if (keep) wps.push_back(cut);
    }
  }
  return MobilityTrace(field, duration, std::move(nodes));
}

MobilityTrace TraceBuilder::finish() && {
  return make_trace(field_, duration_, std::move(nodes_));
}

}  // namespace manet::mobility
