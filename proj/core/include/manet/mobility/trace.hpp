#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "manet/mobility/geometry.hpp"
#include "manet/sim/scheduler.hpp"

namespace manet::mobility {

/// A point the node occupies at `time`. `speed` is the speed of the leg that
/// ends here (0 for the initial point and for the end of a pause).
struct Waypoint {
  SimTime time = 0.0;
  Position pos;
  double speed = 0.0;
  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

/// Piecewise-linear movement schedule for every node over [0, duration].
///
/// Invariants (checked on construction): every node has a waypoint at t=0,
/// waypoint times strictly increase and never exceed the duration, and every
/// waypoint lies inside the field. After its last waypoint a node stays put.
class MobilityTrace {
 public:
  MobilityTrace() = default;
  MobilityTrace(Field field, SimTime duration, std::vector<std::vector<Waypoint>> nodes);

  [[nodiscard]] const Field& field() const { return field_; }
  [[nodiscard]] SimTime duration() const { return duration_; }
  [[nodiscard]] std::size_t node_count() const { return nodes_.size(); }
  [[nodiscard]] std::span<const Waypoint> waypoints(NodeId node) const;

  /// Linear interpolation between the surrounding waypoints. Throws
  /// std::out_of_range for t outside [0, duration] or an unknown node.
  [[nodiscard]] Position position_at(NodeId node, SimTime t) const;

  friend bool operator==(const MobilityTrace&, const MobilityTrace&) = default;

 private:
  Field field_;
  SimTime duration_ = 0.0;
  std::vector<std::vector<Waypoint>> nodes_;
};

inline Position trace_position(const MobilityTrace& trace, NodeId node, SimTime t) {
  return trace.position_at(node, t);
}

/// Cuts each node's waypoints at `duration` (interpolating the leg that
/// straddles it) and builds a validated trace.
MobilityTrace make_trace(Field field, SimTime duration, std::vector<std::vector<Waypoint>> nodes);

/// Interpolates along one node's waypoint list; `t` must be >= the first time.
Position interpolate(std::span<const Waypoint> wps, SimTime t);

/// Forward-only position lookup for monotonically increasing query times.
/// Amortised O(1) per query instead of a binary search.
class TraceCursor {
 public:
  explicit TraceCursor(const MobilityTrace& trace);
  Position position(NodeId node, SimTime t);

 private:
  const MobilityTrace* trace_;
  std::vector<std::size_t> index_;
};

/// Incremental construction helper used by the generators.
class TraceBuilder {
 public:
  TraceBuilder(Field field, SimTime duration, std::size_t node_count);

  void start(NodeId node, Position p);
  /// Straight leg to `p` arriving at `t`; speed derived from the leg.
  void move_to(NodeId node, SimTime t, Position p);
  /// Straight leg with an explicitly recorded speed.
  void move_to(NodeId node, SimTime t, Position p, double speed);
  /// Stay at the current position until `t`.
  void hold_until(NodeId node, SimTime t);

  [[nodiscard]] SimTime last_time(NodeId node) const { return nodes_[node].back().time; }
  [[nodiscard]] Position last_position(NodeId node) const { return nodes_[node].back().pos; }

  /// Cuts every node at the duration (interpolating the straddling leg) and
  /// validates the result.
  [[nodiscard]] MobilityTrace finish() &&;

 private:
  Field field_;
  SimTime duration_;
  std::vector<std::vector<Waypoint>> nodes_;
};

}  // namespace manet::mobility
