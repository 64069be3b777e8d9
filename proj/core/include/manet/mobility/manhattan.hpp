#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "manet/mobility/trace.hpp"
#include "manet/sim/rng.hpp"

namespace manet::mobility {

struct ManhattanConfig {
  std::size_t horizontal_streets = 6;
  std::size_t vertical_streets = 6;
  double v_max = 20.0;
  double min_headway = 5.0;  ///< car-following safety gap, metres
  double update_interval = 1.0;
  /// Desired-speed random walk step bound, as a fraction of v_max per second.
  double accel_ratio = 0.5;

  void validate() const;
};

enum class Turn { straight, left, right };

/// Straight with p=0.5, left and right with p=0.25 each.
Turn manhattan_turn(sim::RngStream& rng);

enum class Axis { horizontal, vertical };

/// A node's place on the street grid. Horizontal streets run along x at a
/// fixed y, vertical streets along y at a fixed x. `heading` is +1 or -1
/// along the street axis; each direction is its own lane.
struct LaneState {
  Axis axis = Axis::horizontal;
  std::size_t street = 0;
  int heading = 1;
  double coord = 0.0;    ///< position along the street
  double desired = 0.0;  ///< temporally correlated desired speed
  double speed = 0.0;    ///< speed actually used in the last slot
  bool pinned = false;   ///< desired speed held fixed (scenario scripting, tests)
};

/// Slot-by-slot stepping of the Manhattan model. Exposed so that scenarios
/// (and tests) can script initial lane positions and fixed speeds.
class ManhattanWalker {
 public:
  ManhattanWalker(const Field& field, const ManhattanConfig& cfg, std::vector<LaneState> nodes);

  static std::vector<LaneState> random_placement(const Field& field, const ManhattanConfig& cfg,
                                                 std::size_t n, sim::RngStream& rng);

  /// Advances every node by one update interval. If a builder is given, the
  /// intersections crossed and the slot end are appended as waypoints.
  void step(sim::RngStream& rng, TraceBuilder* builder = nullptr);

  void pin_desired_speed(NodeId node, double speed);

  [[nodiscard]] SimTime now() const { return now_; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] const LaneState& state(NodeId node) const { return nodes_.at(node); }
  [[nodiscard]] Position position(NodeId node) const { return position_of(nodes_.at(node)); }
  [[nodiscard]] double street_position(Axis axis, std::size_t street) const;

  /// The nearest node ahead in the same lane within interaction range.
  [[nodiscard]] std::optional<NodeId> predecessor(NodeId node) const;

 private:
  [[nodiscard]] Position position_of(const LaneState& s) const;
  [[nodiscard]] double street_length(Axis axis) const;
  [[nodiscard]] const std::vector<double>& crossings(Axis axis) const;
  void travel(NodeId node, double path, sim::RngStream& rng, TraceBuilder* builder);

  Field field_;
  ManhattanConfig cfg_;
  std::vector<double> ys_;  ///< horizontal street positions
  std::vector<double> xs_;  ///< vertical street positions
  std::vector<LaneState> nodes_;
  SimTime now_ = 0.0;
};

MobilityTrace manhattan_generate(const Field& field, const ManhattanConfig& cfg, std::size_t n,
                                 SimTime duration, sim::RngStream& rng);

}  // namespace manet::mobility
