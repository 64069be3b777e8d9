#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

#include "manet/mobility/trace.hpp"
#include "manet/sim/rng.hpp"

namespace manet::mobility {

/// Reference Point Group Mobility parameters.
struct RpgmConfig {
  std::size_t group_count = 10;
  double sdr = 0.1;  ///< speed deviation ratio, [0, 1]
  double adr = 0.1;  ///< angle deviation ratio, [0, 1]
  double max_speed = 20.0;
  double max_angle = std::numbers::pi;
  double member_spread = 50.0;  ///< initial placement radius around the reference point
  double leader_pause = 10.0;   ///< pause of the reference point's waypoint path
  double update_interval = 1.0;

  void validate() const;
};

/// Member velocity = leader velocity deviated by `speed_dev * sdr * max_speed`
/// and `angle_dev * adr * max_angle`; deviations are in [-1, 1]. Speed is
/// clamped to [0, max_speed], direction wrapped into [0, 2pi).
Velocity rpgm_member_velocity(Velocity leader, const RpgmConfig& cfg, double speed_dev,
                              double angle_dev);

/// Same, drawing both deviations uniformly from [-1, 1].
Velocity rpgm_member_velocity(Velocity leader, const RpgmConfig& cfg, sim::RngStream& rng);

struct RpgmTrace {
  MobilityTrace nodes;
  /// One node per group: the logical reference point (group leader) path.
  MobilityTrace references;
  std::vector<std::size_t> group_of;
};

/// Nodes are assigned to groups round-robin (node i -> group i % group_count).
/// Each group's reference point follows a Random Waypoint path; at every
/// update instant each member's velocity is derived from the reference
/// point's velocity over that interval.
RpgmTrace rpgm_generate(const Field& field, const RpgmConfig& cfg, std::size_t n,
                        SimTime duration, sim::RngStream& rng);

}  // namespace manet::mobility
