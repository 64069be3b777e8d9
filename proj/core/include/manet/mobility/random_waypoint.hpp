#pragma once

#include <cstddef>

#include "manet/mobility/trace.hpp"
#include "manet/sim/rng.hpp"

namespace manet::mobility {

struct RwpConfig {
  double v_max = 20.0;  ///< m/s; leg speeds are drawn on (0, v_max]
  double pause = 10.0;  ///< seconds spent at each reached waypoint

  void validate() const;
};

/// Random Waypoint: each node repeatedly picks a uniform destination in the
/// field, travels there in a straight line at a uniform speed, then pauses.
MobilityTrace rwp_generate(const Field& field, const RwpConfig& cfg, std::size_t n,
                           SimTime duration, sim::RngStream& rng);

}  // namespace manet::mobility
