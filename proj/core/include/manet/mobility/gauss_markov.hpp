#pragma once

#include <cstddef>
#include <limits>
#include <numbers>

#include "manet/mobility/trace.hpp"
#include "manet/sim/rng.hpp"

namespace manet::mobility {

struct GaussMarkovConfig {
  /// Memory level in [0, 1]: 0 is memoryless, 1 is straight-line motion.
  /// No default; must be set explicitly.
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double mean_speed = 10.0;
  /// Asymptotic mean heading. NaN gives every node its own initial heading.
  double mean_direction = std::numeric_limits<double>::quiet_NaN();
  double sigma_speed = 5.0;
  double sigma_direction = std::numbers::pi / 8.0;
  double update_interval = 1.0;
  double max_speed = 20.0;

  void validate() const;
};

struct GaussMarkovState {
  double speed = 0.0;
  double direction = 0.0;
  /// Current mean heading; re-aimed at the field centre near an edge.
  double mean_direction = 0.0;
  Position pos;
};

/// One memory update of speed and direction:
///   s' = a*s + (1-a)*mean_s + sqrt(1-a^2)*speed_draw
///   d' = a*d + (1-a)*mean_d + sqrt(1-a^2)*direction_draw
/// The draws are the Gaussian variates themselves (already scaled by sigma).
/// Before mixing, a node within the field's edge margin has its mean heading
/// pointed at the field centre. Speed is clamped to [0, max_speed].
GaussMarkovState gm_update(const GaussMarkovState& state, const GaussMarkovConfig& cfg,
                           const Field& field, double speed_draw, double direction_draw);

GaussMarkovState gm_update(const GaussMarkovState& state, const GaussMarkovConfig& cfg,
                           const Field& field, sim::RngStream& rng);

/// Position after one update interval at the state's current speed and
/// heading, reflected at the field boundary.
Position gm_advance(const GaussMarkovState& state, const GaussMarkovConfig& cfg,
                    const Field& field);

MobilityTrace gm_generate(const Field& field, const GaussMarkovConfig& cfg, std::size_t n,
                          SimTime duration, sim::RngStream& rng);

}  // namespace manet::mobility
