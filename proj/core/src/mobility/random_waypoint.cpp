#include "manet/mobility/random_waypoint.hpp"

#include <stdexcept>

namespace manet::mobility {

void RwpConfig::validate() const {
  if (!(v_max > 0.0)) throw std::invalid_argument("RwpConfig: v_max must be > 0");
  if (!(pause >= 0.0)) throw std::invalid_argument("RwpConfig: pause must be >= 0");
}

MobilityTrace rwp_generate(const Field& field, const RwpConfig& cfg, std::size_t n,
                           SimTime duration, sim::RngStream& rng) {
  field.validate();
  cfg.validate();
  if (n == 0) throw std::invalid_argument("rwp_generate: need at least one node");
  if (!(duration > 0.0)) throw std::invalid_argument("rwp_generate: duration must be > 0");

  TraceBuilder builder(field, duration, n);
  for (NodeId node = 0; node < n; ++node) {
    Position here{rng.uniform(0.0, field.width), rng.uniform(0.0, field.height)};
    builder.start(node, here);
    SimTime t = 0.0;
    while (t < duration) {
      Position dest{rng.uniform(0.0, field.width), rng.uniform(0.0, field.height)};
      const double speed = rng.uniform_positive(cfg.v_max);
      const double d = distance(here, dest);
      if (d == 0.0) continue;
      t += d / speed;
      builder.move_to(node, t, dest, speed);
      here = dest;
      if (cfg.pause > 0.0) {
        t += cfg.pause;
        builder.hold_until(node, t);
      }
    }
  }
  return std::move(builder).finish();
}

}  // namespace manet::mobility
