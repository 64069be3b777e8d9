#include "manet/mobility/gauss_markov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace manet::mobility {

void GaussMarkovConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("GaussMarkovConfig: alpha must be set and lie in [0, 1]");
  }
  if (!(update_interval > 0.0)) throw std::invalid_argument("GaussMarkovConfig: update_interval <= 0");
  if (!(max_speed > 0.0)) throw std::invalid_argument("GaussMarkovConfig: max_speed <= 0");
  if (!(mean_speed >= 0.0)) throw std::invalid_argument("GaussMarkovConfig: mean_speed < 0");
  if (!(sigma_speed >= 0.0) || !(sigma_direction >= 0.0)) {
    throw std::invalid_argument("GaussMarkovConfig: sigmas must be >= 0");
  }
}

namespace {

bool near_edge(const Field& field, Position p) {
  const double m = field.edge_margin;
  return p.x < m || p.x > field.width - m || p.y < m || p.y > field.height - m;
}

// Representative of `angle` (mod 2pi) closest to `reference`.
double unwrap_near(double angle, double reference) {
  return reference + std::remainder(angle - reference, kTwoPi);
}

}  // namespace

GaussMarkovState gm_update(const GaussMarkovState& state, const GaussMarkovConfig& cfg,
                           const Field& field, double speed_draw, double direction_draw) {
  GaussMarkovState next = state;
  if (near_edge(field, state.pos)) {
    const Position c = field.center();
    next.mean_direction = wrap_angle(std::atan2(c.y - state.pos.y, c.x - state.pos.x));
  }
  const double a = cfg.alpha;
  const double noise = std::sqrt(1.0 - a * a);
  const double s = a * state.speed + (1.0 - a) * cfg.mean_speed + noise * speed_draw;
  next.speed = std::clamp(s, 0.0, cfg.max_speed);

  const double mean_d = unwrap_near(next.mean_direction, state.direction);
  next.direction =
      wrap_angle(a * state.direction + (1.0 - a) * mean_d + noise * direction_draw);
  return next;
}

GaussMarkovState gm_update(const GaussMarkovState& state, const GaussMarkovConfig& cfg,
                           const Field& field, sim::RngStream& rng) {
  const double sx = rng.normal(0.0, cfg.sigma_speed);
  const double dx = rng.normal(0.0, cfg.sigma_direction);
  return gm_update(state, cfg, field, sx, dx);
}

Position gm_advance(const GaussMarkovState& state, const GaussMarkovConfig& cfg,
                    const Field& field) {
  if (state.speed == 0.0) return state.pos;
  return reflect_move(field, state.pos, state.direction, state.speed * cfg.update_interval).end;
}

MobilityTrace gm_generate(const Field& field, const GaussMarkovConfig& cfg, std::size_t n,
                          SimTime duration, sim::RngStream& rng) {
  field.validate();
  cfg.validate();
  if (n == 0) throw std::invalid_argument("gm_generate: need at least one node");
  if (!(duration > 0.0)) throw std::invalid_argument("gm_generate: duration must be > 0");

  TraceBuilder builder(field, duration, n);
  for (NodeId node = 0; node < n; ++node) {
    GaussMarkovState st;
    st.pos = {rng.uniform(0.0, field.width), rng.uniform(0.0, field.height)};
    st.speed = std::min(cfg.mean_speed, cfg.max_speed);
    st.direction = rng.uniform(0.0, kTwoPi);
    st.mean_direction = std::isnan(cfg.mean_direction) ? st.direction : wrap_angle(cfg.mean_direction);
    builder.start(node, st.pos);

    SimTime t = 0.0;
    while (t < duration) {
      const double dt = cfg.update_interval;
      const double path = st.speed * dt;
      if (path > 0.0) {
        const ReflectedMove mv = reflect_move(field, st.pos, st.direction, path);
        Position from = st.pos;
        double travelled = 0.0;
        for (int b = 0; b < mv.bounce_count; ++b) {
          travelled += distance(from, mv.bounces[b]);
          builder.move_to(node, t + dt * (travelled / path), mv.bounces[b], st.speed);
          from = mv.bounces[b];
        }
        builder.move_to(node, t + dt, mv.end, st.speed);
        st.pos = mv.end;
        st.direction = mv.direction;
      } else {
        builder.hold_until(node, t + dt);
      }
      t += dt;
      st = gm_update(st, cfg, field, rng);
    }
  }
  return std::move(builder).finish();
}

}  // namespace manet::mobility
