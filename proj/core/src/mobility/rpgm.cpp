#include "manet/mobility/rpgm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "manet/mobility/random_waypoint.hpp"

namespace manet::mobility {

void RpgmConfig::validate() const {
  if (group_count == 0) throw std::invalid_argument("RpgmConfig: group_count must be positive");
  if (!(sdr >= 0.0 && sdr <= 1.0)) throw std::invalid_argument("RpgmConfig: sdr outside [0,1]");
  if (!(adr >= 0.0 && adr <= 1.0)) throw std::invalid_argument("RpgmConfig: adr outside [0,1]");
  if (!(max_speed > 0.0)) throw std::invalid_argument("RpgmConfig: max_speed must be > 0");
  if (!(max_angle > 0.0)) throw std::invalid_argument("RpgmConfig: max_angle must be > 0");
  if (!(member_spread >= 0.0)) throw std::invalid_argument("RpgmConfig: member_spread < 0");
  if (!(leader_pause >= 0.0)) throw std::invalid_argument("RpgmConfig: leader_pause < 0");
  if (!(update_interval > 0.0)) throw std::invalid_argument("RpgmConfig: update_interval <= 0");
}

Velocity rpgm_member_velocity(Velocity leader, const RpgmConfig& cfg, double speed_dev,
                              double angle_dev) {
  if (leader.speed > cfg.max_speed) {
    throw std::invalid_argument("rpgm_member_velocity: leader faster than max_speed");
  }
  Velocity v;
  v.speed = std::clamp(leader.speed + speed_dev * cfg.sdr * cfg.max_speed, 0.0, cfg.max_speed);
  v.direction = wrap_angle(leader.direction + angle_dev * cfg.adr * cfg.max_angle);
  return v;
}

Velocity rpgm_member_velocity(Velocity leader, const RpgmConfig& cfg, sim::RngStream& rng) {
  const double speed_dev = rng.uniform(-1.0, 1.0);
  const double angle_dev = rng.uniform(-1.0, 1.0);
  return rpgm_member_velocity(leader, cfg, speed_dev, angle_dev);
}

namespace {

Position polar(const Velocity& v) {
  return {v.speed * std::cos(v.direction), v.speed * std::sin(v.direction)};
}

std::vector<SimTime> update_grid(SimTime duration, double interval) {
  std::vector<SimTime> grid;
  for (std::size_t k = 0;; ++k) {
    const SimTime t = static_cast<double>(k) * interval;
    if (t >= duration) break;
    grid.push_back(t);
  }
  grid.push_back(duration);
  return grid;
}

}  // namespace

RpgmTrace rpgm_generate(const Field& field, const RpgmConfig& cfg, std::size_t n,
                        SimTime duration, sim::RngStream& rng) {
  field.validate();
  cfg.validate();
  if (cfg.group_count > n) throw std::invalid_argument("rpgm_generate: group_count exceeds n");
  if (!(duration > 0.0)) throw std::invalid_argument("rpgm_generate: duration must be > 0");

  RwpConfig leader_cfg{cfg.max_speed, cfg.leader_pause};
  MobilityTrace refs = rwp_generate(field, leader_cfg, cfg.group_count, duration, rng);

  std::vector<std::size_t> group_of(n);
  std::vector<std::vector<NodeId>> members(cfg.group_count);
  for (NodeId i = 0; i < n; ++i) {
    group_of[i] = i % cfg.group_count;
    members[group_of[i]].push_back(i);
  }

  const std::vector<SimTime> grid = update_grid(duration, cfg.update_interval);
  TraceBuilder builder(field, duration, n);

  for (std::size_t g = 0; g < cfg.group_count; ++g) {
    const auto ref_wps = refs.waypoints(static_cast<NodeId>(g));
    const auto& group = members[g];

    // Offsets from the reference point; zero offset reproduces it exactly.
    std::vector<Position> offset(group.size());
    const Position origin = ref_wps.front().pos;
    for (std::size_t m = 0; m < group.size(); ++m) {
      const double r = cfg.member_spread * std::sqrt(rng.uniform());
      const double theta = rng.uniform(0.0, kTwoPi);
      const Position p = field.clamp({origin.x + r * std::cos(theta), origin.y + r * std::sin(theta)});
      offset[m] = {p.x - origin.x, p.y - origin.y};
      builder.start(group[m], p);
    }

    double heading = 0.0;
    std::size_t ref_idx = 0;  // first reference waypoint not yet emitted
    std::vector<Position> next_offset(group.size());
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      const SimTime t0 = grid[k];
      const SimTime t1 = grid[k + 1];
      const double dt = t1 - t0;
      const Position r0 = interpolate(ref_wps, t0);
      const Position r1 = interpolate(ref_wps, t1);
      const double dx = r1.x - r0.x;
      const double dy = r1.y - r0.y;
      Velocity leader;
      leader.speed = std::min(std::hypot(dx, dy) / dt, cfg.max_speed);
      // A paused reference point keeps its last heading.
      if (leader.speed > 0.0) heading = wrap_angle(std::atan2(dy, dx));
      leader.direction = heading;
      const Position leader_vec = polar(leader);

      for (std::size_t m = 0; m < group.size(); ++m) {
        const Velocity mv = rpgm_member_velocity(leader, cfg, rng);
        const Position mv_vec = polar(mv);
        const Position dev{(mv_vec.x - leader_vec.x) * dt, (mv_vec.y - leader_vec.y) * dt};
        const Position p =
            field.clamp({r1.x + offset[m].x + dev.x, r1.y + offset[m].y + dev.y});
        next_offset[m] = {p.x - r1.x, p.y - r1.y};
      }

      // Corners of the reference path inside (t0, t1), then t1 itself.
      while (ref_idx < ref_wps.size() && ref_wps[ref_idx].time <= t0) ++ref_idx;
      auto emit = [&](SimTime t, Position ref_pos) {
        const double f = (t - t0) / dt;
        for (std::size_t m = 0; m < group.size(); ++m) {
          const Position off{offset[m].x + (next_offset[m].x - offset[m].x) * f,
                             offset[m].y + (next_offset[m].y - offset[m].y) * f};
          builder.move_to(group[m], t, {ref_pos.x + off.x, ref_pos.y + off.y});
        }
      };
      while (ref_idx < ref_wps.size() && ref_wps[ref_idx].time < t1) {
        emit(ref_wps[ref_idx].time, ref_wps[ref_idx].pos);
        ++ref_idx;
      }
      emit(t1, r1);
      offset.swap(next_offset);
    }
  }

  return RpgmTrace{std::move(builder).finish(), std::move(refs), std::move(group_of)};
}

}  // namespace manet::mobility
