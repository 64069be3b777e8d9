#include "manet/mobility/manhattan.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace manet::mobility {

void ManhattanConfig::validate() const {
  if (horizontal_streets < 2 || vertical_streets < 2) {
    throw std::invalid_argument("ManhattanConfig: need at least 2 streets in each direction");
  }
  if (!(v_max > 0.0)) throw std::invalid_argument("ManhattanConfig: v_max must be > 0");
  if (!(min_headway >= 0.0)) throw std::invalid_argument("ManhattanConfig: min_headway < 0");
  if (!(update_interval > 0.0)) throw std::invalid_argument("ManhattanConfig: update_interval <= 0");
  if (!(accel_ratio >= 0.0)) throw std::invalid_argument("ManhattanConfig: accel_ratio < 0");
}

Turn manhattan_turn(sim::RngStream& rng) {
  const double u = rng.uniform();
  if (u < 0.5) return Turn::straight;
  if (u < 0.75) return Turn::left;
  return Turn::right;
}

namespace {

std::vector<double> evenly_spaced(std::size_t count, double extent) {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = extent * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  v.back() = extent;
  return v;
}

// Unit travel direction as (dx, dy).
struct Dir {
  int dx;
  int dy;
};

Dir direction_of(Axis axis, int heading) {
  return axis == Axis::horizontal ? Dir{heading, 0} : Dir{0, heading};
}

Dir turned(Dir d, Turn turn) {
  switch (turn) {
    case Turn::straight:
      return d;
    case Turn::left:
      return {-d.dy, d.dx};
    case Turn::right:
      return {d.dy, -d.dx};
  }
  return d;
}

}  // namespace

ManhattanWalker::ManhattanWalker(const Field& field, const ManhattanConfig& cfg,
                                 std::vector<LaneState> nodes)
    : field_(field),
      cfg_(cfg),
      ys_(evenly_spaced(cfg.horizontal_streets, field.height)),
      xs_(evenly_spaced(cfg.vertical_streets, field.width)),
      nodes_(std::move(nodes)) {
  field_.validate();
  cfg_.validate();
  for (const auto& s : nodes_) {
    const auto& streets = s.axis == Axis::horizontal ? ys_ : xs_;
    if (s.street >= streets.size()) throw std::invalid_argument("ManhattanWalker: bad street");
    if (s.heading != 1 && s.heading != -1) throw std::invalid_argument("ManhattanWalker: bad heading");
    if (!(s.coord >= 0.0 && s.coord <= street_length(s.axis))) {
      throw std::invalid_argument("ManhattanWalker: coordinate off the street");
    }
  }
}

std::vector<LaneState> ManhattanWalker::random_placement(const Field& field,
                                                         const ManhattanConfig& cfg, std::size_t n,
                                                         sim::RngStream& rng) {
  std::vector<LaneState> out(n);
  const std::size_t streets = cfg.horizontal_streets + cfg.vertical_streets;
  for (auto& s : out) {
    const std::size_t pick = rng.below(streets);
    if (pick < cfg.horizontal_streets) {
      s.axis = Axis::horizontal;
      s.street = pick;
      s.coord = rng.uniform(0.0, field.width);
    } else {
      s.axis = Axis::vertical;
      s.street = pick - cfg.horizontal_streets;
      s.coord = rng.uniform(0.0, field.height);
    }
    s.heading = rng.uniform() < 0.5 ? 1 : -1;
    s.desired = rng.uniform(0.0, cfg.v_max);
    s.speed = s.desired;
  }
  return out;
}

double ManhattanWalker::street_position(Axis axis, std::size_t street) const {
  return axis == Axis::horizontal ? ys_.at(street) : xs_.at(street);
}

double ManhattanWalker::street_length(Axis axis) const {
  return axis == Axis::horizontal ? field_.width : field_.height;
}

const std::vector<double>& ManhattanWalker::crossings(Axis axis) const {
  // Moving along a horizontal street we cross the vertical streets.
  return axis == Axis::horizontal ? xs_ : ys_;
}

Position ManhattanWalker::position_of(const LaneState& s) const {
  if (s.axis == Axis::horizontal) return {s.coord, ys_[s.street]};
  return {xs_[s.street], s.coord};
}

void ManhattanWalker::pin_desired_speed(NodeId node, double speed) {
  auto& s = nodes_.at(node);
  s.desired = std::clamp(speed, 0.0, cfg_.v_max);
  s.pinned = true;
}

std::optional<NodeId> ManhattanWalker::predecessor(NodeId node) const {
  const LaneState& me = nodes_.at(node);
  // Only a node we could reach within one slot constrains us.
  const double reach = cfg_.min_headway + cfg_.v_max * cfg_.update_interval;
  std::optional<NodeId> best;
  double best_gap = reach;
  for (NodeId j = 0; j < nodes_.size(); ++j) {
    if (j == node) continue;
    const LaneState& o = nodes_[j];
    if (o.axis != me.axis || o.street != me.street || o.heading != me.heading) continue;
    const double gap = (o.coord - me.coord) * me.heading;
    if (gap < 0.0 || (gap == 0.0 && j < node)) continue;
    if (gap < best_gap || (gap == best_gap && !best)) {
      best_gap = gap;
      best = j;
    }
  }
  return best;
}

void ManhattanWalker::step(sim::RngStream& rng, TraceBuilder* builder) {
  const double dt = cfg_.update_interval;
  const double accel = cfg_.accel_ratio * cfg_.v_max;

  // Speeds for this slot are decided from the state at the slot start.
  std::vector<double> slot_speed(nodes_.size());
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    LaneState& s = nodes_[i];
    if (!s.pinned) {
      s.desired = std::clamp(s.desired + rng.uniform(-1.0, 1.0) * accel * dt, 0.0, cfg_.v_max);
    }
    double v = s.desired;
    if (auto pred = predecessor(i)) {
      const LaneState& p = nodes_[*pred];
      const double gap = (p.coord - s.coord) * s.heading;
      v = std::min({v, p.speed, std::max(0.0, gap - cfg_.min_headway) / dt});
    }
    slot_speed[i] = v;
  }

  for (NodeId i = 0; i < nodes_.size(); ++i) {
    nodes_[i].speed = slot_speed[i];
    travel(i, slot_speed[i] * dt, rng, builder);
    if (builder != nullptr) {
      if (slot_speed[i] > 0.0) {
        builder->move_to(i, now_ + dt, position_of(nodes_[i]), slot_speed[i]);
      } else {
        builder->hold_until(i, now_ + dt);
      }
    }
  }
  now_ += dt;
}

void ManhattanWalker::travel(NodeId node, double path, sim::RngStream& rng,
                             TraceBuilder* builder) {
  LaneState& s = nodes_[node];
  const double speed = path / cfg_.update_interval;
  double travelled = 0.0;
  while (path - travelled > 0.0) {
    const auto& cross = crossings(s.axis);
    // Next intersection strictly ahead.
    // Streets end at a crossing, so "none ahead" means we stand on the end.
    double next = s.coord;
    if (s.heading > 0) {
      auto it = std::upper_bound(cross.begin(), cross.end(), s.coord);
      if (it != cross.end()) next = *it;
    } else {
      auto it = std::lower_bound(cross.begin(), cross.end(), s.coord);
      if (it != cross.begin()) next = *(it - 1);
    }
    const double gap = (next - s.coord) * s.heading;
    const double left = path - travelled;
    if (gap > left) {
      s.coord += s.heading * left;
      break;
    }
    travelled += gap;
    s.coord = next;
    if (builder != nullptr && speed > 0.0) {
      builder->move_to(node, now_ + cfg_.update_interval * (travelled / path), position_of(s), speed);
    }

    // Pick a turn that keeps the node on the grid.
    const std::size_t cross_idx = static_cast<std::size_t>(
        std::lower_bound(cross.begin(), cross.end(), next) - cross.begin());
    const Dir d = direction_of(s.axis, s.heading);
    const double along_street = street_position(s.axis, s.street);
    for (;;) {
      const Dir nd = turned(d, manhattan_turn(rng));
      const bool horizontal = nd.dy == 0;
      const Axis axis = horizontal ? Axis::horizontal : Axis::vertical;
      const int heading = horizontal ? nd.dx : nd.dy;
      // Coordinate along the new street at this intersection.
      const double coord = axis == s.axis ? s.coord : along_street;
      const double end = heading > 0 ? street_length(axis) : 0.0;
      if (coord == end) continue;
      if (axis != s.axis) {
        s.street = cross_idx;
        s.axis = axis;
      }
      s.coord = coord;
      s.heading = heading;
      break;
    }
  }
}

MobilityTrace manhattan_generate(const Field& field, const ManhattanConfig& cfg, std::size_t n,
                                 SimTime duration, sim::RngStream& rng) {
  field.validate();
  cfg.validate();
  if (n == 0) throw std::invalid_argument("manhattan_generate: need at least one node");
  if (!(duration > 0.0)) throw std::invalid_argument("manhattan_generate: duration must be > 0");

  ManhattanWalker walker(field, cfg, ManhattanWalker::random_placement(field, cfg, n, rng));
  TraceBuilder builder(field, duration, n);
  for (NodeId i = 0; i < n; ++i) builder.start(i, walker.position(i));
  while (walker.now() < duration) walker.step(rng, &builder);
  return std::move(builder).finish();
}

}  // namespace manet::mobility
