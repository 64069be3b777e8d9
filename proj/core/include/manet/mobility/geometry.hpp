#pragma once

#include <cmath>
#include <numbers>

namespace manet::mobility {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Position {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Position&, const Position&) = default;
};

inline double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double distance_squared(Position a, Position b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// Speed in m/s and heading in radians, [0, 2pi).
struct Velocity {
  double speed = 0.0;
  double direction = 0.0;
  friend bool operator==(const Velocity&, const Velocity&) = default;
};

/// Wraps an angle into [0, 2pi). Values already in range are returned unchanged.
double wrap_angle(double radians);

/// Rectangular simulation area anchored at the origin.
struct Field {
  double width = 500.0;
  double height = 500.0;
  /// Distance from a boundary inside which Gauss-Markov nodes are steered back.
  double edge_margin = 25.0;

  /// Throws std::invalid_argument on a malformed field.
  void validate() const;

  [[nodiscard]] bool contains(Position p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
  }
  [[nodiscard]] Position clamp(Position p) const;

  friend bool operator==(const Field&, const Field&) = default;
  [[nodiscard]] Position center() const { return {width / 2.0, height / 2.0}; }
};

/// Result of moving through the field with specular reflection at the walls.
struct ReflectedMove {
  Position end;
  /// Heading after all reflections; the input heading if no wall was hit.
  double direction = 0.0;
  /// Wall contact points in travel order.
  int bounce_count = 0;
  Position bounces[4];
};

/// Moves `distance` metres from `start` along `direction`, reflecting off the
/// field boundary. `start` must lie inside the field.
ReflectedMove reflect_move(const Field& field, Position start, double direction, double distance);

}  // namespace manet::mobility
