#include "manet/mobility/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace manet::mobility {

double wrap_angle(double radians) {
  if (radians >= 0.0 && radians < kTwoPi) return radians;
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a value just below a multiple of 2pi can round up to 2pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

void Field::validate() const {
  if (!(width > 0.0) || !(height > 0.0)) {
    throw std::invalid_argument("Field: width and height must be positive");
  }
  if (!(edge_margin >= 0.0) || !(edge_margin < std::min(width, height) / 2.0)) {
    throw std::invalid_argument("Field: edge_margin must lie in [0, min(width, height)/2)");
  }
}

Position Field::clamp(Position p) const {
  return {std::clamp(p.x, 0.0, width), std::clamp(p.y, 0.0, height)};
}

ReflectedMove reflect_move(const Field& field, Position start, double direction,
                           double distance) {
  ReflectedMove out;
  double dx = std::cos(direction);
  double dy = std::sin(direction);
  Position p = start;
  double remaining = distance;
  bool reflected = false;

  // A path of length <= 2*(w+h) hits at most a handful of walls; cap the loop
  // to the bounce buffer and clamp whatever is left.
  while (remaining > 0.0) {
    double tx = std::numeric_limits<double>::infinity();
    double ty = std::numeric_limits<double>::infinity();
    if (dx > 0.0) tx = (field.width - p.x) / dx;
    if (dx < 0.0) tx = (0.0 - p.x) / dx;
    if (dy > 0.0) ty = (field.height - p.y) / dy;
    if (dy < 0.0) ty = (0.0 - p.y) / dy;
    const double t_hit = std::min(tx, ty);
    if (t_hit >= remaining) {
      p = field.clamp({p.x + dx * remaining, p.y + dy * remaining});
      remaining = 0.0;
      break;
    }
    p = field.clamp({p.x + dx * t_hit, p.y + dy * t_hit});
    remaining -= t_hit;
    if (tx <= ty) dx = -dx;
    if (ty <= tx) dy = -dy;
    reflected = true;
    if (t_hit <= 0.0) continue;  // already on the wall, heading out
    if (out.bounce_count == 4) {
      p = field.clamp({p.x + dx * remaining, p.y + dy * remaining});
      break;
    }
    out.bounces[out.bounce_count++] = p;
    reflected = true;
  }
  out.end = p;
  out.direction = reflected ? wrap_angle(std::atan2(dy, dx)) : direction;
  return out;
}

}  // namespace manet::mobility
