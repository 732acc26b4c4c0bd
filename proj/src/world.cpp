#include "stlcbf/world.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "stlcbf/errors.hpp"

namespace stlcbf {

const char* zone_mode_name(ZoneMode m) {
  switch (m) {
    case ZoneMode::Standard: return "Standard";
    case ZoneMode::CrowdedArea: return "CrowdedArea";
    case ZoneMode::Corridor: return "Corridor";
  }
  return "?";
}

bool Zone::contains(const Eigen::Vector2d& p) const {
  if (shape == Shape::Rect)
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  return (p - center).norm() <= radius;
}

double Zone::effective_vmax() const {
  if (v_max > 0.0) return v_max;
  switch (mode) {
    case ZoneMode::Standard: return 1.5;
    case ZoneMode::CrowdedArea: return 1.05;
    case ZoneMode::Corridor: return 3.0;
  }
  return 1.5;
}

std::pair<Eigen::Vector2d, Eigen::Vector2d> Obstacle::state(double t) const {
  return obstacle_state(*this, t);
}

std::pair<Eigen::Vector2d, Eigen::Vector2d> obstacle_state(const Obstacle& o, double t) {
  if (!o.motion) return {o.center, Eigen::Vector2d::Zero()};
  const RhodoneaParams& m = *o.motion;
  const double ang = m.omega * t + m.phase;
  const double rad = m.amplitude * std::cos(m.k * m.omega * t + m.phase);
  const Eigen::Vector2d dir(std::cos(ang), std::sin(ang));
  const Eigen::Vector2d tangent(-std::sin(ang), std::cos(ang));
  const Eigen::Vector2d pos = o.center + rad * dir;
  const double rad_dot = -m.amplitude * m.k * m.omega * std::sin(m.k * m.omega * t + m.phase);
  const Eigen::Vector2d vel = rad_dot * dir + rad * m.omega * tangent;
  return {pos, vel};
}

std::pair<double, ZoneMode> World::vmax_at(const Eigen::Vector2d& pos, double t) const {
  double crowded = std::numeric_limits<double>::infinity();
  double corridor = std::numeric_limits<double>::infinity();
  double standard = std::numeric_limits<double>::infinity();
  for (const auto& z : zones) {
    if (!z.contains(pos)) continue;
    switch (z.mode) {
      case ZoneMode::CrowdedArea: crowded = std::min(crowded, z.effective_vmax()); break;
      case ZoneMode::Corridor: corridor = std::min(corridor, z.effective_vmax()); break;
      case ZoneMode::Standard: standard = std::min(standard, z.effective_vmax()); break;
    }
  }
  for (const auto& o : obstacles) {
    const Eigen::Vector2d p = obstacle_state(o, t).first;
    if ((pos - p).norm() - o.radius <= crowd_proximity)
      crowded = std::min(crowded, crowded_vmax);
  }
  if (std::isfinite(crowded)) return {crowded, ZoneMode::CrowdedArea};
  if (std::isfinite(corridor)) return {corridor, ZoneMode::Corridor};
  if (std::isfinite(standard)) return {standard, ZoneMode::Standard};
  return {standard_vmax, ZoneMode::Standard};
}

const Obstacle& World::find_obstacle(const std::string& id) const {
  for (const auto& o : obstacles)
    if (o.id == id) return o;
  throw Error("unknown obstacle id '" + id + "'");
}

bool World::has_obstacle(const std::string& id) const {
  for (const auto& o : obstacles)
    if (o.id == id) return true;
  return false;
}

Eigen::Vector2d World::obstacle_position(const std::string& id, double t) const {
  return obstacle_state(find_obstacle(id), t).first;
}

Eigen::Vector2d World::obstacle_velocity(const std::string& id, double t) const {
  return obstacle_state(find_obstacle(id), t).second;
}

double World::obstacle_radius(const std::string& id) const {
  return find_obstacle(id).radius;
}

double wrap_angle(double theta) {
  double w = std::remainder(theta, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

Eigen::Vector3d integrate_step(const Eigen::Vector3d& x, const Eigen::Vector3d& u,
                               const Dynamics& dyn, double dt) {
  if (!(dt > 0.0)) throw Error("integration step must be positive");
  Eigen::Vector3d next = x + dt * (dyn.drift(x) + dyn.input_map(x) * u);
  next(2) = wrap_angle(next(2));
  return next;
}

}  // namespace stlcbf
