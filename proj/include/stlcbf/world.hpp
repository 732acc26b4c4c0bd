#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "stlcbf/dynamics.hpp"
#include "stlcbf/predicate.hpp"

namespace stlcbf {

enum class ZoneMode { Standard, CrowdedArea, Corridor };

const char* zone_mode_name(ZoneMode m);

/// Velocity-cap region, axis-aligned rectangle or circle.
struct Zone {
  enum class Shape { Rect, Circle };
  Shape shape = Shape::Rect;
  Eigen::Vector2d lo = Eigen::Vector2d::Zero();      // Rect corners
  Eigen::Vector2d hi = Eigen::Vector2d::Zero();
  Eigen::Vector2d center = Eigen::Vector2d::Zero();  // Circle
  double radius = 0.0;
  ZoneMode mode = ZoneMode::Standard;
  double v_max = 0.0;  // 0 selects the mode default

  bool contains(const Eigen::Vector2d& p) const;
  double effective_vmax() const;
};

/// Rose-curve motion p(t) = c + A cos(k w t + phase) * (cos(w t + phase),
/// sin(w t + phase)); velocity is the exact analytic derivative.
struct RhodoneaParams {
  double amplitude = 0.0;
  double k = 2.0;
  double omega = 0.5;
  double phase = 0.0;
};

struct Obstacle {
  std::string id;
  double radius = 0.3;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  std::optional<RhodoneaParams> motion;  // nullopt: static

  std::pair<Eigen::Vector2d, Eigen::Vector2d> state(double t) const;
};

/// Zones plus obstacles plus the position-dependent velocity cap rules.
class World : public WorldView {
 public:
  std::vector<Zone> zones;
  std::vector<Obstacle> obstacles;
  double standard_vmax = 1.5;
  double crowded_vmax = 1.05;     // cap applied near obstacles
  double crowd_proximity = 1.5;   // distance to an obstacle surface that crowds

  /// CrowdedArea beats Corridor beats Standard; within one mode the smallest
  /// matching cap wins.
  std::pair<double, ZoneMode> vmax_at(const Eigen::Vector2d& pos, double t) const;

  const Obstacle& find_obstacle(const std::string& id) const;
  bool has_obstacle(const std::string& id) const;

  Eigen::Vector2d obstacle_position(const std::string& id, double t) const override;
  Eigen::Vector2d obstacle_velocity(const std::string& id, double t) const override;
  double obstacle_radius(const std::string& id) const override;
};

std::pair<Eigen::Vector2d, Eigen::Vector2d> obstacle_state(const Obstacle& o, double t);

/// Forward Euler step of xdot = f(x) + g(x) u with theta wrapped to (-pi, pi].
Eigen::Vector3d integrate_step(const Eigen::Vector3d& x, const Eigen::Vector3d& u,
                               const Dynamics& dyn, double dt);

double wrap_angle(double theta);

}  // namespace stlcbf
