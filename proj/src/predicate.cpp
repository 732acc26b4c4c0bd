#include "stlcbf/predicate.hpp"

#include <cmath>

namespace stlcbf {

namespace {

Eigen::Vector2d planar(const Eigen::VectorXd& state) {
  if (state.size() < 2) throw Error("state must have at least 2 components");
  return state.head<2>();
}

}  // namespace

Predicate Predicate::ball(const Eigen::Vector2d& center, double epsilon) {
  if (!(epsilon > 0.0)) throw Error("ball predicate requires epsilon > 0");
  Predicate p;
  p.kind = Kind::BallReach;
  p.center = center;
  p.epsilon = epsilon;
  return p;
}

Predicate Predicate::clearance(std::string obstacle_id, double safe_distance) {
  if (!(safe_distance > 0.0)) throw Error("clearance predicate requires safe_distance > 0");
  Predicate p;
  p.kind = Kind::Clearance;
  p.obstacle_id = std::move(obstacle_id);
  p.safe_distance = safe_distance;
  return p;
}

Predicate Predicate::halfspace(const Eigen::Vector2d& normal, double offset) {
  if (std::abs(normal.norm() - 1.0) > 1e-9)
    throw Error("halfspace normal must be a unit vector");
  Predicate p;
  p.kind = Kind::Halfspace;
  p.normal = normal;
  p.offset = offset;
  return p;
}

bool Predicate::operator==(const Predicate& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::BallReach:
      return center == o.center && epsilon == o.epsilon;
    case Kind::Clearance:
      return obstacle_id == o.obstacle_id && safe_distance == o.safe_distance;
    case Kind::Halfspace:
      return normal == o.normal && offset == o.offset;
  }
  return false;
}

double eval_predicate(const Predicate& p, const Eigen::VectorXd& state, double t,
                      const WorldView* world) {
  const Eigen::Vector2d pos = planar(state);
  switch (p.kind) {
    case Predicate::Kind::BallReach:
      return p.epsilon - (pos - p.center).norm();
    case Predicate::Kind::Clearance: {
      if (!world) throw Error("clearance predicate requires a world");
      const Eigen::Vector2d obs = world->obstacle_position(p.obstacle_id, t);
      return (pos - obs).squaredNorm() - p.safe_distance * p.safe_distance;
    }
    case Predicate::Kind::Halfspace:
      return p.offset - p.normal.dot(pos);
  }
  throw Error("unreachable predicate kind");
}

Eigen::VectorXd predicate_gradient(const Predicate& p, const Eigen::VectorXd& state,
                                   double t, const WorldView* world, bool* degenerate) {
  const Eigen::Vector2d pos = planar(state);
  if (degenerate) *degenerate = false;
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  switch (p.kind) {
    case Predicate::Kind::BallReach: {
      const Eigen::Vector2d d = pos - p.center;
      const double n = d.norm();
      if (n == 0.0) {
        // Task already maximally satisfied; zero row is handled by the QP.
        if (degenerate) *degenerate = true;
      } else {
        g = -d / n;
      }
      break;
    }
    case Predicate::Kind::Clearance: {
      if (!world) throw Error("clearance predicate requires a world");
      g = 2.0 * (pos - world->obstacle_position(p.obstacle_id, t));
      break;
    }
    case Predicate::Kind::Halfspace:
      g = -p.normal;
      break;
  }
  Eigen::VectorXd full = Eigen::VectorXd::Zero(state.size());
  full.head<2>() = g;
  return full;
}

double predicate_time_derivative(const Predicate& p, const Eigen::VectorXd& state,
                                 double t, const WorldView* world) {
  if (p.kind != Predicate::Kind::Clearance) return 0.0;
  if (!world) throw Error("clearance predicate requires a world");
  const Eigen::Vector2d pos = planar(state);
  const Eigen::Vector2d obs = world->obstacle_position(p.obstacle_id, t);
  const Eigen::Vector2d vel = world->obstacle_velocity(p.obstacle_id, t);
  return -2.0 * (pos - obs).dot(vel);
}

}  // namespace stlcbf
