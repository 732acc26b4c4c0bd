#pragma once

#include <Eigen/Core>
#include <string>

#include "stlcbf/errors.hpp"

namespace stlcbf {

/// Read-only obstacle lookup used by clearance predicates and safety barriers.
class WorldView {
 public:
  virtual ~WorldView() = default;
  virtual Eigen::Vector2d obstacle_position(const std::string& id, double t) const = 0;
  virtual Eigen::Vector2d obstacle_velocity(const std::string& id, double t) const = 0;
  virtual double obstacle_radius(const std::string& id) const = 0;
};

/// Atomic proposition over the planar position of the state.
/// BallReach   h(x) = epsilon - |x_pos - center|
/// Clearance   h(x,t) = |x_pos - p_obs(t)|^2 - safe_distance^2
/// Halfspace   h(x) = offset - normal . x_pos
struct Predicate {
  enum class Kind { BallReach, Clearance, Halfspace };

  Kind kind = Kind::BallReach;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();  // BallReach
  double epsilon = 0.0;
  std::string obstacle_id;  // Clearance
  double safe_distance = 0.0;
  Eigen::Vector2d normal = Eigen::Vector2d::UnitX();  // Halfspace
  double offset = 0.0;

  static Predicate ball(const Eigen::Vector2d& center, double epsilon);
  static Predicate clearance(std::string obstacle_id, double safe_distance);
  static Predicate halfspace(const Eigen::Vector2d& normal, double offset);

  bool operator==(const Predicate& other) const;
};

/// h value; predicate holds iff the result is >= 0.
double eval_predicate(const Predicate& p, const Eigen::VectorXd& state, double t,
                      const WorldView* world);

/// Gradient of h with respect to the full state (non-positional entries zero).
/// At the exact BallReach center the gradient is the zero vector and
/// `degenerate`, when given, is set.
Eigen::VectorXd predicate_gradient(const Predicate& p, const Eigen::VectorXd& state,
                                   double t, const WorldView* world,
                                   bool* degenerate = nullptr);

/// Explicit time derivative of h (nonzero only for clearance of a moving obstacle).
double predicate_time_derivative(const Predicate& p, const Eigen::VectorXd& state,
                                 double t, const WorldView* world);

}  // namespace stlcbf
