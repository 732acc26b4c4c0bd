#pragma once

#include <Eigen/Core>

namespace stlcbf {

/// Input-affine model xdot = f(x) + g(x) u with zero drift. State is
/// (x, y, theta); inputs are either a world-frame twist (Identity) or three
/// wheel rim speeds (ThreeWheelOmni, 120-degree wheel spacing, unit wheel
/// radius, chassis radius L).
struct Dynamics {
  enum class Model { Identity, ThreeWheelOmni };

  Model model = Model::Identity;
  double chassis_radius = 0.2;

  Eigen::Vector3d drift(const Eigen::Vector3d& x) const;
  Eigen::Matrix3d input_map(const Eigen::Vector3d& x) const;

  static Dynamics identity();
  static Dynamics three_wheel_omni(double chassis_radius);
};

}  // namespace stlcbf
