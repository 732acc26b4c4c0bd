#include "stlcbf/dynamics.hpp"

#include <cmath>
#include <numbers>

#include "stlcbf/errors.hpp"

namespace stlcbf {

Eigen::Vector3d Dynamics::drift(const Eigen::Vector3d&) const {
  return Eigen::Vector3d::Zero();
}

Eigen::Matrix3d Dynamics::input_map(const Eigen::Vector3d& x) const {
  if (model == Model::Identity) return Eigen::Matrix3d::Identity();
  // Wheel i drives tangentially at heading theta + i*120deg. The map below is
  // the closed-form inverse of the rim-speed relation
  //   u_i = -sin(d_i) vx + cos(d_i) vy + L w.
  const double L = chassis_radius;
  Eigen::Matrix3d B;
  for (int i = 0; i < 3; ++i) {
    const double d = x(2) + i * (2.0 * std::numbers::pi / 3.0);
    B(0, i) = -std::sin(d) * (2.0 / 3.0);
    B(1, i) = std::cos(d) * (2.0 / 3.0);
    B(2, i) = 1.0 / (3.0 * L);
  }
  return B;
}

Dynamics Dynamics::identity() { return Dynamics{Model::Identity, 0.2}; }

Dynamics Dynamics::three_wheel_omni(double chassis_radius) {
  if (!(chassis_radius > 0.0)) throw Error("chassis radius must be positive");
  return Dynamics{Model::ThreeWheelOmni, chassis_radius};
}

}  // namespace stlcbf
