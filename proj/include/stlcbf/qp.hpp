#pragma once

#include <Eigen/Core>
#include <optional>

#include "stlcbf/barrier.hpp"
#include "stlcbf/dynamics.hpp"

namespace stlcbf {

/// Linear class-K gain: alpha(b) = kappa * b, kappa > 0.
struct AlphaFn {
  double kappa = 1.0;
  double operator()(double b) const { return kappa * b; }
};

/// Per-step convex program
///   min u' Q u   s.t.  a . u >= beta,  |P g(x) u| <= v_max
/// where a = db/dx . g(x), beta = -alpha(b) - db/dt - db/dx . f(x) and P
/// selects the planar rows of the realized velocity.
struct QpProblem {
  Eigen::Matrix3d Q = Eigen::Matrix3d::Identity();
  Eigen::Vector3d cbf_row = Eigen::Vector3d::Zero();  // a
  double rhs = 0.0;                                    // beta
  Eigen::Matrix<double, 2, 3> planar_map = Eigen::Matrix<double, 2, 3>::Zero();
  double v_max = 1.0;
};

struct QpSolution {
  Eigen::Vector3d u = Eigen::Vector3d::Zero();
  double cost = 0.0;
  double lambda_cbf = 0.0;  // multiplier of the barrier constraint
  double nu_speed = 0.0;    // multiplier of the speed constraint
  bool cbf_active = false;
  bool speed_active = false;
  double kkt = 0.0;
};

QpProblem assemble_qp(const BarrierEval& be, const Dynamics& dyn,
                      const Eigen::Vector3d& x, double v_max,
                      const Eigen::Matrix3d& Q, const AlphaFn& alpha);

/// Exact minimizer via enumeration of the candidate active sets
/// {}, {cbf}, {speed}, {cbf,speed}. Returns nullopt iff the barrier halfspace
/// does not intersect the speed cylinder (certified, not a numerical failure).
std::optional<QpSolution> solve_qp(const QpProblem& qp);

/// Max of stationarity, primal violation, dual negativity and complementary
/// slackness for a candidate point; multipliers are inferred by least squares
/// from the near-active constraints.
double kkt_residual(const QpProblem& qp, const Eigen::Vector3d& u);
double kkt_residual(const QpProblem& qp, const QpSolution& sol);

struct ControlConfig {
  Eigen::Matrix3d Q = Eigen::Matrix3d::Identity();
  AlphaFn alpha{};
};

/// One control step: evaluates the composite barrier, solves the QP, and
/// reports the applied input plus the realized velocity f(x) + g(x) u.
/// `sol` is empty when the program is infeasible (the replanner's trigger).
struct ControlOutcome {
  BarrierEval barrier;
  std::optional<QpSolution> sol;
  Eigen::Vector3d u = Eigen::Vector3d::Zero();
  Eigen::Vector3d v_real = Eigen::Vector3d::Zero();
  bool degenerate_gradient = false;
};

ControlOutcome control_step(const Eigen::Vector3d& x, double t,
                            const CompositeBarrier& cb, const Dynamics& dyn,
                            const WorldView* world, double v_max,
                            const ControlConfig& cfg);

}  // namespace stlcbf
