#include "stlcbf/qp.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "stlcbf/errors.hpp"

namespace stlcbf {

namespace {

constexpr double kFeasTol = 1e-11;
constexpr double kActiveTol = 1e-6;

double qp_cost(const QpProblem& qp, const Eigen::Vector3d& u) {
  return u.dot(qp.Q * u);
}

}  // namespace

QpProblem assemble_qp(const BarrierEval& be, const Dynamics& dyn,
                      const Eigen::Vector3d& x, double v_max,
                      const Eigen::Matrix3d& Q, const AlphaFn& alpha) {
  if (!(v_max > 0.0)) throw Error("v_max must be positive");
  QpProblem qp;
  qp.Q = Q;
  const Eigen::Matrix3d g = dyn.input_map(x);
  qp.cbf_row = g.transpose() * be.grad_x;
  qp.rhs = -alpha(be.value) - be.d_dt - be.grad_x.dot(dyn.drift(x));
  qp.planar_map = g.topRows<2>();
  qp.v_max = v_max;
  return qp;
}

std::optional<QpSolution> solve_qp(const QpProblem& qp) {
  const Eigen::Vector3d a = qp.cbf_row;
  const double beta = qp.rhs;
  const Eigen::Matrix<double, 2, 3>& M = qp.planar_map;
  const double vmax = qp.v_max;

  Eigen::LDLT<Eigen::Matrix3d> Qfact(qp.Q);
  if (Qfact.info() != Eigen::Success || !Qfact.isPositive())
    throw Error("QP cost matrix must be positive definite");

  auto finish = [&](Eigen::Vector3d u, double lambda, double nu, bool cbf_act,
                    bool speed_act) {
    QpSolution sol;
    sol.u = u;
    sol.cost = qp_cost(qp, u);
    sol.lambda_cbf = lambda;
    sol.nu_speed = nu;
    sol.cbf_active = cbf_act;
    sol.speed_active = speed_act;
    sol.kkt = kkt_residual(qp, sol);
    return sol;
  };

  // Candidate {}: the unconstrained minimizer is the origin.
  if (beta <= kFeasTol) return finish(Eigen::Vector3d::Zero(), 0.0, 0.0, false, false);

  // Degenerate zero row with beta > 0: constraint 0 >= beta cannot hold.
  const double a_norm = a.norm();
  if (a_norm < 1e-14) return std::nullopt;

  // Candidate {cbf}: equality projection in the Q metric.
  {
    const Eigen::Vector3d Qinv_a = Qfact.solve(a);
    const double quad = a.dot(Qinv_a);
    const Eigen::Vector3d u = (beta / quad) * Qinv_a;
    if ((M * u).norm() <= vmax * (1.0 + 1e-12) + kFeasTol)
      return finish(u, 2.0 * beta / quad, 0.0, true, false);
  }

  // Candidate {speed} alone never wins for positive definite Q: stationarity
  // would force u'Qu <= 0, so only u = 0, which is not on the speed sphere.

  // Candidate {cbf, speed}: certify feasibility first. Split a into its
  // row-space part M'w and the planar-velocity null-space remainder.
  const Eigen::Matrix2d MMt = M * M.transpose();
  const Eigen::Vector2d w = MMt.ldlt().solve(M * a);
  const Eigen::Vector3d a_perp = a - M.transpose() * w;
  if (a_perp.norm() <= 1e-12 * (1.0 + a_norm)) {
    // a.u is bounded on the cylinder by vmax * |w|.
    const double s_max = vmax * w.norm();
    if (s_max < beta * (1.0 - 1e-12) - kFeasTol) return std::nullopt;
  }

  const auto u_of_nu = [&](double nu) {
    const Eigen::Matrix3d K = qp.Q + nu * (M.transpose() * M);
    const Eigen::Vector3d Kinv_a = K.ldlt().solve(a);
    return Eigen::Vector3d((beta / a.dot(Kinv_a)) * Kinv_a);
  };
  const auto phi = [&](double nu) {
    return (M * u_of_nu(nu)).squaredNorm() - vmax * vmax;
  };

  double lo = 0.0, hi = 1.0;
  while (phi(hi) > 0.0) {
    lo = hi;
    hi *= 8.0;
    // Speed demand never drops below the cap even at infinite penalty: the
    // halfspace misses the cylinder interior (at best a tangent point).
    if (hi > 1e15) return std::nullopt;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (phi(mid) > 0.0 ? lo : hi) = mid;
  }
  const double nu = hi;
  const Eigen::Matrix3d K = qp.Q + nu * (M.transpose() * M);
  const Eigen::Vector3d Kinv_a = K.ldlt().solve(a);
  const Eigen::Vector3d u = (beta / a.dot(Kinv_a)) * Kinv_a;
  const double lambda = 2.0 * beta / a.dot(Kinv_a);
  return finish(u, lambda, nu, true, true);
}

namespace {

double kkt_residual_impl(const QpProblem& qp, const Eigen::Vector3d& u, double lambda,
                         double nu) {
  const double slack_cbf = qp.cbf_row.dot(u) - qp.rhs;
  const Eigen::Vector2d mu = qp.planar_map * u;
  const double speed = mu.norm();
  const double slack_speed = qp.v_max - speed;

  const Eigen::Vector3d stationarity = 2.0 * qp.Q * u - lambda * qp.cbf_row +
                                       2.0 * nu * qp.planar_map.transpose() * mu;
  double res = stationarity.lpNorm<Eigen::Infinity>();
  res = std::max(res, std::max(0.0, -slack_cbf));
  res = std::max(res, std::max(0.0, -slack_speed));
  res = std::max(res, std::max(0.0, -lambda));
  res = std::max(res, std::max(0.0, -nu));
  res = std::max(res, std::abs(lambda * slack_cbf));
  res = std::max(res, std::abs(nu * (speed * speed - qp.v_max * qp.v_max)));
  return res;
}

}  // namespace

double kkt_residual(const QpProblem& qp, const QpSolution& sol) {
  return kkt_residual_impl(qp, sol.u, sol.lambda_cbf, sol.nu_speed);
}

double kkt_residual(const QpProblem& qp, const Eigen::Vector3d& u) {
  const double slack_cbf = qp.cbf_row.dot(u) - qp.rhs;
  const Eigen::Vector2d mu = qp.planar_map * u;
  const double slack_speed = qp.v_max - mu.norm();
  const bool cbf_act = std::abs(slack_cbf) <= kActiveTol * (1.0 + std::abs(qp.rhs));
  const bool speed_act = std::abs(slack_speed) <= kActiveTol * (1.0 + qp.v_max);

  // Least-squares multipliers over the active columns.
  const Eigen::Vector3d target = 2.0 * qp.Q * u;
  Eigen::Matrix<double, 3, 2> cols = Eigen::Matrix<double, 3, 2>::Zero();
  int ncols = 0;
  if (cbf_act) cols.col(ncols++) = qp.cbf_row;
  if (speed_act) cols.col(ncols++) = -2.0 * qp.planar_map.transpose() * mu;
  double lambda = 0.0, nu = 0.0;
  if (ncols > 0) {
    const auto A = cols.leftCols(ncols);
    const Eigen::VectorXd m =
        A.colPivHouseholderQr().solve(target);
    int k = 0;
    if (cbf_act) lambda = m(k++);
    if (speed_act) nu = m(k++);
  }
  return kkt_residual_impl(qp, u, lambda, nu);
}

ControlOutcome control_step(const Eigen::Vector3d& x, double t,
                            const CompositeBarrier& cb, const Dynamics& dyn,
                            const WorldView* world, double v_max,
                            const ControlConfig& cfg) {
  ControlOutcome out;
  out.barrier = composite_eval(cb, x, t, world);
  const QpProblem qp = assemble_qp(out.barrier, dyn, x, v_max, cfg.Q, cfg.alpha);
  out.degenerate_gradient = qp.cbf_row.norm() < 1e-12 && out.barrier.grad_x.norm() < 1e-12;
  out.sol = solve_qp(qp);
  if (out.sol) {
    out.u = out.sol->u;
    out.v_real = dyn.drift(x) + dyn.input_map(x) * out.u;
  }
  return out;
}

}  // namespace stlcbf
