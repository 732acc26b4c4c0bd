#include "stlcbf/replanner.hpp"

#include "stlcbf/formula.hpp"

namespace stlcbf {

const char* replan_trigger_name(ReplanTrigger t) {
  switch (t) {
    case ReplanTrigger::TaskStart: return "task_start";
    case ReplanTrigger::VmaxChange: return "vmax_change";
    case ReplanTrigger::QpInfeasible: return "qp_infeasible";
  }
  return "?";
}

double average_velocity(const Eigen::Vector3d& x, const Eigen::Vector2d& goal,
                        double t_star_remaining) {
  if (!(t_star_remaining > 0.0))
    throw Error("average velocity requires positive remaining time");
  return (x.head<2>() - goal).norm() / t_star_remaining;
}

double compute_tstar_new(double delta_s, double v_max, const ReplanParams& p, int pc) {
  if (delta_s < 0.0) throw Error("remaining distance must be nonnegative");
  if (!(v_max > 0.0)) throw Error("v_max must be positive");
  const double weight = p.p_i - p.p_r * pc;
  if (weight <= p.floor)
    throw ReplanExhausted("replanning exhausted: effective weight " +
                          format_number(weight) + " fell to the floor " +
                          format_number(p.floor) + " after " + std::to_string(pc) +
                          " failures");
  return delta_s / (weight * v_max);
}

}  // namespace stlcbf
