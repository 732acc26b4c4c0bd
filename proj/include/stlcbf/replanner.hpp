#pragma once

#include <Eigen/Core>

#include "stlcbf/errors.hpp"

namespace stlcbf {

/// Deadline-weighting parameters. The effective weight p_i - p_r * p_c shrinks
/// each time the QP fails; once it reaches the floor the task is declared
/// unreachable under the current caps.
struct ReplanParams {
  double p_i = 0.9;    // initial percentage, 0.5 <= p_i < 1
  double p_r = 0.025;  // reduction percentage, 0 < p_r < 0.2
  double floor = 0.1;  // minimum allowed effective weight
};

enum class ReplanTrigger { TaskStart, VmaxChange, QpInfeasible };

struct ReplanEvent {
  double time = 0.0;
  ReplanTrigger trigger = ReplanTrigger::TaskStart;
  double old_tstar = 0.0;  // absolute
  double new_tstar = 0.0;  // absolute, after window clamping
  double delta_s = 0.0;
  double v_max = 0.0;
  double weight = 0.0;
  int pc = 0;
};

const char* replan_trigger_name(ReplanTrigger t);

/// Straight-line pace the deadline implies: |x_pos - goal| / remaining time.
double average_velocity(const Eigen::Vector3d& x, const Eigen::Vector2d& goal,
                        double t_star_remaining);

/// Relaxed deadline delta_s / ((p_i - p_r*p_c) * v_max); strictly increasing
/// in p_c. Throws ReplanExhausted once the weight falls to the floor.
double compute_tstar_new(double delta_s, double v_max, const ReplanParams& p, int pc);

/// Percentage-counter bookkeeping: the counter resets whenever the cap context
/// changes (task start, v_max change) and grows on QP infeasibility.
class Replanner {
 public:
  explicit Replanner(ReplanParams params, bool enabled = true)
      : params_(params), enabled_(enabled) {}

  bool enabled() const { return enabled_; }
  int pc() const { return pc_; }
  double weight() const { return params_.p_i - params_.p_r * pc_; }
  const ReplanParams& params() const { return params_; }

  /// Relative deadline for the current counter value.
  double tstar_for(double delta_s, double v_max) const {
    return compute_tstar_new(delta_s, v_max, params_, pc_);
  }

  void reset_counter() { pc_ = 0; }
  void bump_counter() { ++pc_; }

 private:
  ReplanParams params_;
  bool enabled_;
  int pc_ = 0;
};

}  // namespace stlcbf
