#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "stlcbf/formula.hpp"
#include "stlcbf/predicate.hpp"

namespace stlcbf {

/// Which temporal operator a task barrier encodes. Until compiles to two
/// coupled members: the left operand held as an always-part until the right
/// operand (an eventually-part) is satisfied.
enum class TaskOp { Eventually, Always, UntilLeft, UntilRight };

/// Optional user overrides for barrier parameters; each is range-checked
/// against its admissible interval at construction.
struct BarrierOverrides {
  std::optional<double> r;
  std::optional<double> gamma0;
  std::optional<double> gamma_inf;
  double h_cap = 1e6;  // stand-in for an unbounded sup of h
};

/// One time-varying barrier b(x,t) = -gamma(t) + h(x) encoding a temporal
/// operator over a predicate. Deadlines are absolute times; gamma's clock
/// starts at t_origin (construction or last retime).
struct TaskBarrier {
  Predicate predicate;
  bool negated = false;
  TaskOp op = TaskOp::Eventually;
  Interval interval;  // absolute task window
  double t_star = 0.0;  // absolute deadline gamma ramps toward
  double gamma0 = 0.0;
  double gamma_inf = 0.0;
  double r = 0.0;  // robustness threshold for satisfaction
  bool active = true;
  double t_origin = 0.0;
  int group = 0;       // members spawned from one conjunction share a group
  std::string label;
};

/// Always-active obstacle clearance member: b(x,t) = h(x,t), gamma == 0.
struct SafetyBarrier {
  Predicate clearance;
  std::string label;
};

/// Value, state gradient and explicit time derivative of a barrier at (x,t).
struct BarrierEval {
  double value = 0.0;
  Eigen::Vector3d grad_x = Eigen::Vector3d::Zero();
  double d_dt = 0.0;
};

/// Smooth-min aggregation of task and safety members with sharpness eta.
struct CompositeBarrier {
  double eta = 10.0;
  std::vector<TaskBarrier> tasks;
  std::vector<SafetyBarrier> safety;

  bool any_active() const;
  int active_count() const;
};

struct DeactivationEvent {
  std::string label;
  double time;
  double h_value;
};

/// Deadline selection: eventually ramps to the window end, always to its start.
double select_tstar(TaskOp op, const Interval& iv);

/// sup_x h(x); finite for a ball (epsilon), capped at h_cap otherwise.
double compute_hopt(const Predicate& p, bool negated, double h_cap);

/// Robustness threshold selection. t_star_rel is the deadline relative to the
/// barrier's clock origin. Defaults to min(0.25*h_opt, 0.05) clipped into the
/// admissible open interval; a configured value outside it throws.
double choose_robustness(double h_opt, double t_star_rel, double h_at_origin,
                         std::optional<double> configured);

/// Default gamma endpoints: gamma0 = h0 - (0.1*|h0| + 0.1),
/// gamma_inf = m + 0.9*(h_opt - m) with m = max(r, gamma0). Overrides are
/// validated against gamma0 < h0 and gamma_inf in (max(r, gamma0), h_opt).
std::pair<double, double> init_gammas(double h_at_origin, double r, double h_opt,
                                      std::optional<double> gamma0_override = {},
                                      std::optional<double> gamma_inf_override = {});

/// Builds a task barrier whose deadline curve starts at (x0, t_origin).
TaskBarrier make_task_barrier(const Predicate& pred, bool negated, TaskOp op,
                              const Interval& interval, double t_origin,
                              double t_star_abs, const Eigen::VectorXd& x0,
                              const WorldView* world, const BarrierOverrides& ov,
                              int group = 0, std::string label = {});

/// Piecewise-linear deadline curve; constant gamma_inf once the deadline passed.
double gamma(const TaskBarrier& tb, double t);

/// Slope of gamma; zero on the flat piece and at the kink (right derivative).
double gamma_dot(const TaskBarrier& tb, double t);

/// Effective h of a member (sign-flipped for negated predicates).
double task_h(const TaskBarrier& tb, const Eigen::VectorXd& x, double t,
              const WorldView* world);

BarrierEval task_barrier_eval(const TaskBarrier& tb, const Eigen::Vector3d& x, double t,
                              const WorldView* world);

BarrierEval safety_barrier_eval(const SafetyBarrier& sb, const Eigen::Vector3d& x,
                                double t, const WorldView* world);

/// Softmin of the active members; value under-approximates the true min, the
/// gradient and time derivative are the softmin-weighted combinations.
/// Throws BarrierError when no member is active.
BarrierEval composite_eval(const CompositeBarrier& cb, const Eigen::Vector3d& x,
                           double t, const WorldView* world);

/// Switching: an eventually member (or conjunction group) whose h reached r
/// inside its window is deactivated; always members expire past their window.
/// Safety members never deactivate. UntilRight satisfaction shortens the
/// coupled UntilLeft window to the satisfaction time.
std::vector<DeactivationEvent> deactivate_satisfied(CompositeBarrier& cb,
                                                    const Eigen::Vector3d& x, double t,
                                                    const WorldView* world);

/// Rebuilds a barrier for the same task with a fresh clock at t_now and
/// deadline min(t_now + t_star_new_rel, interval.b). Throws InfeasibleRetime
/// when the requested deadline was clamped by the window end while the goal
/// is still unmet (h < r).
TaskBarrier retime_task(const TaskBarrier& tb, double t_now, double t_star_new_rel,
                        const Eigen::VectorXd& x, const WorldView* world,
                        const BarrierOverrides& ov);

}  // namespace stlcbf
