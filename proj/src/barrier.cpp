#include "stlcbf/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "stlcbf/errors.hpp"

namespace stlcbf {

namespace {

constexpr double kTimeTol = 1e-9;

}  // namespace

bool CompositeBarrier::any_active() const {
  if (!safety.empty()) return true;
  return std::any_of(tasks.begin(), tasks.end(),
                     [](const TaskBarrier& t) { return t.active; });
}

int CompositeBarrier::active_count() const {
  int n = static_cast<int>(safety.size());
  for (const auto& t : tasks)
    if (t.active) ++n;
  return n;
}

double select_tstar(TaskOp op, const Interval& iv) {
  switch (op) {
    case TaskOp::Eventually:
    case TaskOp::UntilRight:
      return iv.b;
    case TaskOp::Always:
    case TaskOp::UntilLeft:
      return iv.a;
  }
  throw Error("unreachable task op");
}

double compute_hopt(const Predicate& p, bool negated, double h_cap) {
  if (!(h_cap > 0.0)) throw BarrierError("h_cap must be positive");
  if (!negated) {
    switch (p.kind) {
      case Predicate::Kind::BallReach:
        return p.epsilon;  // sup of epsilon - |x - c|
      case Predicate::Kind::Clearance:
      case Predicate::Kind::Halfspace:
        return h_cap;  // sup is unbounded
    }
  } else {
    switch (p.kind) {
      case Predicate::Kind::BallReach:
      case Predicate::Kind::Halfspace:
        return h_cap;
      case Predicate::Kind::Clearance:
        // sup of -(d^2 - d_safe^2) is d_safe^2 at d = 0.
        return p.safe_distance * p.safe_distance;
    }
  }
  throw Error("unreachable predicate kind");
}

double choose_robustness(double h_opt, double t_star_rel, double h_at_origin,
                         std::optional<double> configured) {
  if (!(h_opt > 0.0)) throw BarrierError("h_opt must be positive");
  double upper = h_opt;
  if (t_star_rel <= kTimeTol) {
    // Deadline is now: satisfaction must already be reachable at the origin.
    if (!(h_at_origin > 0.0))
      throw BarrierError(
          "task deadline is immediate but h(x) = " + format_number(h_at_origin) +
          " <= 0: formula unsatisfiable from the current state");
    upper = std::min(upper, h_at_origin);
  }
  if (configured) {
    if (!(*configured > 0.0 && *configured < upper))
      throw BarrierError("configured robustness r = " + format_number(*configured) +
                         " outside the admissible interval (0, " + format_number(upper) +
                         ")");
    return *configured;
  }
  double r = std::min(0.25 * h_opt, 0.05);
  if (r >= upper) r = 0.5 * upper;
  return r;
}

std::pair<double, double> init_gammas(double h_at_origin, double r, double h_opt,
                                      std::optional<double> gamma0_override,
                                      std::optional<double> gamma_inf_override) {
  if (!(r < h_opt)) throw BarrierError("robustness threshold must satisfy r < h_opt");
  double g0;
  if (gamma0_override) {
    g0 = *gamma0_override;
    if (!(g0 < h_at_origin))
      throw BarrierError("gamma0 override " + format_number(g0) +
                         " must be below h at origin (" + format_number(h_at_origin) +
                         ")");
  } else {
    g0 = h_at_origin - (0.1 * std::abs(h_at_origin) + 0.1);
  }
  const double m = std::max(r, g0);
  if (!(m < h_opt))
    throw BarrierError("no admissible gamma_inf: max(r, gamma0) = " + format_number(m) +
                       " >= h_opt = " + format_number(h_opt));
  double ginf;
  if (gamma_inf_override) {
    ginf = *gamma_inf_override;
    if (!(ginf > m && ginf < h_opt))
      throw BarrierError("gamma_inf override " + format_number(ginf) +
                         " outside (max(r, gamma0), h_opt) = (" + format_number(m) +
                         ", " + format_number(h_opt) + ")");
  } else {
    ginf = m + 0.9 * (h_opt - m);
  }
  if (!(ginf >= g0)) throw BarrierError("gamma must be non-decreasing: gamma_inf < gamma0");
  return {g0, ginf};
}

double task_h(const TaskBarrier& tb, const Eigen::VectorXd& x, double t,
              const WorldView* world) {
  const double h = eval_predicate(tb.predicate, x, t, world);
  return tb.negated ? -h : h;
}

TaskBarrier make_task_barrier(const Predicate& pred, bool negated, TaskOp op,
                              const Interval& interval, double t_origin,
                              double t_star_abs, const Eigen::VectorXd& x0,
                              const WorldView* world, const BarrierOverrides& ov,
                              int group, std::string label) {
  TaskBarrier tb;
  tb.predicate = pred;
  tb.negated = negated;
  tb.op = op;
  tb.interval = interval;
  tb.t_star = t_star_abs;
  tb.t_origin = t_origin;
  tb.group = group;
  tb.label = std::move(label);
  const double h0 = task_h(tb, x0, t_origin, world);
  const double h_opt = compute_hopt(pred, negated, ov.h_cap);
  tb.r = choose_robustness(h_opt, t_star_abs - t_origin, h0, ov.r);
  std::tie(tb.gamma0, tb.gamma_inf) = init_gammas(h0, tb.r, h_opt, ov.gamma0, ov.gamma_inf);
  return tb;
}

double gamma(const TaskBarrier& tb, double t) {
  const double tau = t - tb.t_origin;
  if (tau < -kTimeTol) throw BarrierError("gamma queried before the barrier's origin");
  const double T = tb.t_star - tb.t_origin;
  if (T <= 0.0) return tb.gamma_inf;  // deadline not in the future
  if (tau < T) return (tb.gamma_inf - tb.gamma0) / T * tau + tb.gamma0;
  return tb.gamma_inf;
}

double gamma_dot(const TaskBarrier& tb, double t) {
  const double tau = t - tb.t_origin;
  const double T = tb.t_star - tb.t_origin;
  if (T <= 0.0) return 0.0;
  if (tau < T) return (tb.gamma_inf - tb.gamma0) / T;
  return 0.0;  // right derivative at the kink
}

BarrierEval task_barrier_eval(const TaskBarrier& tb, const Eigen::Vector3d& x, double t,
                              const WorldView* world) {
  if (!tb.active) throw BarrierError("evaluating an inactive task barrier");
  BarrierEval be;
  const Eigen::VectorXd xs = x;
  be.value = -gamma(tb, t) + task_h(tb, xs, t, world);
  Eigen::VectorXd g = predicate_gradient(tb.predicate, xs, t, world);
  if (tb.negated) g = -g;
  be.grad_x = g.head<3>();
  double hdot = predicate_time_derivative(tb.predicate, xs, t, world);
  if (tb.negated) hdot = -hdot;
  be.d_dt = -gamma_dot(tb, t) + hdot;
  return be;
}

BarrierEval safety_barrier_eval(const SafetyBarrier& sb, const Eigen::Vector3d& x,
                                double t, const WorldView* world) {
  BarrierEval be;
  const Eigen::VectorXd xs = x;
  be.value = eval_predicate(sb.clearance, xs, t, world);
  be.grad_x = predicate_gradient(sb.clearance, xs, t, world).head<3>();
  be.d_dt = predicate_time_derivative(sb.clearance, xs, t, world);
  return be;
}

BarrierEval composite_eval(const CompositeBarrier& cb, const Eigen::Vector3d& x,
                           double t, const WorldView* world) {
  if (!(cb.eta > 0.0)) throw BarrierError("composite eta must be positive");
  std::vector<BarrierEval> evals;
  evals.reserve(cb.tasks.size() + cb.safety.size());
  for (const auto& tb : cb.tasks)
    if (tb.active) evals.push_back(task_barrier_eval(tb, x, t, world));
  for (const auto& sb : cb.safety) evals.push_back(safety_barrier_eval(sb, x, t, world));
  if (evals.empty()) throw BarrierError("composite barrier has no active members");

  if (evals.size() == 1) return evals.front();

  double bmin = evals.front().value;
  for (const auto& e : evals) bmin = std::min(bmin, e.value);
  // Shifted log-sum-exp keeps the weights well-scaled for any member spread.
  double denom = 0.0;
  BarrierEval out;
  for (const auto& e : evals) denom += std::exp(-cb.eta * (e.value - bmin));
  for (const auto& e : evals) {
    const double w = std::exp(-cb.eta * (e.value - bmin)) / denom;
    out.grad_x += w * e.grad_x;
    out.d_dt += w * e.d_dt;
  }
  out.value = bmin - std::log(denom) / cb.eta;
  return out;
}

std::vector<DeactivationEvent> deactivate_satisfied(CompositeBarrier& cb,
                                                    const Eigen::Vector3d& x, double t,
                                                    const WorldView* world) {
  std::vector<DeactivationEvent> events;
  const Eigen::VectorXd xs = x;

  // Eventually-style members deactivate per conjunction group: every member of
  // the group must clear its threshold at the same sample inside the window.
  std::map<int, bool> group_ok;
  std::map<int, bool> group_present;
  for (const auto& tb : cb.tasks) {
    if (!tb.active) continue;
    if (tb.op != TaskOp::Eventually && tb.op != TaskOp::UntilRight) continue;
    group_present[tb.group] = true;
    const bool in_window =
        t >= tb.interval.a - kTimeTol && t <= tb.interval.b + kTimeTol;
    const bool met = in_window && task_h(tb, xs, t, world) >= tb.r;
    auto it = group_ok.find(tb.group);
    group_ok[tb.group] = (it == group_ok.end() ? met : (it->second && met));
  }

  for (auto& tb : cb.tasks) {
    if (!tb.active) continue;
    switch (tb.op) {
      case TaskOp::Eventually:
      case TaskOp::UntilRight:
        if (group_ok.count(tb.group) && group_ok[tb.group]) {
          tb.active = false;
          events.push_back({tb.label, t, task_h(tb, xs, t, world)});
          if (tb.op == TaskOp::UntilRight) {
            // The left operand only needs to hold until the satisfaction time.
            for (auto& other : cb.tasks)
              if (other.active && other.op == TaskOp::UntilLeft &&
                  other.group == tb.group)
                other.interval.b = t;
          }
        }
        break;
      case TaskOp::Always:
      case TaskOp::UntilLeft:
        if (t > tb.interval.b + kTimeTol) {
          tb.active = false;
          events.push_back({tb.label, t, task_h(tb, xs, t, world)});
        }
        break;
    }
  }
  return events;
}

TaskBarrier retime_task(const TaskBarrier& tb, double t_now, double t_star_new_rel,
                        const Eigen::VectorXd& x, const WorldView* world,
                        const BarrierOverrides& ov) {
  if (!tb.active) throw BarrierError("cannot retime an inactive barrier");
  if (!(t_star_new_rel > 0.0)) throw BarrierError("retime requires t_star_new > 0");
  const double requested = t_now + t_star_new_rel;
  const double t_star = std::min(requested, tb.interval.b);
  const double h_now = task_h(tb, x, t_now, world);
  if (requested > tb.interval.b + kTimeTol) {
    // The plan no longer fits the window; only acceptable if already satisfied.
    const double h_opt = compute_hopt(tb.predicate, tb.negated, ov.h_cap);
    double r_check;
    try {
      r_check = choose_robustness(h_opt, t_star - t_now, h_now, ov.r);
    } catch (const BarrierError&) {
      throw InfeasibleRetime("retime at t=" + format_number(t_now) +
                             " needs deadline " + format_number(requested) +
                             " past window end " + format_number(tb.interval.b) +
                             " and the goal is unreachable now");
    }
    if (h_now < r_check)
      throw InfeasibleRetime(
          "retime at t=" + format_number(t_now) + " needs deadline " +
          format_number(requested) + " past window end " + format_number(tb.interval.b) +
          " while h = " + format_number(h_now) + " < r = " + format_number(r_check));
  }
  return make_task_barrier(tb.predicate, tb.negated, tb.op, tb.interval, t_now, t_star,
                           x, world, ov, tb.group, tb.label);
}

}  // namespace stlcbf
