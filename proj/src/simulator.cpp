#include "stlcbf/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stlcbf/report.hpp"

namespace stlcbf {

namespace {

constexpr double kTol = 1e-9;

void flatten_psi(const Formula& f, std::vector<std::pair<Predicate, bool>>& out) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return;
    case Formula::Kind::Pred:
      out.emplace_back(f.predicate(), false);
      return;
    case Formula::Kind::NotPred:
      out.emplace_back(f.predicate(), true);
      return;
    case Formula::Kind::And:
      flatten_psi(f.left(), out);
      flatten_psi(f.right(), out);
      return;
    default:
      throw Error("temporal operator inside a predicate-class body");
  }
}

std::optional<Eigen::Vector2d> first_ball_center(
    const std::vector<std::pair<Predicate, bool>>& preds) {
  for (const auto& [p, neg] : preds)
    if (!neg && p.kind == Predicate::Kind::BallReach) return p.center;
  return std::nullopt;
}

std::string fmt(double v) { return format_number(v); }

}  // namespace

std::vector<TaskSpec> schedule_tasks(const Formula& f,
                                     std::vector<std::string>* warnings) {
  std::vector<TaskSpec> out;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula cur = stack.back();
    stack.pop_back();
    switch (cur.kind()) {
      case Formula::Kind::And:
        stack.push_back(cur.right());
        stack.push_back(cur.left());
        break;
      case Formula::Kind::True:
        break;
      case Formula::Kind::Pred:
      case Formula::Kind::NotPred:
        throw Error(
            "top-level predicate without a temporal operator cannot be scheduled");
      case Formula::Kind::Eventually:
      case Formula::Kind::Always: {
        TaskSpec spec;
        spec.kind = cur.kind() == Formula::Kind::Eventually ? TaskSpec::Kind::Eventually
                                                            : TaskSpec::Kind::Always;
        spec.window = cur.interval();
        flatten_psi(cur.left(), spec.preds);
        spec.goal = first_ball_center(spec.preds);
        out.push_back(std::move(spec));
        break;
      }
      case Formula::Kind::Until: {
        TaskSpec spec;
        spec.kind = TaskSpec::Kind::Until;
        spec.window = cur.interval();
        flatten_psi(cur.right(), spec.preds);
        flatten_psi(cur.left(), spec.until_left);
        spec.goal = first_ball_center(spec.preds);
        out.push_back(std::move(spec));
        break;
      }
    }
  }
  // Reachability goals run sequentially ordered by window start; invariants
  // stay concurrent for their whole window.
  std::stable_sort(out.begin(), out.end(), [](const TaskSpec& a, const TaskSpec& b) {
    const bool sa = a.kind != TaskSpec::Kind::Always;
    const bool sb = b.kind != TaskSpec::Kind::Always;
    if (sa != sb) return sa;
    return a.window.a < b.window.a;
  });
  int seq_i = 0, always_i = 0;
  for (auto& spec : out) {
    if (spec.kind == TaskSpec::Kind::Always)
      spec.name = "hold" + std::to_string(++always_i);
    else
      spec.name = "task" + std::to_string(++seq_i);
  }
  if (warnings) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = i + 1; j < out.size(); ++j) {
        const auto& a = out[i];
        const auto& b = out[j];
        if (a.kind == TaskSpec::Kind::Always || b.kind == TaskSpec::Kind::Always)
          continue;
        const bool overlap = b.window.a < a.window.b - kTol;
        const bool different_goals =
            a.goal && b.goal && (*a.goal - *b.goal).norm() > kTol;
        if (overlap && different_goals)
          warnings->push_back("tasks " + a.name + " and " + b.name +
                              " have overlapping windows with different goals; "
                              "concurrent goals degrade the smooth-min");
      }
    }
  }
  return out;
}

Signal TrajectoryLog::to_signal() const {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  times.reserve(rows.size());
  states.reserve(rows.size());
  for (const auto& r : rows) {
    times.push_back(r.t);
    states.push_back(r.x);
  }
  return Signal(std::move(times), std::move(states));
}

namespace {

/// All mutable state of one closed-loop run.
struct Runner {
  const ScenarioConfig& cfg;
  World world;
  Dynamics dyn;
  TrajectoryLog log;
  CompositeBarrier comp;
  Replanner rp;
  ControlConfig ctrl;
  BarrierOverrides ov;

  std::vector<TaskSpec> seq;
  std::vector<TaskSpec> always;

  Eigen::Vector3d x;
  double t = 0.0;
  int active = -1;   // index into seq
  std::size_t next = 0;
  double prev_sat = 0.0;
  double prev_vmax = -1.0;
  bool have_prev_vmax = false;
  double active_vavg = 0.0;
  std::vector<std::string> events;

  explicit Runner(const ScenarioConfig& c)
      : cfg(c), world(c.world), dyn(c.dynamics), rp(c.replan, c.sim.retime) {
    if (!cfg.formula) throw ConfigError("scenario has no parsed formula");
    ctrl.Q = cfg.barrier.q_diag.asDiagonal();
    ctrl.alpha = AlphaFn{cfg.barrier.kappa};
    ov = cfg.barrier.overrides();
    comp.eta = cfg.barrier.eta;
    x = cfg.sim.start;

    log.formula_text = cfg.formula_text;
    log.dt = cfg.sim.dt;
    log.horizon = horizon(*cfg.formula);
    log.obstacles = world.obstacles;

    for (auto spec : schedule_tasks(*cfg.formula, &log.warnings)) {
      rename_with_waypoint(spec);
      (spec.kind == TaskSpec::Kind::Always ? always : seq).push_back(std::move(spec));
    }

    for (const auto& o : world.obstacles) {
      SafetyBarrier sb;
      sb.clearance =
          Predicate::clearance(o.id, o.radius + cfg.barrier.safety_margin);
      sb.label = "safety_" + o.id;
      comp.safety.push_back(std::move(sb));
    }
    // Invariant ("always") members exist from the start of the run.
    for (std::size_t i = 0; i < always.size(); ++i) {
      const auto& spec = always[i];
      const int group = 1000 + static_cast<int>(i);
      for (const auto& [p, neg] : spec.preds)
        comp.tasks.push_back(make_task_barrier(
            p, neg, TaskOp::Always, spec.window, 0.0,
            select_tstar(TaskOp::Always, spec.window), x, &world,
            hold_overrides(p, neg, spec.window.a - 0.0), group, spec.name));
    }
    log.tasks.resize(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
      log.tasks[i].name = seq[i].name;
      log.tasks[i].window = seq[i].window;
    }
  }

  void rename_with_waypoint(TaskSpec& spec) const {
    if (!spec.goal) return;
    for (const auto& [name, pos] : cfg.waypoints) {
      if ((*spec.goal - pos).norm() < 1e-9) {
        spec.name = name;
        return;
      }
    }
  }

  double dist_to_goal(const TaskSpec& spec) const {
    return spec.goal ? (x.head<2>() - *spec.goal).norm() : 0.0;
  }

  [[noreturn]] void abort_run(const std::string& why) {
    log.aborted = true;
    log.abort_reason = why;
    throw Error(why);  // unwinds to run(); row already buffered by caller
  }

  /// Rebuilds every member of the active task's group with a fresh clock.
  void retime_active(double rel, ReplanTrigger trigger) {
    TaskSpec& spec = seq[active];
    const double rel_eff = std::max(rel, cfg.sim.dt);
    double new_tstar = 0.0;
    for (auto& tb : comp.tasks) {
      if (tb.group != active || !tb.active) continue;
      if (tb.op == TaskOp::UntilLeft || tb.op == TaskOp::Always) continue;
      TaskBarrier fresh = retime_task(tb, t, rel_eff, x, &world, with_stable_r(tb));
      new_tstar = fresh.t_star;
      tb = fresh;
    }
    ++log.replan_count;
    events.push_back("replan[" + std::string(replan_trigger_name(trigger)) + "]:" +
                     spec.name + ":t*=" + fmt(new_tstar));
  }

  /// Keeps a member's satisfaction threshold stable across retimes so offline
  /// recomputation from the log sees one r per task.
  BarrierOverrides with_stable_r(const TaskBarrier& tb) const {
    BarrierOverrides o = ov;
    o.r = tb.r;
    return o;
  }

  /// Holding members (always / until-left) plateau just above r, not at the
  /// 0.9-fraction of h_opt, which is meaningless for capped-unbounded suprema.
  BarrierOverrides hold_overrides(const Predicate& p, bool neg, double t_star_rel) {
    BarrierOverrides o = ov;
    if (o.gamma0 && o.gamma_inf) return o;
    Eigen::VectorXd xs = x;
    const double h0 = (neg ? -1.0 : 1.0) * eval_predicate(p, xs, t, &world);
    const double h_opt = compute_hopt(p, neg, o.h_cap);
    const double r = choose_robustness(h_opt, t_star_rel, h0, o.r);
    if (!o.gamma0) o.gamma0 = std::min(h0, r) - 1.0;
    if (!o.gamma_inf) o.gamma_inf = r + 0.05 * std::min(1.0, h_opt - r);
    return o;
  }

  void activate_task(double vm) {
    TaskSpec& spec = seq[active];
    events.push_back("start:" + spec.name);
    const double b = spec.window.b;
    double tstar_abs = b;
    if (rp.enabled() && spec.goal) {
      rp.reset_counter();
      const double rel = std::max(rp.tstar_for(dist_to_goal(spec), vm), cfg.sim.dt);
      tstar_abs = std::min(t + rel, b);
      ++log.replan_count;
      events.push_back("plan:" + spec.name + ":t*=" + fmt(tstar_abs));
    }
    const int group = active;
    const TaskOp op =
        spec.kind == TaskSpec::Kind::Until ? TaskOp::UntilRight : TaskOp::Eventually;
    for (const auto& [p, neg] : spec.preds)
      comp.tasks.push_back(make_task_barrier(p, neg, op, spec.window, t, tstar_abs, x,
                                             &world, ov, group, spec.name));
    for (const auto& [p, neg] : spec.until_left)
      comp.tasks.push_back(make_task_barrier(
          p, neg, TaskOp::UntilLeft, spec.window, t,
          select_tstar(TaskOp::UntilLeft, spec.window), x, &world,
          hold_overrides(p, neg, spec.window.a - t), group, spec.name + "_hold"));
    log.tasks[active].started_at = t;
    log.tasks[active].thresholds.clear();
    for (const auto& tb : comp.tasks)
      if (tb.group == active && tb.active &&
          (tb.op == TaskOp::Eventually || tb.op == TaskOp::UntilRight))
        log.tasks[active].thresholds.push_back(tb.r);
    if (b > t + kTol) {
      active_vavg = dist_to_goal(spec) / (b - t);
      if (vm < active_vavg - kTol)
        events.push_back("step1:vavg=" + fmt(active_vavg) + ">vmax=" + fmt(vm));
    } else {
      active_vavg = 0.0;
    }
  }

  bool task_satisfied(int group) const {
    for (const auto& tb : comp.tasks)
      if (tb.group == group && tb.active &&
          (tb.op == TaskOp::Eventually || tb.op == TaskOp::UntilRight))
        return false;
    return true;
  }

  bool always_all_expired() const {
    for (const auto& tb : comp.tasks)
      if (tb.group >= 1000 && tb.active) return false;
    return true;
  }

  void push_row(const Eigen::Vector3d& u, double speed, double vm, ZoneMode mode,
                double b, int task_id) {
    LogRow row;
    row.t = t;
    row.x = x;
    row.u = u;
    row.speed = speed;
    row.vmax = vm;
    row.mode = mode;
    row.b = b;
    row.active_task = task_id;
    std::ostringstream ev;
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (i) ev << ';';
      ev << events[i];
    }
    row.events = ev.str();
    log.rows.push_back(std::move(row));
  }

  double composite_or_zero() {
    if (!comp.any_active()) return 0.0;
    return composite_eval(comp, x, t, &world).value;
  }

  void run() {
    const double dt = cfg.sim.dt;
    for (long k = 0;; ++k) {
      t = static_cast<double>(k) * dt;
      events.clear();

      const auto [vm, mode] = world.vmax_at(x.head<2>(), t);

      // Switching and activation to a fixpoint: satisfaction is checked on the
      // freshly integrated state before any control work this tick, and a task
      // whose goal is already met completes in the tick it was activated.
      bool activated_now = false;
      for (bool changed = true; changed;) {
        changed = false;
        for (const auto& ev : deactivate_satisfied(comp, x, t, &world)) {
          const bool is_sat = [&] {
            for (const auto& tb : comp.tasks)
              if (tb.label == ev.label &&
                  (tb.op == TaskOp::Always || tb.op == TaskOp::UntilLeft))
                return false;
            return true;
          }();
          events.push_back((is_sat ? "sat:" : "expire:") + ev.label);
          changed = true;
        }
        if (active >= 0 && task_satisfied(active)) {
          auto& summary = log.tasks[active];
          summary.satisfied = true;
          summary.satisfied_at = t;
          summary.duration = t - summary.started_at;
          prev_sat = t;
          active = -1;
          changed = true;
          if (next < seq.size()) {
            const double act_t = std::max(prev_sat, seq[next].window.a);
            if (act_t > t + kTol) events.push_back("pause:until=" + fmt(act_t));
          }
        }
        if (active < 0 && next < seq.size() &&
            t + kTol >= std::max(prev_sat, seq[next].window.a)) {
          active = static_cast<int>(next);
          ++next;
          try {
            activate_task(vm);
          } catch (const Error& e) {
            push_row(Eigen::Vector3d::Zero(), 0.0, vm, mode, 0.0, active);
            abort_run(std::string("task activation failed: ") + e.what());
          }
          activated_now = true;
          changed = true;
        }
      }

      const bool seq_done = active < 0 && next >= seq.size();
      const bool done = seq_done && always_all_expired();
      const bool timeout = t > log.horizon + kTol;
      if (done || timeout) {
        push_row(Eigen::Vector3d::Zero(), 0.0, vm, mode, composite_or_zero(), -1);
        break;
      }

      if (have_prev_vmax && std::abs(vm - prev_vmax) > kTol && !activated_now &&
          active >= 0) {
        events.push_back("vmax:" + fmt(prev_vmax) + ">" + fmt(vm));
        if (rp.enabled() && seq[active].goal) {
          rp.reset_counter();
          try {
            retime_active(rp.tstar_for(dist_to_goal(seq[active]), vm),
                          ReplanTrigger::VmaxChange);
          } catch (const Error& e) {
            push_row(Eigen::Vector3d::Zero(), 0.0, vm, mode, 0.0, active);
            abort_run(std::string("retime on cap change failed: ") + e.what());
          }
        }
        if (active_vavg > 0.0 && vm < active_vavg - kTol)
          events.push_back("step1:vavg=" + fmt(active_vavg) + ">vmax=" + fmt(vm));
      }
      prev_vmax = vm;
      have_prev_vmax = true;

      Eigen::Vector3d u = Eigen::Vector3d::Zero();
      double speed = 0.0;
      double b_logged = 0.0;
      if (comp.any_active()) {
        bool solved = false;
        for (int attempt = 0; attempt <= cfg.sim.max_retries; ++attempt) {
          ControlOutcome out = control_step(x, t, comp, dyn, &world, vm, ctrl);
          if (out.degenerate_gradient) events.push_back("degenerate_grad");
          if (out.sol) {
            u = out.u;
            speed = out.v_real.head<2>().norm();
            b_logged = out.barrier.value;
            solved = true;
            break;
          }
          ++log.infeasible_count;
          events.push_back("infeasible:" + std::to_string(attempt + 1));
          if (!rp.enabled()) {
            push_row(u, speed, vm, mode, out.barrier.value, active);
            abort_run("qp infeasible at t=" + fmt(t) + " with replanning disabled");
          }
          if (active < 0 || !seq[active].goal) {
            push_row(u, speed, vm, mode, out.barrier.value, active);
            abort_run("qp infeasible at t=" + fmt(t) + " with no retimable task");
          }
          rp.bump_counter();
          try {
            retime_active(rp.tstar_for(dist_to_goal(seq[active]), vm),
                          ReplanTrigger::QpInfeasible);
          } catch (const Error& e) {
            push_row(u, speed, vm, mode, out.barrier.value, active);
            abort_run(std::string("retime after infeasibility failed: ") + e.what());
          }
        }
        if (!solved) {
          push_row(u, speed, vm, mode, composite_or_zero(), active);
          abort_run("qp infeasible after " + std::to_string(cfg.sim.max_retries) +
                    " retimes at t=" + fmt(t));
        }
      }

      push_row(u, speed, vm, mode, b_logged, active);
      x = integrate_step(x, u, dyn, dt);
    }
  }
};

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
  Runner runner(cfg);
  try {
    runner.run();
  } catch (const Error&) {
    if (!runner.log.aborted) throw;  // only swallow the abort signal
  }
  RunResult result;
  result.log = std::move(runner.log);
  result.report = build_report(result.log);
  return result;
}

}  // namespace stlcbf
