#include "stlcbf/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "stlcbf/parser.hpp"

namespace stlcbf {

namespace {

constexpr double kTol = 1e-9;

int count_token(const TrajectoryLog& log, const std::string& needle) {
  int n = 0;
  for (const auto& row : log.rows) {
    std::size_t pos = 0;
    while ((pos = row.events.find(needle, pos)) != std::string::npos) {
      ++n;
      pos += needle.size();
    }
  }
  return n;
}

}  // namespace

Report build_report(const TrajectoryLog& log) {
  Report rep;
  rep.aborted = log.aborted;
  rep.abort_reason = log.abort_reason;
  if (log.rows.empty()) {
    rep.verdict = Verdict::Undetermined;
    return rep;
  }
  rep.wall_clock = log.rows.back().t;
  rep.replan_count = count_token(log, "plan:") + count_token(log, "replan[");
  rep.infeasible_count = count_token(log, "infeasible:");

  World world;
  world.obstacles = log.obstacles;
  const Signal sig = log.to_signal();

  // Verdict by offline monitoring, independent of controller bookkeeping.
  std::optional<Formula> formula;
  try {
    formula = parse_formula(log.formula_text);
    rep.verdict = monitor_verdict(*formula, sig, 0.0, &world);
  } catch (const Error& e) {
    rep.verdict = Verdict::Undetermined;
    rep.violations.push_back(std::string("formula unusable: ") + e.what());
  }

  // Task rows: rescan the samples with each task's thresholds in sequence.
  if (formula) {
    std::vector<TaskSpec> seq;
    try {
      for (auto& spec : schedule_tasks(*formula))
        if (spec.kind != TaskSpec::Kind::Always) seq.push_back(std::move(spec));
    } catch (const Error&) {
      seq.clear();
    }
    double prev_sat = 0.0;
    bool chain_ok = true;
    for (std::size_t k = 0; k < seq.size(); ++k) {
      const TaskSpec& spec = seq[k];
      ReportTaskRow row;
      row.name = k < log.tasks.size() ? log.tasks[k].name : spec.name;
      row.window = spec.window;
      std::vector<double> rs;
      if (k < log.tasks.size()) rs = log.tasks[k].thresholds;
      if (chain_ok) {
        const double start = std::max(prev_sat, spec.window.a);
        for (const auto& lr : log.rows) {
          if (lr.t + kTol < start || lr.t + kTol < spec.window.a) continue;
          if (lr.t > spec.window.b + kTol) break;
          bool all = true;
          for (std::size_t i = 0; i < spec.preds.size(); ++i) {
            const auto& [p, neg] = spec.preds[i];
            const double r = i < rs.size() ? rs[i] : 0.0;
            double h = eval_predicate(p, Eigen::VectorXd(lr.x), lr.t, &world);
            if (neg) h = -h;
            if (h < r) {
              all = false;
              break;
            }
          }
          if (all) {
            row.satisfied = true;
            row.satisfied_at = lr.t;
            row.duration = lr.t - start;
            prev_sat = lr.t;
            break;
          }
        }
      }
      if (!row.satisfied) chain_ok = false;
      rep.tasks.push_back(std::move(row));
    }
  }
  for (const auto& row : rep.tasks)
    if (row.satisfied) rep.movement_time += row.duration;

  // Safety and speed compliance, directly from the log.
  int speed_viol = 0, safety_viol = 0;
  for (const auto& lr : log.rows) {
    if (lr.speed > lr.vmax + 1e-6) {
      if (speed_viol++ == 0)
        rep.violations.push_back("speed violation at t=" + format_number(lr.t) + ": " +
                                 format_number(lr.speed) + " > vmax " +
                                 format_number(lr.vmax));
    }
    for (const auto& o : log.obstacles) {
      const Eigen::Vector2d p = obstacle_state(o, lr.t).first;
      const double d = (lr.x.head<2>() - p).norm();
      if (d < o.radius - 1e-9) {
        if (safety_viol++ == 0)
          rep.violations.push_back("obstacle penetration at t=" + format_number(lr.t) +
                                   ": distance " + format_number(d) + " < radius " +
                                   format_number(o.radius) + " (" + o.id + ")");
      }
    }
  }
  if (speed_viol > 1)
    rep.violations.push_back("(" + std::to_string(speed_viol) + " speed violations total)");
  if (safety_viol > 1)
    rep.violations.push_back("(" + std::to_string(safety_viol) +
                             " penetration steps total)");
  return rep;
}

namespace {

std::string f2(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string format_report(const Report& rep, const std::string& title) {
  std::ostringstream os;
  os << "report: " << title << "\n";
  os << "verdict: " << verdict_name(rep.verdict);
  if (rep.aborted) os << " (run aborted: " << rep.abort_reason << ")";
  os << "\n\n";
  os << std::left << std::setw(16) << "task" << std::setw(16) << "window"
     << std::setw(16) << "stl constraint" << std::setw(16) << "satisfied at"
     << std::setw(14) << "duration" << "\n";
  double total_budget = 0.0;
  for (const auto& row : rep.tasks) {
    std::ostringstream win;
    win << "[" << format_number(row.window.a) << ", " << format_number(row.window.b)
        << "]";
    os << std::left << std::setw(16) << row.name << std::setw(16) << win.str()
       << std::setw(16) << format_number(row.window.length());
    if (row.satisfied) {
      os << std::setw(16) << f2(row.satisfied_at) << std::setw(14) << f2(row.duration);
    } else {
      os << std::setw(16) << "-" << std::setw(14) << "unsatisfied";
    }
    os << "\n";
    total_budget = std::max(total_budget, row.window.b);
  }
  os << std::left << std::setw(16) << "total" << std::setw(16) << "" << std::setw(16)
     << format_number(total_budget) << std::setw(16) << "" << f2(rep.movement_time)
     << "\n\n";
  os << "movement time: " << f2(rep.movement_time)
     << " s, wall clock: " << f2(rep.wall_clock) << " s\n";
  os << "replans: " << rep.replan_count
     << ", infeasible steps: " << rep.infeasible_count << "\n";
  if (!rep.violations.empty()) {
    os << "violations:\n";
    for (const auto& v : rep.violations) os << "  - " << v << "\n";
  }
  return os.str();
}

int report_exit_code(const Report& rep) {
  const bool ok = rep.verdict == Verdict::Satisfied && rep.violations.empty() &&
                  !rep.aborted;
  return ok ? 0 : 1;
}

}  // namespace stlcbf
