#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stlcbf/qp.hpp"
#include "stlcbf/scenario.hpp"
#include "stlcbf/semantics.hpp"

namespace stlcbf {

/// One scheduled unit of work extracted from the formula's conjunction.
struct TaskSpec {
  enum class Kind { Eventually, Always, Until };
  Kind kind = Kind::Eventually;
  Interval window;
  std::vector<std::pair<Predicate, bool>> preds;       // body (negated flag)
  std::vector<std::pair<Predicate, bool>> until_left;  // Until only
  std::optional<Eigen::Vector2d> goal;  // first ball center, replanning target
  std::string name;
};

/// Flattens a top-level conjunction into sequential eventually/until tasks
/// (ordered by window start) plus concurrently active always specs. Emits a
/// warning when two sequential tasks with different goals overlap in time.
std::vector<TaskSpec> schedule_tasks(const Formula& f,
                                     std::vector<std::string>* warnings = nullptr);

struct LogRow {
  double t = 0.0;
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  Eigen::Vector3d u = Eigen::Vector3d::Zero();
  double speed = 0.0;
  double vmax = 0.0;
  ZoneMode mode = ZoneMode::Standard;
  double b = 0.0;
  int active_task = -1;
  std::string events;
};

struct TaskSummary {
  std::string name;
  Interval window;
  std::vector<double> thresholds;  // satisfaction threshold r per body predicate
  bool satisfied = false;
  double started_at = 0.0;    // movement start: max(window.a, previous satisfied)
  double satisfied_at = 0.0;  // valid when satisfied
  double duration = 0.0;      // satisfied_at - started_at
};

struct TrajectoryLog {
  std::vector<LogRow> rows;
  std::vector<TaskSummary> tasks;
  std::string formula_text;
  double dt = 0.0;
  double horizon = 0.0;
  std::vector<Obstacle> obstacles;
  std::vector<std::string> warnings;
  int replan_count = 0;
  int infeasible_count = 0;
  bool aborted = false;
  std::string abort_reason;

  Signal to_signal() const;
};

struct ReportTaskRow {
  std::string name;
  Interval window;
  bool satisfied = false;
  double satisfied_at = 0.0;
  double duration = 0.0;
};

/// Timing table plus the independently monitored verdict.
struct Report {
  std::vector<ReportTaskRow> tasks;
  double movement_time = 0.0;   // sum of task durations (pauses excluded)
  double wall_clock = 0.0;      // last logged timestamp
  int replan_count = 0;
  int infeasible_count = 0;
  Verdict verdict = Verdict::Undetermined;
  std::vector<std::string> violations;  // safety/speed findings, empty when clean
  bool aborted = false;
  std::string abort_reason;
};

struct RunResult {
  TrajectoryLog log;
  Report report;
};

/// Closed-loop run at fixed dt: obstacle update, cap lookup (with retime on
/// cap changes), composite barrier evaluation, QP step (with bounded
/// infeasibility retries), Euler integration, switching and logging.
/// Terminates at the formula horizon or once every task is satisfied.
RunResult run_scenario(const ScenarioConfig& cfg);

}  // namespace stlcbf
