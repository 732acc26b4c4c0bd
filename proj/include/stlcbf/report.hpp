#pragma once

#include <string>

#include "stlcbf/simulator.hpp"

namespace stlcbf {

/// Recomputes the full report from the logged rows and metadata alone: the
/// verdict comes from offline monitoring of the logged signal, task
/// satisfaction times from rescanning the samples against each task's
/// thresholds, and the counters from the event tokens. Works identically on
/// in-memory logs and logs parsed back from CSV.
Report build_report(const TrajectoryLog& log);

std::string format_report(const Report& report, const std::string& title);

/// 0 when the formula was satisfied with no safety or speed violation.
int report_exit_code(const Report& report);

}  // namespace stlcbf
