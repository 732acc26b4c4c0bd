#pragma once

#include <string>

#include "stlcbf/simulator.hpp"

namespace stlcbf {

/// CSV with a commented metadata preamble (formula, dt, horizon, per-task
/// thresholds, obstacle definitions) followed by the header
///   t,x,y,theta,u1,u2,u3,speed,vmax,mode,b,active_task,event
/// All floats carry 9 significant digits.
void write_trajectory_csv(const TrajectoryLog& log, const std::string& path);

/// Inverse of write_trajectory_csv; throws Error on malformed input.
TrajectoryLog read_trajectory_csv(const std::string& path);

/// Plot-ready data files: t/speed/vmax, t/b, and x/y plus obstacle traces.
void write_speed_dat(const TrajectoryLog& log, const std::string& path);
void write_barrier_dat(const TrajectoryLog& log, const std::string& path);
void write_path_dat(const TrajectoryLog& log, const std::string& path);

}  // namespace stlcbf
