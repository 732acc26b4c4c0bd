#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stlcbf/barrier.hpp"
#include "stlcbf/dynamics.hpp"
#include "stlcbf/formula.hpp"
#include "stlcbf/replanner.hpp"
#include "stlcbf/world.hpp"

namespace stlcbf {

struct BarrierConfig {
  double eta = 10.0;
  double kappa = 1.0;
  double h_cap = 1e6;
  std::optional<double> r;
  std::optional<double> gamma0;
  std::optional<double> gamma_inf;
  Eigen::Vector3d q_diag = Eigen::Vector3d::Ones();
  double safety_margin = 0.25;  // d_safe = obstacle radius + margin

  BarrierOverrides overrides() const { return {r, gamma0, gamma_inf, h_cap}; }
};

struct SimConfig {
  double dt = 0.01;
  unsigned long seed = 0;
  Eigen::Vector3d start = Eigen::Vector3d::Zero();
  int max_retries = 5;
  bool retime = true;
};

/// Fully validated scenario: formula (waypoint macros expanded), world,
/// dynamics and all controller parameters.
struct ScenarioConfig {
  std::string name;
  std::string formula_text;
  std::optional<Formula> formula;
  std::map<std::string, Eigen::Vector2d> waypoints;
  World world;
  Dynamics dynamics;
  BarrierConfig barrier;
  ReplanParams replan;
  SimConfig sim;
  std::vector<std::string> warnings;
};

/// Loads and validates a scenario file (JSON document with sections formula,
/// waypoints, zones, obstacles, dynamics, barrier, replan, sim). Throws
/// ConfigError listing every violated constraint.
ScenarioConfig load_scenario(const std::string& path);

/// Same, from an in-memory document.
ScenarioConfig parse_scenario(const std::string& json_text, const std::string& name);

}  // namespace stlcbf
