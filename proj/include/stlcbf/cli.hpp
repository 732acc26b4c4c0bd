#pragma once

#include <optional>
#include <string>

#include "stlcbf/simulator.hpp"

namespace stlcbf {
namespace cli {

struct RunFlags {
  bool no_retime = false;
  std::optional<double> dt;
  std::optional<unsigned long> seed;
  std::optional<double> eta;
  std::optional<double> kappa;
  std::optional<std::string> out_dir;  // beats PLAN_LOG_DIR, beats cwd
};

/// Runs a scenario and writes trajectory.csv, report.txt, speed.dat,
/// barrier.dat and path.dat into the output directory. Exit 0 only when the
/// formula was satisfied and no safety or speed violation occurred.
int run_command(const std::string& cfg_path, const RunFlags& flags,
                std::ostream& out, std::ostream& err);

/// Recomputes a report from a trajectory CSV alone.
int report_command(const std::string& csv_path, std::ostream& out, std::ostream& err);

/// Validates a scenario file without running it.
int check_command(const std::string& cfg_path, std::ostream& out, std::ostream& err);

/// Runs every *.cfg in a directory; exit 0 only when all runs pass.
int batch_command(const std::string& dir, const RunFlags& flags, std::ostream& out,
                  std::ostream& err);

/// Output directory resolution: --out flag, then PLAN_LOG_DIR, then cwd.
std::string resolve_out_dir(const std::optional<std::string>& flag_dir);

}  // namespace cli
}  // namespace stlcbf
