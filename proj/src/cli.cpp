#include "stlcbf/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "stlcbf/report.hpp"
#include "stlcbf/trajectory_io.hpp"

namespace stlcbf {
namespace cli {

namespace fs = std::filesystem;

std::string resolve_out_dir(const std::optional<std::string>& flag_dir) {
  if (flag_dir) return *flag_dir;
  if (const char* env = std::getenv("PLAN_LOG_DIR"); env && *env) return env;
  return ".";
}

namespace {

ScenarioConfig load_with_flags(const std::string& cfg_path, const RunFlags& flags) {
  ScenarioConfig cfg = load_scenario(cfg_path);
  if (flags.no_retime) cfg.sim.retime = false;
  if (flags.dt) {
    if (!(*flags.dt > 0.0)) throw ConfigError("--dt must be > 0");
    cfg.sim.dt = *flags.dt;
  }
  if (flags.seed) cfg.sim.seed = *flags.seed;
  if (flags.eta) {
    if (!(*flags.eta > 0.0)) throw ConfigError("--eta must be > 0");
    cfg.barrier.eta = *flags.eta;
  }
  if (flags.kappa) {
    if (!(*flags.kappa > 0.0)) throw ConfigError("--kappa must be > 0");
    cfg.barrier.kappa = *flags.kappa;
  }
  return cfg;
}

int run_into_dir(const std::string& cfg_path, const RunFlags& flags,
                 const fs::path& dir, std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg;
  try {
    cfg = load_with_flags(cfg_path, flags);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }
  RunResult result;
  try {
    result = run_scenario(cfg);
  } catch (const Error& e) {
    err << "run failed: " << e.what() << "\n";
    return 3;
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  try {
    write_trajectory_csv(result.log, (dir / "trajectory.csv").string());
    write_speed_dat(result.log, (dir / "speed.dat").string());
    write_barrier_dat(result.log, (dir / "barrier.dat").string());
    write_path_dat(result.log, (dir / "path.dat").string());
    const std::string text = format_report(result.report, cfg_path);
    std::ofstream rep(dir / "report.txt");
    rep << text;
    out << text;
  } catch (const Error& e) {
    err << "output failed: " << e.what() << "\n";
    return 3;
  }
  for (const auto& w : result.log.warnings) err << "warning: " << w << "\n";
  if (result.log.aborted) err << "aborted: " << result.log.abort_reason << "\n";
  return report_exit_code(result.report);
}

}  // namespace

int run_command(const std::string& cfg_path, const RunFlags& flags, std::ostream& out,
                std::ostream& err) {
  return run_into_dir(cfg_path, flags, resolve_out_dir(flags.out_dir), out, err);
}

int report_command(const std::string& csv_path, std::ostream& out, std::ostream& err) {
  try {
    const TrajectoryLog log = read_trajectory_csv(csv_path);
    const Report rep = build_report(log);
    out << format_report(rep, csv_path);
    if (rep.verdict == Verdict::Undetermined && !log.aborted)
      out << "note: the log does not cover the formula horizon; the verdict "
             "depends on samples past the end of the log\n";
    return report_exit_code(rep);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }
}

int check_command(const std::string& cfg_path, std::ostream& out, std::ostream& err) {
  try {
    const ScenarioConfig cfg = load_scenario(cfg_path);
    out << "ok: " << cfg_path << "\n";
    for (const auto& w : cfg.warnings) out << "warning: " << w << "\n";
    return 0;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  }
}

int batch_command(const std::string& dir, const RunFlags& flags, std::ostream& out,
                  std::ostream& err) {
  std::vector<fs::path> cfgs;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec))
    if (entry.is_regular_file() && entry.path().extension() == ".cfg")
      cfgs.push_back(entry.path());
  if (ec) {
    err << "cannot read directory '" << dir << "': " << ec.message() << "\n";
    return 2;
  }
  if (cfgs.empty()) {
    err << "no .cfg files in '" << dir << "'\n";
    return 2;
  }
  std::sort(cfgs.begin(), cfgs.end());
  const fs::path out_root = resolve_out_dir(flags.out_dir);
  int failures = 0;
  for (const auto& cfg : cfgs) {
    const fs::path sub = out_root / cfg.stem();
    const int rc = run_into_dir(cfg.string(), flags, sub, out, err);
    out << (rc == 0 ? "PASS " : "FAIL ") << cfg.string() << "\n";
    if (rc != 0) ++failures;
  }
  out << cfgs.size() - failures << "/" << cfgs.size() << " scenarios passed\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace cli
}  // namespace stlcbf
