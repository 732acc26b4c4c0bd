#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "stlcbf/cli.hpp"
#include "stlcbf/parser.hpp"
#include "stlcbf/report.hpp"
#include "stlcbf/trajectory_io.hpp"

using namespace stlcbf;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("stlcbf_test_" + std::to_string(std::rand()) +
            std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
};

ScenarioConfig reach_cfg() {
  ScenarioConfig cfg;
  cfg.formula_text = "F[0,10](ball([5,0], 0.2))";
  cfg.formula = parse_formula(cfg.formula_text);
  cfg.dynamics = Dynamics::identity();
  cfg.sim.start = Eigen::Vector3d::Zero();
  Obstacle o;
  o.id = "d1";
  o.radius = 0.3;
  o.center = {2.5, 1.6};
  o.motion = RhodoneaParams{0.4, 2.0, 0.5, 0.7};
  cfg.world.obstacles.push_back(o);
  return cfg;
}

std::string write_cfg(const TempDir& dir, const std::string& name,
                      const std::string& body) {
  const fs::path p = dir.path / name;
  std::ofstream out(p);
  out << body;
  return p.string();
}

const char* kReachJson = R"json({
  "formula": "F[0,10](ball([5,0], 0.2))",
  "obstacles": [],
  "sim": {"start": [0, 0]}
})json";

}  // namespace

TEST_CASE("csv round trip preserves rows and metadata") {
  const RunResult res = run_scenario(reach_cfg());
  TempDir dir;
  const std::string csv = (dir.path / "trajectory.csv").string();
  write_trajectory_csv(res.log, csv);
  const TrajectoryLog back = read_trajectory_csv(csv);
  CHECK(back.formula_text == res.log.formula_text);
  CHECK(back.dt == doctest::Approx(res.log.dt));
  CHECK(back.horizon == doctest::Approx(res.log.horizon));
  REQUIRE(back.rows.size() == res.log.rows.size());
  REQUIRE(back.tasks.size() == res.log.tasks.size());
  REQUIRE(back.obstacles.size() == res.log.obstacles.size());
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    CHECK(back.rows[i].t == doctest::Approx(res.log.rows[i].t));
    CHECK(back.rows[i].x.x() == doctest::Approx(res.log.rows[i].x.x()).epsilon(1e-8));
    CHECK(back.rows[i].events == res.log.rows[i].events);
    CHECK(back.rows[i].mode == res.log.rows[i].mode);
  }
  // writing the parsed log again is byte-identical
  const std::string csv2 = (dir.path / "again.csv").string();
  write_trajectory_csv(back, csv2);
  std::ifstream a(csv), b(csv2);
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
}

TEST_CASE("report recomputed from csv matches the run's report") {
  const RunResult res = run_scenario(reach_cfg());
  TempDir dir;
  const std::string csv = (dir.path / "trajectory.csv").string();
  write_trajectory_csv(res.log, csv);
  const Report rep = build_report(read_trajectory_csv(csv));
  CHECK(rep.verdict == res.report.verdict);
  CHECK(rep.movement_time == doctest::Approx(res.report.movement_time).epsilon(1e-9));
  CHECK(rep.wall_clock == doctest::Approx(res.report.wall_clock));
  CHECK(rep.replan_count == res.report.replan_count);
  CHECK(rep.infeasible_count == res.report.infeasible_count);
  REQUIRE(rep.tasks.size() == res.report.tasks.size());
  for (std::size_t i = 0; i < rep.tasks.size(); ++i) {
    CHECK(rep.tasks[i].satisfied == res.report.tasks[i].satisfied);
    CHECK(rep.tasks[i].satisfied_at ==
          doctest::Approx(res.report.tasks[i].satisfied_at).epsilon(1e-9));
  }
  CHECK(report_exit_code(rep) == 0);
}

TEST_CASE("truncated log yields an undetermined verdict") {
  RunResult res = run_scenario(reach_cfg());
  // chop the log well before the satisfaction sample
  TrajectoryLog cut = res.log;
  cut.rows.resize(cut.rows.size() / 8);
  const Report rep = build_report(cut);
  CHECK(rep.verdict == Verdict::Undetermined);
  CHECK(report_exit_code(rep) != 0);
}

TEST_CASE("injected speed violation is flagged with its step") {
  RunResult res = run_scenario(reach_cfg());
  TrajectoryLog tampered = res.log;
  tampered.rows[42].speed = tampered.rows[42].vmax + 0.5;
  const Report rep = build_report(tampered);
  REQUIRE_FALSE(rep.violations.empty());
  CHECK(rep.violations[0].find("speed violation") != std::string::npos);
  CHECK(rep.violations[0].find(format_number(tampered.rows[42].t)) !=
        std::string::npos);
  CHECK(report_exit_code(rep) != 0);
}

TEST_CASE("run command writes all outputs and exits zero") {
  TempDir dir;
  const std::string cfg = write_cfg(dir, "reach.cfg", kReachJson);
  cli::RunFlags flags;
  flags.out_dir = (dir.path / "out").string();
  std::ostringstream out, err;
  const int rc = cli::run_command(cfg, flags, out, err);
  CHECK(rc == 0);
  for (const char* name :
       {"trajectory.csv", "report.txt", "speed.dat", "barrier.dat", "path.dat"})
    CHECK(fs::exists(dir.path / "out" / name));
  CHECK(out.str().find("verdict: satisfied") != std::string::npos);

  // report command on the emitted csv agrees
  std::ostringstream rout, rerr;
  const int rrc =
      cli::report_command((dir.path / "out" / "trajectory.csv").string(), rout, rerr);
  CHECK(rrc == 0);
  CHECK(rout.str().find("verdict: satisfied") != std::string::npos);
}

TEST_CASE("missing config exits nonzero with a diagnostic") {
  std::ostringstream out, err;
  CHECK(cli::run_command("/nonexistent/missing.cfg", {}, out, err) != 0);
  CHECK(err.str().find("missing.cfg") != std::string::npos);
  CHECK(cli::check_command("/nonexistent/missing.cfg", out, err) != 0);
}

TEST_CASE("check command validates without running") {
  TempDir dir;
  std::ostringstream out, err;
  CHECK(cli::check_command(write_cfg(dir, "ok.cfg", kReachJson), out, err) == 0);
  const char* bad = R"json({"formula": "F[0,10](ball([5,0], 0.2))",
                        "replan": {"p_i": 0.4}, "sim": {"start": [0,0]}})json";
  CHECK(cli::check_command(write_cfg(dir, "bad.cfg", bad), out, err) == 1);
  CHECK(err.str().find("[0.5, 1)") != std::string::npos);
}

TEST_CASE("batch runs every cfg in a directory") {
  TempDir dir;
  write_cfg(dir, "a.cfg", kReachJson);
  write_cfg(dir, "b.cfg", kReachJson);
  cli::RunFlags flags;
  flags.out_dir = (dir.path / "out").string();
  std::ostringstream out, err;
  CHECK(cli::batch_command(dir.path.string(), flags, out, err) == 0);
  CHECK(out.str().find("2/2 scenarios passed") != std::string::npos);
  CHECK(fs::exists(dir.path / "out" / "a" / "trajectory.csv"));
  CHECK(fs::exists(dir.path / "out" / "b" / "trajectory.csv"));
}

TEST_CASE("env var PLAN_LOG_DIR steers the default output dir") {
  CHECK(cli::resolve_out_dir(std::optional<std::string>("explicit")) == "explicit");
  setenv("PLAN_LOG_DIR", "/tmp/env_dir", 1);
  CHECK(cli::resolve_out_dir(std::nullopt) == "/tmp/env_dir");
  unsetenv("PLAN_LOG_DIR");
  CHECK(cli::resolve_out_dir(std::nullopt) == ".");
}
