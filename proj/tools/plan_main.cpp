#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "stlcbf/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"STL-constrained barrier-based motion planner"};
  app.require_subcommand(1);

  stlcbf::cli::RunFlags flags;
  std::string cfg_path, csv_path, batch_dir;

  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_flag("--no-retime", flags.no_retime,
                  "disable dynamic deadline recomputation");
    cmd->add_option("--dt", [&](const CLI::results_t& r) {
      flags.dt = std::stod(r[0]);
      return true;
    }, "override the control period [s]");
    cmd->add_option("--seed", [&](const CLI::results_t& r) {
      flags.seed = std::stoul(r[0]);
      return true;
    }, "override the scenario seed");
    cmd->add_option("--eta", [&](const CLI::results_t& r) {
      flags.eta = std::stod(r[0]);
      return true;
    }, "override the smooth-min sharpness");
    cmd->add_option("--kappa", [&](const CLI::results_t& r) {
      flags.kappa = std::stod(r[0]);
      return true;
    }, "override the class-K gain");
    cmd->add_option("--out", [&](const CLI::results_t& r) {
      flags.out_dir = r[0];
      return true;
    }, "output directory (default: $PLAN_LOG_DIR or cwd)");
  };

  auto* run = app.add_subcommand("run", "run a scenario and write logs");
  run->add_option("config", cfg_path, "scenario file")->required();
  add_run_flags(run);

  auto* report = app.add_subcommand("report", "recompute a report from a trajectory CSV");
  report->add_option("csv", csv_path, "trajectory.csv produced by run")->required();

  auto* check = app.add_subcommand("check", "validate a scenario file");
  check->add_option("config", cfg_path, "scenario file")->required();

  auto* batch = app.add_subcommand("batch", "run every .cfg in a directory");
  batch->add_option("dir", batch_dir, "directory of scenario files")->required();
  add_run_flags(batch);

  CLI11_PARSE(app, argc, argv);

  if (run->parsed())
    return stlcbf::cli::run_command(cfg_path, flags, std::cout, std::cerr);
  if (report->parsed())
    return stlcbf::cli::report_command(csv_path, std::cout, std::cerr);
  if (check->parsed())
    return stlcbf::cli::check_command(cfg_path, std::cout, std::cerr);
  if (batch->parsed())
    return stlcbf::cli::batch_command(batch_dir, flags, std::cout, std::cerr);
  return 1;
}
