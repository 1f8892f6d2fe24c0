#include <iostream>

#include <CLI11.hpp>

#include "uavloc/cli.hpp"

int main(int argc, char** argv) {
  using namespace uavloc::cli;
  CLI::App app{"Two-phase UAV localization simulator and planner"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Simulate one mission");
  run_cmd->add_option("--scenario", run.scenario, "Scenario JSON file")->required();
  run_cmd->add_option("--planner", run.planner, "epso, pso or ga");
  run_cmd->add_option("--seed", run.seed, "Mission index under the scenario seed");
  run_cmd->add_option("--out", run.out, "Output directory");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Persons x seeds x planners grid");
  sweep_cmd->add_option("--scenario", sweep.scenario, "Scenario JSON file")->required();
  sweep_cmd->add_option("--persons", sweep.persons, "Person counts")->delimiter(',');
  sweep_cmd->add_option("--seeds", sweep.seeds, "Missions per grid point");
  sweep_cmd->add_option("--planners", sweep.planners, "Planners")->delimiter(',');
  sweep_cmd->add_option("--out", sweep.out, "Output directory");
  sweep_cmd->add_option("--workers", sweep.workers, "Worker threads (default UAVLOC_WORKERS)");

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "Plan tours for an estimates file");
  plan_cmd->add_option("--estimates", plan.estimates, "Estimates JSON file")->required();
  plan_cmd->add_option("--scenario", plan.scenario, "Scenario JSON file")->required();
  plan_cmd->add_option("--planner", plan.planner, "epso, pso or ga");
  plan_cmd->add_option("--seed", plan.seed, "Planner stream index");

  ValidateArgs validate;
  auto* validate_cmd = app.add_subcommand("validate", "Run the reference oracles");
  validate_cmd->add_option("--out", validate.out, "Directory for kappa.json");
  validate_cmd->add_option("--scenario", validate.scenario, "Scenario JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (run_cmd->parsed()) return cmd_run(run, std::cout, std::cerr);
  if (sweep_cmd->parsed()) return cmd_sweep(sweep, std::cout, std::cerr);
  if (plan_cmd->parsed()) return cmd_plan(plan, std::cout, std::cerr);
  return cmd_validate(validate, std::cout, std::cerr);
}
