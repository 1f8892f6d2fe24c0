#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace uavloc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitValidation = 3;

struct RunArgs {
  std::string scenario;
  std::string planner = "epso";
  std::uint64_t seed = 0;  ///< mission index under the scenario's master seed
  std::string out = "out";
};

struct SweepArgs {
  std::string scenario;
  std::vector<int> persons{6, 8, 10};
  int seeds = 10;
  std::vector<std::string> planners{"epso", "pso", "ga"};
  std::string out = "out";
  int workers = 0;  ///< 0: UAVLOC_WORKERS or the hardware concurrency
};

struct PlanArgs {
  std::string estimates;
  std::string scenario;
  std::string planner = "epso";
  std::uint64_t seed = 0;
};

struct ValidateArgs {
  std::string out = ".";  ///< directory receiving kappa.json
  std::string scenario;   ///< optional; defaults to the built-in scenario
};

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);
int cmd_plan(const PlanArgs& args, std::ostream& out, std::ostream& err);
int cmd_validate(const ValidateArgs& args, std::ostream& out, std::ostream& err);

/// Worker count from UAVLOC_WORKERS, falling back to the hardware concurrency.
int worker_count();

}  // namespace uavloc::cli
