#pragma once

// Reference computations written independently of the production code paths.
// They are slow on purpose and serve the validate command and the tests.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "uavloc/error_bound.hpp"
#include "uavloc/planner.hpp"
#include "uavloc/ranging.hpp"
#include "uavloc/scenario.hpp"

namespace uavloc::oracle {

struct RangingMoments {
  double mean = 0.0;      ///< E[r]
  double mean_sd = 0.0;   ///< standard error of `mean`
  double log_mean = 0.0;  ///< E[ln(r/d)]
  double log_var = 0.0;   ///< Var[ln(r/d)]
};

RangingMoments ranging_moments(double d, const RangingParams& params, std::size_t draws,
                               std::uint64_t seed);

using MeanErrorFn = std::function<double(double, const RangingParams&)>;

struct Check {
  bool pass = false;
  double expected = 0.0;
  double observed = 0.0;
};

/// Compares a mean-error function with the Monte-Carlo bias E[r] − d.
/// Tolerance: 3% of the expected bias, widened to four standard errors.
Check mean_error_check(const MeanErrorFn& mean_error, double d, const RangingParams& params,
                       std::size_t draws, std::uint64_t seed);

/// Propulsion power in extended precision, with the induced term rewritten as
/// P1 / sqrt(sqrt(1 + x²) + x), x = V²/(2v_r²), to avoid cancellation.
long double power(long double speed, const PowerParams& params);

struct MtspOptimum {
  double makespan = 0.0;
  std::vector<std::vector<int>> tours;  ///< target indices per UAV, in visiting order
};

/// Exhaustive minimum makespan over every assignment and every visiting order,
/// flying directly over each target (no access circle). Targets move at
/// constant velocity; each is aimed at where it will be when the UAV would
/// reach its current predicted position in a straight line.
MtspOptimum brute_force_mtsp(const PlanningProblem& problem, double vmax, double slot_duration);

/// Independent re-evaluation of one tour under the same rules.
double tour_makespan(const PlanningProblem& problem, int uav, std::span<const int> order,
                     double vmax, double slot_duration);

/// Farthest point of the annulus intersection seen from `estimate`, found by
/// casting rays every `dtheta` and stepping each inward from outside the
/// region in steps of `dr`.
double polar_farthest(std::span<const Annulus> annuli, const Vec2& estimate,
                      const HalfPlane* side = nullptr, double dtheta = 1e-3, double dr = 0.05);

struct KappaCalibration {
  double kappa = 0.0;
  double quantile_error = 0.0;  ///< m
  double mean_range_error = 0.0;  ///< m_ξ at the calibration slant range
  int trials = 0;
};

/// Ratio of the 90th-percentile localization error of a refinement pass to
/// m_ξ at the mean slant range. The UAV flies `window_slots` slots of a
/// straight pass at ground offset `offset` from a stationary person; the
/// nearer of the two mirror hypotheses is scored.
KappaCalibration calibrate_kappa(const Scenario& scenario, double offset, int window_slots,
                                 int trials, std::uint64_t seed);

}  // namespace uavloc::oracle
