#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uavloc/geometry.hpp"
#include "uavloc/ranging.hpp"
#include "uavloc/scenario.hpp"

namespace uavloc {

/// Added to the fitness once per target that cannot meet e_th and once per
/// UAV whose planned energy exceeds its budget.
inline constexpr double kInfeasiblePenalty = 1.0e6;

/// A located person as seen by the planner: a constant-velocity hypothesis
/// anchored at `ref_slot` with error bound `error_bound` there.
struct PlanTarget {
  int person = 0;
  int ref_slot = 0;
  Vec2 position;
  Vec2 velocity;
  double error_bound = 0.0;
};

struct PlanningProblem {
  std::vector<PlanTarget> targets;
  std::vector<Vec2> starts;  ///< launch point per UAV
  std::vector<Vec2> homes;   ///< return point per UAV
  double start_slot = 0.0;   ///< mission time at launch, in slots
  std::vector<double> energy_used;  ///< already spent per UAV, J; empty = none

  int uav_count() const { return static_cast<int>(starts.size()); }
  void validate() const;
};

/// Random-key decode: target s goes to UAV floor(keys[s]) (clamped to
/// [0, M−1]); each tour is ordered by fractional part, ties by index.
std::vector<std::vector<int>> decode(std::span<const double> keys, int uav_count);

/// Σ leg lengths / V_max.
double tour_time(std::span<const Vec2> waypoints, double vmax);

/// R points on the circle, spaced 2π/R, the first at angle 0.
std::vector<Vec2> reference_points(const Vec2& center, double radius, int count);

/// κ·m_ξ(sqrt(D² + h²)): predicted localization error when ranging from
/// ground distance D.
double predicted_error(double ground_distance, const RangingParams& ranging, double altitude,
                       double kappa);

struct AccessRadius {
  double radius = 0.0;
  bool feasible = true;  ///< false when even overhead ranging misses e_th
};

/// Largest ρ ∈ [0, cap] such that a waypoint anywhere on the circle of radius
/// ρ predicts error ≤ e_th for each of the R reference points placed on the
/// circle of radius `reference_error` (both circles share a center).
/// Bisection to 0.1 m. Infeasible only when even overhead ranging misses
/// e_th; when no radius satisfies every reference point, ρ = 0.
AccessRadius access_radius(double reference_error, double e_th, const RangingParams& ranging,
                           double altitude, int reference_count, double kappa, double cap);

/// Entry point of the segment prev→center into the circle of radius ρ.
/// Returns prev when it is already inside.
Vec2 edge_waypoint(const Vec2& prev, const Vec2& center, double radius);

/// Inertia weight: ε_min + (ε_max − ε_min)(f − f_min)/(f_avg − f_min) for
/// f ≤ f_avg, ε_max above the average, ε_min when f_avg = f_min.
double adaptive_inertia(double f, double f_min, double f_avg, double eps_min, double eps_max);

struct Visit {
  int target = 0;     ///< index into PlanningProblem::targets
  int person = 0;
  Vec2 predicted;     ///< extrapolated target position at arrival
  Vec2 waypoint;
  double radius = 0.0;        ///< access radius used
  double arrival_slot = 0.0;  ///< planned, fractional
  double predicted_bound = 0.0;
  bool infeasible = false;
};

struct UavTour {
  std::vector<Visit> visits;
  std::vector<Vec2> waypoints;  ///< start, visit waypoints…, home
  double time = 0.0;            ///< s
  double energy = 0.0;          ///< already used + planned flight, J
  bool over_budget = false;
};

struct Plan {
  std::string planner;
  std::vector<UavTour> tours;
  double makespan = 0.0;  ///< max tour time, s
  double fitness = 0.0;   ///< makespan plus penalties
  int infeasible_targets = 0;
  std::vector<double> best_history;  ///< global-best fitness per iteration
  double initial_best = 0.0;
  std::vector<double> keys;
};

/// Materializes the tours encoded by `keys`, applying edge access when the
/// scenario enables it. Waypoint placement is a single forward pass per tour.
Plan build_plan(std::span<const double> keys, const PlanningProblem& problem,
                const Scenario& scenario);

/// Makespan of `build_plan` plus infeasibility penalties.
double fitness(std::span<const double> keys, const PlanningProblem& problem,
               const Scenario& scenario);

enum class PlannerKind { epso, pso, ga };

PlannerKind parse_planner(const std::string& name);
std::string to_string(PlannerKind kind);

Plan epso_solve(const PlanningProblem& problem, const Scenario& scenario, std::uint64_t seed);
Plan pso_solve(const PlanningProblem& problem, const Scenario& scenario, std::uint64_t seed);
Plan ga_solve(const PlanningProblem& problem, const Scenario& scenario, std::uint64_t seed);
Plan solve(PlannerKind kind, const PlanningProblem& problem, const Scenario& scenario,
           std::uint64_t seed);

}  // namespace uavloc
