#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "uavloc/kinematics.hpp"
#include "uavloc/mle.hpp"
#include "uavloc/planner.hpp"
#include "uavloc/scan.hpp"
#include "uavloc/scenario.hpp"

namespace uavloc {

struct MobilityParams {
  double vmax = 1.5;
  int resample_interval = 400;  ///< slots; 0 keeps the first draw, negative never draws
  double slot_duration = 0.025;
  Area area;

  static MobilityParams from(const Scenario& scenario);
};

/// Piecewise-constant random walk. At slot 0 and every `resample_interval`
/// slots a heading U[0, 2π) and speed U[0, vmax] are drawn; then the person
/// advances one slot with reflection at the area edges.
PersonState person_mobility_step(const PersonState& state, int slot, std::mt19937_64& rng,
                                 const MobilityParams& params);

/// Moves a point along a polyline at a fixed distance per step.
class PathFollower {
 public:
  struct Leg {
    Vec3 point;
    int tag = -1;
  };
  struct Step {
    double travelled = 0.0;
    Vec3 velocity;           ///< heading at the end of the step × speed
    std::vector<int> reached;  ///< tags of waypoints reached during the step
  };

  explicit PathFollower(const Vec3& position = {}) : position_(position) {}

  void set_route(std::vector<Leg> route);
  Step step(double distance, double speed);
  bool done() const { return next_ >= route_.size(); }
  const Vec3& position() const { return position_; }
  std::vector<Leg> remaining() const;
  const Leg* current() const { return done() ? nullptr : &route_[next_]; }

 private:
  Vec3 position_;
  std::vector<Leg> route_;
  std::size_t next_ = 0;
};

/// Windows per (uav, person), disjoint in time.
struct ReceptionLog {
  std::map<std::pair<int, int>, std::vector<RangeWindow>> windows;

  std::vector<const RangeWindow*> for_person(int person) const;
};

struct TraceRecord {
  int slot = 0;
  std::string entity;
  Vec3 position;
  Vec2 velocity;
};

/// Mutable state of one mission: true world, UAVs, rng streams, trace.
struct World {
  Scenario scenario;
  MobilityParams mobility;
  std::vector<PersonState> persons;
  std::vector<std::mt19937_64> mobility_rng;
  std::vector<std::mt19937_64> ranging_rng;
  std::mt19937_64 mirror_rng;
  std::vector<UavState> uavs;
  std::vector<Vec2> homes;
  std::vector<double> energy;
  int slot = 0;
  std::vector<std::vector<Vec2>> truth;  ///< person ground positions per slot
  std::vector<TraceRecord> trace;
  std::vector<std::vector<Vec3>> uav_path;     ///< per UAV, position at every slot
  std::vector<std::vector<double>> uav_speeds;  ///< per UAV, speed over every slot
  bool record_trace = true;
  std::uint64_t samples_drawn = 0;
};

/// Random persons uniformly placed in the area.
World make_world(const Scenario& scenario, std::uint64_t world_seed);

/// Persons with given initial states. With `keep_velocity`, the initial
/// velocities are kept and never resampled.
World make_world(const Scenario& scenario, std::vector<PersonState> persons,
                 std::uint64_t world_seed, bool keep_velocity);

std::vector<ScanPath> plan_scan(const Scenario& scenario);

struct Phase1Result {
  ReceptionLog log;
  std::vector<std::optional<TrackEstimate>> estimates;  ///< per person
  std::vector<std::optional<RangeWindow>> windows;      ///< window behind each estimate
  std::vector<ScanPath> paths;
  int end_slot = 0;
};

Phase1Result simulate_phase1(World& world, const std::vector<ScanPath>& paths);

struct PersonOutcome {
  int person = 0;
  bool detected = false;
  std::optional<TrackEstimate> final_estimate;
  double final_error_bound = 0.0;
  double true_error = 0.0;
  bool located = false;   ///< refined by a second-phase fit
  bool met_e_th = false;
  bool visited = false;
  bool mirror_swapped = false;
  /// Mean ranging error at the final estimate's slant range, both forms.
  double range_error = 0.0;
  double signed_range_error = 0.0;
};

struct UavOutcome {
  double makespan = 0.0;  ///< return time, s
  double energy = 0.0;
  bool within_budget = true;
  bool aborted = false;   ///< returned early on energy
  Vec2 home;
  std::vector<Vec3> trajectory;  ///< one position per slot, launch to return
  std::vector<double> speeds;    ///< path length per slot / slot duration
  std::vector<std::vector<Vec2>> planned_waypoints;  ///< each (re)plan
};

struct MissionReport {
  std::string planner;
  std::uint64_t seed_index = 0;
  int person_count = 0;
  int scan_end_slot = 0;
  int end_slot = 0;
  std::vector<PersonOutcome> persons;
  std::vector<UavOutcome> uavs;
  double makespan = 0.0;
  double planner_wall_time = 0.0;
  int replans = 0;
  bool infeasible_accuracy = false;
  Plan initial_plan;
  std::vector<ScanPath> scan_paths;
  std::vector<std::optional<TrackEstimate>> scan_estimates;
};

MissionReport simulate_phase2(World& world, Phase1Result phase1, PlannerKind planner,
                              std::uint64_t planner_seed);

struct MissionSeeds {
  std::uint64_t world;
  std::uint64_t planner;
};

/// Streams for (S, seed index, planner) under the scenario's master seed.
/// The world stream ignores the planner so planners see the same world.
MissionSeeds mission_seeds(const Scenario& scenario, std::uint64_t seed_index,
                           PlannerKind planner);

MissionReport run_mission(const Scenario& scenario, PlannerKind planner,
                          std::uint64_t seed_index, World* world_out = nullptr);

struct MetricsRow {
  std::uint64_t seed = 0;
  int persons = 0;
  std::string planner;
  double makespan = 0.0;
  double max_error = 0.0;
  double mean_error = 0.0;
  double fraction_within_e_th = 0.0;
  double total_energy = 0.0;
  double planner_wall_time = 0.0;
  int replans = 0;
};

MetricsRow collect_metrics(const MissionReport& report, double e_th);

}  // namespace uavloc
