#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "uavloc/energy.hpp"
#include "uavloc/ranging.hpp"

namespace uavloc {

/// Raised for malformed or invariant-violating scenario configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BoundaryMode { reflect };

/// Source of the per-slot range d* used to build error annuli.
enum class AnnulusRangeSource {
  track,  ///< distance from the slot's UAV position to the fitted track
  slot,   ///< geometric mean of that slot's own samples
};

struct SwarmParams {
  int population = 50;
  int iterations = 200;
  double c1 = 2.0;
  double c2 = 2.0;
  double eps_min = 0.4;
  double eps_max = 0.9;
  bool rand_per_coordinate = false;

  friend bool operator==(const SwarmParams&, const SwarmParams&) = default;
};

/// Immutable description of one simulated world. Units are SI throughout.
struct Scenario {
  // area and fleet
  double area_length = 1120.0;  ///< Lx
  double area_width = 640.0;    ///< Ly
  double altitude = 100.0;      ///< h
  double comm_range = 150.0;
  int uav_count = 4;
  double uav_vmax = 25.0;
  double person_vmax = 1.5;
  double slot_duration = 0.025;
  int samples_per_slot = 10;

  RangingParams ranging{};
  double alpha = 0.05;         ///< error growth rate, 1/s
  double e_th = 30.0;          ///< required localization accuracy, m
  double energy_budget = 5.0e5;  ///< per-UAV E_max, J
  std::uint64_t seed = 1;

  // persons
  int person_count = 10;
  int resample_interval = 400;  ///< slots between velocity redraws; 0 = never
  BoundaryMode boundary_mode = BoundaryMode::reflect;

  // localization
  int annuli_count = 5;
  AnnulusRangeSource annulus_range_source = AnnulusRangeSource::track;
  double collinear_tol = 0.5;
  int min_window_slots = 40;
  int angular_samples = 2048;
  int grid_cells = 256;

  // accurate-localization phase
  int refine_slots = 20;
  int hypothesis_timeout = 40;
  double kappa = 2.0;
  int reference_points = 8;
  bool edge_access = true;

  SwarmParams swarm{};
  PowerParams power{};

  /// Ground radius covered by one UAV: sqrt(comm_range² − h²).
  double ground_radius() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses and checks a flat JSON object whose keys are Scenario field names.
/// Unknown keys, missing required keys and invariant violations raise
/// ConfigError naming the offending field.
Scenario validate_scenario(const nlohmann::json& raw);

/// Re-checks invariants of an already-built Scenario.
void check_scenario(const Scenario& scenario);

nlohmann::json scenario_to_json(const Scenario& scenario);

Scenario load_scenario_file(const std::string& path);

}  // namespace uavloc
