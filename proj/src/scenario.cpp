#include "uavloc/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace uavloc {
namespace {

using nlohmann::json;

const std::set<std::string>& required_keys() {
  static const std::set<std::string> keys = {
      "area_length", "area_width", "altitude",  "comm_range",
      "uav_count",   "uav_vmax",   "person_vmax", "slot_duration",
      "samples_per_slot", "eta",   "sigma_psi",
  };
  return keys;
}

template <typename T>
void read(const json& raw, const char* key, T& out) {
  auto it = raw.find(key);
  if (it == raw.end()) {
    return;
  }
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) {
    throw ConfigError(std::string("field '") + field + "': " + what);
  }
}

const char* to_string(AnnulusRangeSource s) {
  return s == AnnulusRangeSource::track ? "track" : "slot";
}

}  // namespace

double Scenario::ground_radius() const {
  return std::sqrt(comm_range * comm_range - altitude * altitude);
}

void check_scenario(const Scenario& s) {
  auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  require(finite_pos(s.area_length), "area_length", "must be > 0");
  require(finite_pos(s.area_width), "area_width", "must be > 0");
  require(finite_pos(s.altitude), "altitude", "must be > 0");
  require(finite_pos(s.comm_range), "comm_range", "must be > 0");
  require(s.comm_range > s.altitude, "comm_range",
          "no ground coverage: comm_range must exceed altitude");
  require(s.uav_count >= 1, "uav_count", "must be >= 1");
  require(finite_pos(s.uav_vmax), "uav_vmax", "must be > 0");
  require(std::isfinite(s.person_vmax) && s.person_vmax >= 0.0, "person_vmax", "must be >= 0");
  require(s.person_vmax < s.uav_vmax, "person_vmax", "must be below uav_vmax");
  require(finite_pos(s.slot_duration), "slot_duration", "must be > 0");
  require(s.samples_per_slot >= 1, "samples_per_slot", "must be >= 1");
  require(finite_pos(s.ranging.eta), "eta", "must be > 0");
  require(std::isfinite(s.ranging.sigma_psi) && s.ranging.sigma_psi >= 0.0, "sigma_psi",
          "must be >= 0");
  require(std::isfinite(s.alpha) && s.alpha >= 0.0, "alpha", "must be >= 0");
  require(finite_pos(s.e_th), "e_th", "must be > 0");
  require(finite_pos(s.energy_budget), "energy_budget", "must be > 0");
  require(s.person_count >= 0, "person_count", "must be >= 0");
  require(s.resample_interval >= 0, "resample_interval", "must be >= 0");
  require(s.annuli_count >= 1, "annuli_count", "must be >= 1");
  require(finite_pos(s.collinear_tol), "collinear_tol", "must be > 0");
  require(s.min_window_slots >= 3, "min_window_slots", "must be >= 3");
  require(s.angular_samples >= 8, "angular_samples", "must be >= 8");
  require(s.grid_cells >= 2, "grid_cells", "must be >= 2");
  require(s.refine_slots >= 1, "refine_slots", "must be >= 1");
  require(s.hypothesis_timeout >= 1, "hypothesis_timeout", "must be >= 1");
  require(finite_pos(s.kappa), "kappa", "must be > 0");
  require(s.reference_points >= 3, "reference_points", "must be >= 3");
  require(s.swarm.population >= 2, "population", "must be >= 2");
  require(s.swarm.iterations >= 1, "iterations", "must be >= 1");
  require(std::isfinite(s.swarm.c1) && s.swarm.c1 >= 0.0, "c1", "must be >= 0");
  require(std::isfinite(s.swarm.c2) && s.swarm.c2 >= 0.0, "c2", "must be >= 0");
  require(s.swarm.eps_min > 0.0, "eps_min", "must be > 0");
  require(s.swarm.eps_min <= s.swarm.eps_max, "eps_max", "must be >= eps_min");
  require(finite_pos(s.power.p0), "power_p0", "must be > 0");
  require(finite_pos(s.power.p1), "power_p1", "must be > 0");
  require(finite_pos(s.power.tip_speed), "rotor_tip_speed", "must be > 0");
  require(finite_pos(s.power.induced_velocity), "rotor_induced_velocity", "must be > 0");
  require(finite_pos(s.power.parasite_coeff), "parasite_coeff", "must be > 0");
}

Scenario validate_scenario(const json& raw) {
  if (!raw.is_object()) {
    throw ConfigError("scenario config must be a JSON object");
  }
  const json defaults = scenario_to_json(Scenario{});
  for (const auto& [key, value] : raw.items()) {
    if (!defaults.contains(key)) {
      throw ConfigError("unknown field '" + key + "'");
    }
  }
  for (const auto& key : required_keys()) {
    if (!raw.contains(key)) {
      throw ConfigError("missing required field '" + key + "'");
    }
  }

  Scenario s;
  read(raw, "area_length", s.area_length);
  read(raw, "area_width", s.area_width);
  read(raw, "altitude", s.altitude);
  read(raw, "comm_range", s.comm_range);
  read(raw, "uav_count", s.uav_count);
  read(raw, "uav_vmax", s.uav_vmax);
  read(raw, "person_vmax", s.person_vmax);
  read(raw, "slot_duration", s.slot_duration);
  read(raw, "samples_per_slot", s.samples_per_slot);
  read(raw, "eta", s.ranging.eta);
  read(raw, "sigma_psi", s.ranging.sigma_psi);
  read(raw, "alpha", s.alpha);
  read(raw, "e_th", s.e_th);
  read(raw, "energy_budget", s.energy_budget);
  read(raw, "seed", s.seed);
  read(raw, "person_count", s.person_count);
  read(raw, "resample_interval", s.resample_interval);
  if (raw.contains("boundary_mode")) {
    std::string mode;
    read(raw, "boundary_mode", mode);
    require(mode == "reflect", "boundary_mode", "only 'reflect' is supported");
  }
  read(raw, "annuli_count", s.annuli_count);
  if (raw.contains("annulus_range_source")) {
    std::string src;
    read(raw, "annulus_range_source", src);
    require(src == "track" || src == "slot", "annulus_range_source",
            "must be 'track' or 'slot'");
    s.annulus_range_source =
        src == "track" ? AnnulusRangeSource::track : AnnulusRangeSource::slot;
  }
  read(raw, "collinear_tol", s.collinear_tol);
  read(raw, "min_window_slots", s.min_window_slots);
  read(raw, "angular_samples", s.angular_samples);
  read(raw, "grid_cells", s.grid_cells);
  read(raw, "refine_slots", s.refine_slots);
  read(raw, "hypothesis_timeout", s.hypothesis_timeout);
  read(raw, "kappa", s.kappa);
  read(raw, "reference_points", s.reference_points);
  read(raw, "edge_access", s.edge_access);
  read(raw, "population", s.swarm.population);
  read(raw, "iterations", s.swarm.iterations);
  read(raw, "c1", s.swarm.c1);
  read(raw, "c2", s.swarm.c2);
  read(raw, "eps_min", s.swarm.eps_min);
  read(raw, "eps_max", s.swarm.eps_max);
  read(raw, "rand_per_coordinate", s.swarm.rand_per_coordinate);
  read(raw, "power_p0", s.power.p0);
  read(raw, "power_p1", s.power.p1);
  read(raw, "rotor_tip_speed", s.power.tip_speed);
  read(raw, "rotor_induced_velocity", s.power.induced_velocity);
  read(raw, "parasite_coeff", s.power.parasite_coeff);

  check_scenario(s);
  return s;
}

json scenario_to_json(const Scenario& s) {
  return json{
      {"area_length", s.area_length},
      {"area_width", s.area_width},
      {"altitude", s.altitude},
      {"comm_range", s.comm_range},
      {"uav_count", s.uav_count},
      {"uav_vmax", s.uav_vmax},
      {"person_vmax", s.person_vmax},
      {"slot_duration", s.slot_duration},
      {"samples_per_slot", s.samples_per_slot},
      {"eta", s.ranging.eta},
      {"sigma_psi", s.ranging.sigma_psi},
      {"alpha", s.alpha},
      {"e_th", s.e_th},
      {"energy_budget", s.energy_budget},
      {"seed", s.seed},
      {"person_count", s.person_count},
      {"resample_interval", s.resample_interval},
      {"boundary_mode", "reflect"},
      {"annuli_count", s.annuli_count},
      {"annulus_range_source", to_string(s.annulus_range_source)},
      {"collinear_tol", s.collinear_tol},
      {"min_window_slots", s.min_window_slots},
      {"angular_samples", s.angular_samples},
      {"grid_cells", s.grid_cells},
      {"refine_slots", s.refine_slots},
      {"hypothesis_timeout", s.hypothesis_timeout},
      {"kappa", s.kappa},
      {"reference_points", s.reference_points},
      {"edge_access", s.edge_access},
      {"population", s.swarm.population},
      {"iterations", s.swarm.iterations},
      {"c1", s.swarm.c1},
      {"c2", s.swarm.c2},
      {"eps_min", s.swarm.eps_min},
      {"eps_max", s.swarm.eps_max},
      {"rand_per_coordinate", s.swarm.rand_per_coordinate},
      {"power_p0", s.power.p0},
      {"power_p1", s.power.p1},
      {"rotor_tip_speed", s.power.tip_speed},
      {"rotor_induced_velocity", s.power.induced_velocity},
      {"parasite_coeff", s.power.parasite_coeff},
  };
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open scenario file '" + path + "'");
  }
  json raw;
  try {
    raw = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario file '" + path + "' is not valid JSON: " + e.what());
  }
  return validate_scenario(raw);
}

}  // namespace uavloc
