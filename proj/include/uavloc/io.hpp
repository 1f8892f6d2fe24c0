#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavloc/mle.hpp"
#include "uavloc/planner.hpp"
#include "uavloc/sim.hpp"

namespace uavloc {

/// Malformed input file other than a scenario (e.g. an estimates file).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json to_json(const Vec2& v);
nlohmann::json to_json(const TrackEstimate& estimate);
nlohmann::json to_json(const Plan& plan);
nlohmann::json to_json(const MissionReport& report);

/// One JSON object per line: slot, entity, x, y, z, vx, vy.
void write_trace(const std::string& path, const std::vector<TraceRecord>& trace);

/// Column names of the metrics table, in order.
const std::vector<std::string>& metrics_columns();
std::string metrics_header();
std::string metrics_csv_row(const MetricsRow& row);

/// Standalone planning input:
///   {"start_slot": 0, "starts": [[x, y], ...], "homes": [[x, y], ...],
///    "estimates": [{"person": 0, "ref_slot": 0, "position": [x, y],
///                   "velocity": [vx, vy], "error_bound": 5.0}, ...]}
/// `starts`, `homes` and `start_slot` are optional; missing starts and homes
/// default to `default_points`.
PlanningProblem parse_estimates(const nlohmann::json& doc, const std::vector<Vec2>& default_points);
PlanningProblem load_estimates_file(const std::string& path,
                                    const std::vector<Vec2>& default_points);

/// Writes `text` to `path` through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& text);

}  // namespace uavloc
