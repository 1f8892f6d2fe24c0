#include "uavloc/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace uavloc {

using nlohmann::json;

json to_json(const Vec2& v) { return json::array({v.x, v.y}); }

json to_json(const TrackEstimate& e) {
  json j{{"person", e.person},
         {"ref_slot", e.ref_slot},
         {"position", to_json(e.position)},
         {"velocity", to_json(e.velocity)},
         {"error_bound", e.error_bound},
         {"log_likelihood", e.log_likelihood},
         {"end_range", e.end_range},
         {"converged", e.converged},
         {"empty_region", e.empty_region}};
  if (e.mirror) {
    j["mirror"] = {{"position", to_json(e.mirror->position)},
                   {"velocity", to_json(e.mirror->velocity)}};
  }
  return j;
}

json to_json(const Plan& plan) {
  json tours = json::array();
  for (const auto& t : plan.tours) {
    json visits = json::array();
    for (const auto& v : t.visits) {
      visits.push_back({{"person", v.person},
                        {"predicted", to_json(v.predicted)},
                        {"waypoint", to_json(v.waypoint)},
                        {"access_radius", v.radius},
                        {"arrival_slot", v.arrival_slot},
                        {"predicted_bound", v.predicted_bound},
                        {"infeasible", v.infeasible}});
    }
    json wps = json::array();
    for (const auto& p : t.waypoints) wps.push_back(to_json(p));
    tours.push_back({{"visits", visits},
                     {"waypoints", wps},
                     {"time", t.time},
                     {"energy", t.energy},
                     {"over_budget", t.over_budget}});
  }
  return {{"planner", plan.planner},
          {"makespan", plan.makespan},
          {"fitness", plan.fitness},
          {"infeasible_targets", plan.infeasible_targets},
          {"tours", tours}};
}

json to_json(const MissionReport& r) {
  json persons = json::array();
  for (const auto& p : r.persons) {
    json j{{"person", p.person},
           {"detected", p.detected},
           {"located", p.located},
           {"visited", p.visited},
           {"met_e_th", p.met_e_th},
           {"mirror_swapped", p.mirror_swapped},
           {"final_error_bound", p.final_error_bound},
           {"true_error", p.true_error},
           {"mean_range_error", {{"absolute", p.range_error}, {"signed", p.signed_range_error}}}};
    if (p.final_estimate) j["final_estimate"] = to_json(*p.final_estimate);
    persons.push_back(std::move(j));
  }
  json uavs = json::array();
  for (const auto& u : r.uavs) {
    json traj = json::array();
    for (const auto& q : u.trajectory) traj.push_back({q.x, q.y, q.z});
    uavs.push_back({{"makespan", u.makespan},
                    {"energy", u.energy},
                    {"within_budget", u.within_budget},
                    {"aborted", u.aborted},
                    {"home", to_json(u.home)},
                    {"trajectory", traj}});
  }
  json scan = json::array();
  for (const auto& path : r.scan_paths) {
    json wps = json::array({{path.start.x, path.start.y, path.start.z}});
    for (const auto& c : path.centers) wps.push_back({c.x, c.y, c.z});
    wps.push_back({path.start.x, path.start.y, path.start.z});
    scan.push_back(std::move(wps));
  }
  json first = json::array();
  for (const auto& e : r.scan_estimates) first.push_back(e ? to_json(*e) : json(nullptr));
  return {{"planner", r.planner},
          {"seed_index", r.seed_index},
          {"scan_paths", scan},
          {"scan_estimates", first},
          {"person_count", r.person_count},
          {"scan_end_slot", r.scan_end_slot},
          {"end_slot", r.end_slot},
          {"makespan", r.makespan},
          {"planner_wall_time", r.planner_wall_time},
          {"replans", r.replans},
          {"infeasible_accuracy", r.infeasible_accuracy},
          {"initial_plan", to_json(r.initial_plan)},
          {"persons", persons},
          {"uavs", uavs}};
}

void write_trace(const std::string& path, const std::vector<TraceRecord>& trace) {
  std::ostringstream out;
  for (const auto& t : trace) {
    out << json{{"slot", t.slot},        {"entity", t.entity},     {"x", t.position.x},
                {"y", t.position.y},     {"z", t.position.z},      {"vx", t.velocity.x},
                {"vy", t.velocity.y}}
               .dump()
        << '\n';
  }
  write_file_atomic(path, out.str());
}

const std::vector<std::string>& metrics_columns() {
  static const std::vector<std::string> cols{
      "seed",         "persons",     "planner",     "makespan",          "max_error",
      "mean_error",   "fraction_within_e_th",        "total_energy",      "planner_wall_time",
      "replans"};
  return cols;
}

std::string metrics_header() {
  std::string h;
  for (const auto& c : metrics_columns()) h += (h.empty() ? "" : ",") + c;
  return h;
}

std::string metrics_csv_row(const MetricsRow& row) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%llu,%d,%s,%.6f,%.6f,%.6f,%.6f,%.3f,%.6f,%d",
                static_cast<unsigned long long>(row.seed), row.persons, row.planner.c_str(),
                row.makespan, row.max_error, row.mean_error, row.fraction_within_e_th,
                row.total_energy, row.planner_wall_time, row.replans);
  return buf;
}

namespace {

Vec2 parse_point(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw FormatError(what + ": expected [x, y]");
  }
  const Vec2 v{j[0].get<double>(), j[1].get<double>()};
  if (!is_finite(v)) throw FormatError(what + ": non-finite coordinate");
  return v;
}

std::vector<Vec2> parse_points(const json& doc, const char* key,
                               const std::vector<Vec2>& fallback) {
  if (!doc.contains(key)) return fallback;
  const json& arr = doc.at(key);
  if (!arr.is_array() || arr.empty()) throw FormatError(std::string(key) + ": expected a non-empty array");
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(parse_point(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

PlanningProblem parse_estimates(const json& doc, const std::vector<Vec2>& default_points) {
  if (!doc.is_object()) throw FormatError("estimates file: expected a JSON object");
  if (!doc.contains("estimates") || !doc["estimates"].is_array()) {
    throw FormatError("estimates file: missing 'estimates' array");
  }
  PlanningProblem p;
  p.starts = parse_points(doc, "starts", default_points);
  p.homes = parse_points(doc, "homes", p.starts);
  if (p.homes.size() != p.starts.size()) {
    throw FormatError("estimates file: 'homes' and 'starts' differ in length");
  }
  if (doc.contains("start_slot")) {
    if (!doc["start_slot"].is_number()) throw FormatError("start_slot: expected a number");
    p.start_slot = doc["start_slot"].get<double>();
  }
  const json& list = doc["estimates"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& e = list[i];
    const std::string where = "estimates[" + std::to_string(i) + "]";
    if (!e.is_object()) throw FormatError(where + ": expected an object");
    for (const char* key : {"position", "error_bound"}) {
      if (!e.contains(key)) throw FormatError(where + ": missing '" + key + "'");
    }
    PlanTarget t;
    t.person = e.value("person", static_cast<int>(i));
    t.ref_slot = e.value("ref_slot", 0);
    t.position = parse_point(e["position"], where + ".position");
    t.velocity = e.contains("velocity") ? parse_point(e["velocity"], where + ".velocity") : Vec2{};
    if (!e["error_bound"].is_number() || e["error_bound"].get<double>() < 0.0) {
      throw FormatError(where + ".error_bound: expected a non-negative number");
    }
    t.error_bound = e["error_bound"].get<double>();
    p.targets.push_back(t);
  }
  if (p.targets.empty()) throw FormatError("estimates file: no estimates");
  return p;
}

PlanningProblem load_estimates_file(const std::string& path,
                                    const std::vector<Vec2>& default_points) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open estimates file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw FormatError("estimates file '" + path + "': " + e.what());
  }
  return parse_estimates(doc, default_points);
}

void write_file_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace uavloc
