#include "uavloc/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "uavloc/energy.hpp"
#include "uavloc/error_bound.hpp"
#include "uavloc/mle.hpp"

namespace uavloc {

void PlanningProblem::validate() const {
  if (starts.empty()) {
    throw std::invalid_argument("PlanningProblem: need at least one UAV");
  }
  if (homes.size() != starts.size()) {
    throw std::invalid_argument("PlanningProblem: one home per UAV required");
  }
  if (!energy_used.empty() && energy_used.size() != starts.size()) {
    throw std::invalid_argument("PlanningProblem: energy_used must match the UAV count");
  }
  for (const auto& t : targets) {
    if (!is_finite(t.position) || !is_finite(t.velocity) || !(t.error_bound >= 0.0)) {
      throw std::invalid_argument("PlanningProblem: target with non-finite state");
    }
  }
}

std::vector<std::vector<int>> decode(std::span<const double> keys, int uav_count) {
  std::vector<std::vector<int>> tours(std::max(uav_count, 1));
  for (int s = 0; s < static_cast<int>(keys.size()); ++s) {
    const int m = std::clamp(static_cast<int>(std::floor(keys[s])), 0, uav_count - 1);
    tours[m].push_back(s);
  }
  for (auto& tour : tours) {
    std::stable_sort(tour.begin(), tour.end(), [&](int a, int b) {
      const double fa = keys[a] - std::floor(keys[a]);
      const double fb = keys[b] - std::floor(keys[b]);
      return fa < fb;
    });
  }
  return tours;
}

double tour_time(std::span<const Vec2> waypoints, double vmax) {
  double length = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    length += norm(waypoints[i] - waypoints[i - 1]);
  }
  return length / vmax;
}

std::vector<Vec2> reference_points(const Vec2& center, double radius, int count) {
  if (count < 1) {
    throw std::invalid_argument("reference_points: count must be >= 1");
  }
  std::vector<Vec2> pts;
  pts.reserve(count);
  for (int r = 0; r < count; ++r) {
    const double th = 2.0 * std::numbers::pi * r / count;
    pts.push_back({center.x + radius * std::cos(th), center.y + radius * std::sin(th)});
  }
  return pts;
}

double predicted_error(double ground_distance, const RangingParams& ranging, double altitude,
                       double kappa) {
  return kappa * mean_range_error(std::hypot(ground_distance, altitude), ranging);
}

AccessRadius access_radius(double reference_error, double e_th, const RangingParams& ranging,
                           double altitude, int reference_count, double kappa, double cap) {
  if (!(e_th > 0.0)) {
    throw std::invalid_argument("access_radius: e_th must be positive");
  }
  // Candidate waypoint bearings: toward and away from each reference point.
  // For a waypoint b·ρ and reference point u (|u| = e),
  // |b·ρ − u|² = ρ² + e² − 2ρ(b·u); only the most unfavourable b·u matters.
  const auto refs = reference_points(Vec2{}, 1.0, reference_count);
  double worst_alignment = 1.0;
  for (const auto& dir : refs) {
    for (const Vec2 b : {dir, -dir}) {
      for (const auto& u : refs) {
        worst_alignment = std::min(worst_alignment, dot(b, u));
      }
    }
  }
  const double e = reference_error;
  auto satisfied = [&](double rho) {
    const double d2 = rho * rho + e * e - 2.0 * rho * e * worst_alignment;
    return predicted_error(std::sqrt(std::max(0.0, d2)), ranging, altitude, kappa) <= e_th;
  };

  if (predicted_error(0.0, ranging, altitude, kappa) > e_th) {
    return {0.0, false};
  }
  // A reference circle too wide for any waypoint still allows flying overhead.
  if (!satisfied(0.0)) {
    return {0.0, true};
  }
  cap = std::max(0.0, cap);
  if (satisfied(cap)) {
    return {cap, true};
  }
  double lo = 0.0;
  double hi = cap;
  while (hi - lo > 0.1) {
    const double mid = 0.5 * (lo + hi);
    (satisfied(mid) ? lo : hi) = mid;
  }
  return {lo, true};
}

Vec2 edge_waypoint(const Vec2& prev, const Vec2& center, double radius) {
  const Vec2 d = prev - center;
  const double dist = norm(d);
  if (dist <= radius) {
    return prev;
  }
  return center + d * (radius / dist);
}

double adaptive_inertia(double f, double f_min, double f_avg, double eps_min, double eps_max) {
  if (f > f_avg) {
    return eps_max;
  }
  if (!(f_avg > f_min)) {
    return eps_min;
  }
  const double eps = eps_min + (eps_max - eps_min) * (f - f_min) / (f_avg - f_min);
  return std::clamp(eps, eps_min, eps_max);
}

Plan build_plan(std::span<const double> keys, const PlanningProblem& problem,
                const Scenario& scenario) {
  if (keys.size() != problem.targets.size()) {
    throw std::invalid_argument("build_plan: one key per target required");
  }
  const int m_count = problem.uav_count();
  const double vmax = scenario.uav_vmax;
  const double dt = scenario.slot_duration;
  const double g = scenario.ground_radius();
  const double refine_margin = vmax * scenario.refine_slots * dt;
  const double cruise_power = propulsion_power(vmax, scenario.power);

  Plan plan;
  plan.keys.assign(keys.begin(), keys.end());
  const auto order = decode(keys, m_count);
  for (int m = 0; m < m_count; ++m) {
    UavTour tour;
    Vec2 pos = problem.starts[m];
    double slot = problem.start_slot;
    tour.waypoints.push_back(pos);
    for (int idx : order[m]) {
      const PlanTarget& t = problem.targets[idx];
      const Hypothesis h{t.position, t.velocity};
      const double from = std::max(slot, static_cast<double>(t.ref_slot));
      // Aim at the position predicted for the straight-line arrival time.
      const Vec2 now = h.position + h.velocity * ((from - t.ref_slot) * dt);
      const double arrival_guess = slot + norm(now - pos) / vmax / dt;
      const double at = std::max(arrival_guess, static_cast<double>(t.ref_slot));
      const Vec2 predicted = h.position + h.velocity * ((at - t.ref_slot) * dt);
      const double bound =
          error_at_time(ErrorModel{t.error_bound, scenario.alpha, t.ref_slot}, at, dt);

      Visit v;
      v.target = idx;
      v.person = t.person;
      v.predicted = predicted;
      v.predicted_bound = bound;
      // Every point the person may occupy must stay within reception range.
      const double cap = std::max(0.0, g - refine_margin - bound);
      const AccessRadius ar =
          access_radius(bound, scenario.e_th, scenario.ranging, scenario.altitude,
                        scenario.reference_points, scenario.kappa, cap);
      v.infeasible = !ar.feasible;
      v.radius = scenario.edge_access ? ar.radius : 0.0;
      v.waypoint = edge_waypoint(pos, predicted, v.radius);
      slot += norm(v.waypoint - pos) / vmax / dt;
      v.arrival_slot = slot;
      pos = v.waypoint;
      tour.waypoints.push_back(pos);
      tour.visits.push_back(v);
      if (v.infeasible) ++plan.infeasible_targets;
    }
    tour.waypoints.push_back(problem.homes[m]);
    tour.time = tour_time(tour.waypoints, vmax);
    const double used = problem.energy_used.empty() ? 0.0 : problem.energy_used[m];
    tour.energy = used + cruise_power * tour.time;
    tour.over_budget = !check_budget(tour.energy, scenario.energy_budget).within;
    plan.makespan = std::max(plan.makespan, tour.time);
    plan.tours.push_back(std::move(tour));
  }
  int over = 0;
  for (const auto& t : plan.tours) over += t.over_budget ? 1 : 0;
  plan.fitness = plan.makespan + kInfeasiblePenalty * (plan.infeasible_targets + over);
  return plan;
}

double fitness(std::span<const double> keys, const PlanningProblem& problem,
               const Scenario& scenario) {
  return build_plan(keys, problem, scenario).fitness;
}

PlannerKind parse_planner(const std::string& name) {
  if (name == "epso") return PlannerKind::epso;
  if (name == "pso") return PlannerKind::pso;
  if (name == "ga") return PlannerKind::ga;
  throw std::invalid_argument("unknown planner '" + name + "' (expected epso, pso or ga)");
}

std::string to_string(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::epso: return "epso";
    case PlannerKind::pso: return "pso";
    case PlannerKind::ga: return "ga";
  }
  return "?";
}

}  // namespace uavloc
