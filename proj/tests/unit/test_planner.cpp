#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "synthetic.hpp"
#include "uavloc/oracles.hpp"
#include "uavloc/planner.hpp"
#include "uavloc/scan.hpp"

using namespace uavloc;
using doctest::Approx;

namespace {

Scenario small_swarm() {
  Scenario s;
  s.swarm.population = 20;
  s.swarm.iterations = 40;
  return s;
}

void check_partition(const Plan& plan, int targets) {
  std::multiset<int> seen;
  for (const auto& t : plan.tours) {
    for (const auto& v : t.visits) seen.insert(v.target);
  }
  CHECK(static_cast<int>(seen.size()) == targets);
  for (int s = 0; s < targets; ++s) CHECK(seen.count(s) == 1);
}

// Independent predicted error: κ times the log-normal bias at slant range.
double predicted(double ground, double kappa) {
  const double ls = 4.0 / (10.0 * std::log10(std::exp(1.0)) * 2.0);
  return kappa * std::hypot(ground, 100.0) * (std::exp(ls * ls / 2.0) - 1.0);
}

}  // namespace

TEST_CASE("decode") {
  const auto t = decode(std::vector<double>{0.2, 1.7, 0.4}, 2);
  REQUIRE(t.size() == 2);
  CHECK(t[0] == std::vector<int>{0, 2});
  CHECK(t[1] == std::vector<int>{1});

  const auto one = decode(std::vector<double>{0.9, 0.1, 0.5}, 3);
  CHECK(one[0] == std::vector<int>{1, 2, 0});
  CHECK(one[1].empty());

  const auto tie = decode(std::vector<double>{1.5, 0.5, 2.5, 0.5}, 3);
  CHECK(tie[0] == std::vector<int>{1, 3});

  // Out-of-range keys clamp to the first or last UAV.
  const auto clamped = decode(std::vector<double>{-3.0, 9.0}, 2);
  CHECK(clamped[0] == std::vector<int>{0});
  CHECK(clamped[1] == std::vector<int>{1});
}

TEST_CASE("decode always partitions the targets") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> k(0.0, 4.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> keys(10);
    for (double& x : keys) x = k(rng);
    std::vector<int> all;
    for (const auto& tour : decode(keys, 4)) all.insert(all.end(), tour.begin(), tour.end());
    std::sort(all.begin(), all.end());
    std::vector<int> expected(10);
    for (int i = 0; i < 10; ++i) expected[i] = i;
    REQUIRE(all == expected);
  }
}

TEST_CASE("tour time") {
  CHECK(tour_time(std::vector<Vec2>{{0, 0}, {100, 0}, {0, 0}}, 25.0) == Approx(8.0));
  CHECK(tour_time(std::vector<Vec2>{{4, 4}}, 25.0) == 0.0);
  const std::vector<Vec2> fwd{{0, 0}, {30, 40}, {-20, 10}, {0, 0}};
  std::vector<Vec2> rev(fwd.rbegin(), fwd.rend());
  CHECK(tour_time(fwd, 25.0) == Approx(tour_time(rev, 25.0)));
}

TEST_CASE("reference points") {
  const auto p = reference_points({0, 0}, 1.0, 4);
  REQUIRE(p.size() == 4);
  const std::vector<Vec2> expected{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int i = 0; i < 4; ++i) {
    CHECK(p[i].x == Approx(expected[i].x).scale(1.0));
    CHECK(p[i].y == Approx(expected[i].y).scale(1.0));
  }
  for (const auto& q : reference_points({3, 4}, 0.0, 5)) CHECK(q == Vec2{3, 4});
  for (const auto& q : reference_points({3, 4}, 7.5, 11)) CHECK(norm(q - Vec2{3, 4}) == Approx(7.5));
  CHECK_THROWS_AS(reference_points({0, 0}, 1.0, 0), std::invalid_argument);
}

TEST_CASE("access radius: noiseless and unbounded accuracy reach the cap") {
  const double g = ground_coverage_radius(150, 100);
  CHECK(access_radius(5.0, 30.0, {2.0, 0.0}, 100.0, 8, 2.0, g).radius == Approx(g));
  CHECK(access_radius(5.0, 1e12, {}, 100.0, 8, 2.0, g).radius == Approx(g));
}

TEST_CASE("access radius: unreachable accuracy is flagged") {
  const auto r = access_radius(5.0, 5.0, {}, 100.0, 8, 2.0, 111.8);
  CHECK_FALSE(r.feasible);
  CHECK(r.radius == 0.0);
  CHECK_THROWS_AS(access_radius(5.0, 0.0, {}, 100.0, 8, 2.0, 111.8), std::invalid_argument);
}

TEST_CASE("access radius: bisection result agrees with a radius sweep") {
  const double g = ground_coverage_radius(150, 100);
  const auto r = access_radius(5.0, 30.0, {}, 100.0, 8, 2.0, g);
  REQUIRE(r.feasible);
  REQUIRE(r.radius > 0.0);
  REQUIRE(r.radius < g);
  const auto refs = reference_points({0, 0}, 5.0, 8);
  auto worst = [&](double rho) {
    double w = 0.0;
    for (int b = 0; b < 720; ++b) {
      const double th = 2.0 * std::numbers::pi * b / 720;
      const Vec2 wp{rho * std::cos(th), rho * std::sin(th)};
      for (const auto& u : refs) w = std::max(w, predicted(norm(wp - u), 2.0));
    }
    return w;
  };
  for (int i = 0; i <= 1000; ++i) {
    REQUIRE(worst(r.radius * i / 1000.0) <= 30.0 + 1e-9);
  }
  CHECK(worst(r.radius + 1.0) > 30.0);
}

TEST_CASE("edge waypoint") {
  CHECK(edge_waypoint({0, 0}, {100, 0}, 20.0) == Vec2{80, 0});
  CHECK(edge_waypoint({0, 0}, {100, 0}, 0.0) == Vec2{100, 0});
  CHECK(edge_waypoint({95, 1}, {100, 0}, 20.0) == Vec2{95, 1});
}

TEST_CASE("adaptive inertia") {
  CHECK(adaptive_inertia(100, 100, 200, 0.4, 0.9) == Approx(0.4));
  CHECK(adaptive_inertia(200, 100, 200, 0.4, 0.9) == Approx(0.9));
  CHECK(adaptive_inertia(150, 100, 200, 0.4, 0.9) == Approx(0.65));
  CHECK(adaptive_inertia(250, 100, 200, 0.4, 0.9) == 0.9);
  CHECK(adaptive_inertia(100, 100, 100, 0.4, 0.9) == 0.4);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 500.0);
  for (int i = 0; i < 1000; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const double e = adaptive_inertia(u(rng), a, b, 0.4, 0.9);
    REQUIRE(e >= 0.4);
    REQUIRE(e <= 0.9);
  }
}

TEST_CASE("fitness: one UAV, two fixed targets") {
  Scenario s;
  s.edge_access = false;
  PlanningProblem p;
  p.targets = {{0, 0, {100, 0}, {0, 0}, 5.0}, {1, 0, {0, 100}, {0, 0}, 5.0}};
  p.starts = {{0, 0}};
  p.homes = {{0, 0}};
  const double a = fitness(std::vector<double>{0.1, 0.2}, p, s);
  const double b = fitness(std::vector<double>{0.2, 0.1}, p, s);
  CHECK(std::min(a, b) == Approx((200.0 + std::sqrt(20000.0)) / 25.0));
  CHECK(std::min(a, b) == Approx(13.657).epsilon(1e-4));
}

TEST_CASE("fitness: overhead flight is the tour through the predicted positions") {
  Scenario s;
  s.edge_access = false;
  const auto p = synth::random_problem(5, 2, 8);
  const std::vector<double> keys{0.3, 1.2, 0.7, 1.9, 0.1};
  const Plan plan = build_plan(keys, p, s);
  for (const auto& tour : plan.tours) {
    for (const auto& v : tour.visits) {
      CHECK(v.radius == 0.0);
      CHECK(v.waypoint == v.predicted);
    }
  }
  const auto order = decode(keys, 2);
  double worst = 0.0;
  for (int m = 0; m < 2; ++m) {
    worst = std::max(worst, oracle::tour_makespan(p, m, order[m], s.uav_vmax, s.slot_duration));
  }
  CHECK(plan.makespan == Approx(worst).epsilon(1e-9));
}

TEST_CASE("fitness: edge access never lengthens a plan") {
  Scenario edge, overhead;
  overhead.edge_access = false;
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = synth::random_problem(6, 3, 100 + trial % 25);
    std::uniform_real_distribution<double> k(0.0, 3.0);
    std::vector<double> keys(6);
    for (double& x : keys) x = k(rng);
    REQUIRE(fitness(keys, p, edge) <= fitness(keys, p, overhead) + 1e-9);
  }
}

TEST_CASE("fitness: energy overrun is penalised") {
  Scenario s;
  s.energy_budget = 100.0;
  const auto p = synth::random_problem(3, 1, 4);
  const Plan plan = build_plan(std::vector<double>{0.1, 0.5, 0.9}, p, s);
  CHECK(plan.tours[0].over_budget);
  CHECK(plan.fitness >= kInfeasiblePenalty);
}

TEST_CASE("planner names") {
  CHECK(parse_planner("epso") == PlannerKind::epso);
  CHECK(to_string(PlannerKind::ga) == "ga");
  CHECK_THROWS_AS(parse_planner("foo"), std::invalid_argument);
}

TEST_CASE("solvers: single target plan is forced") {
  Scenario s = small_swarm();
  s.edge_access = false;
  PlanningProblem p;
  p.targets = {{0, 0, {300, 200}, {0, 0}, 5.0}};
  p.starts = {{0, 0}};
  p.homes = {{0, 0}};
  const double expected = 2.0 * std::hypot(300.0, 200.0) / 25.0;
  for (auto kind : {PlannerKind::epso, PlannerKind::pso, PlannerKind::ga}) {
    const Plan plan = solve(kind, p, s, 5);
    CHECK(plan.makespan == Approx(expected));
    CHECK(plan.planner == to_string(kind));
  }
}

TEST_CASE("solvers: deterministic, elitist and covering") {
  const Scenario s = small_swarm();
  const auto p = synth::random_problem(6, 2, 21);
  for (auto kind : {PlannerKind::epso, PlannerKind::pso, PlannerKind::ga}) {
    const Plan a = solve(kind, p, s, 99);
    const Plan b = solve(kind, p, s, 99);
    CHECK(a.keys == b.keys);
    CHECK(a.makespan == b.makespan);
    REQUIRE_FALSE(a.best_history.empty());
    for (std::size_t i = 1; i < a.best_history.size(); ++i) {
      CHECK(a.best_history[i] <= a.best_history[i - 1]);
    }
    CHECK(a.fitness <= a.initial_best);
    check_partition(a, 6);
    for (const auto& tour : a.tours) {
      CHECK(tour.waypoints.front() == tour.waypoints.back());
      CHECK_FALSE(tour.over_budget);
    }
  }
}

TEST_CASE("solvers: desk instance close to the exhaustive optimum") {
  Scenario s;
  s.edge_access = false;
  const auto p = synth::random_problem(6, 2, 3);
  const auto best = oracle::brute_force_mtsp(p, s.uav_vmax, s.slot_duration);
  const Plan plan = epso_solve(p, s, 17);
  CHECK(plan.makespan <= 1.02 * best.makespan);
  CHECK(plan.makespan >= best.makespan - 1e-9);
}

TEST_CASE("planning problem validation") {
  PlanningProblem p;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.starts = {{0, 0}};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.homes = {{0, 0}};
  CHECK_NOTHROW(p.validate());
  p.energy_used = {1.0, 2.0};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
