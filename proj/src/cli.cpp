#include "uavloc/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "uavloc/energy.hpp"
#include "uavloc/io.hpp"
#include "uavloc/mle.hpp"
#include "uavloc/oracles.hpp"
#include "uavloc/planner.hpp"
#include "uavloc/scan.hpp"
#include "uavloc/sim.hpp"

namespace uavloc::cli {

namespace fs = std::filesystem;

int worker_count() {
  if (const char* env = std::getenv("UAVLOC_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

std::vector<Vec2> strip_corners(const Scenario& sc) {
  std::vector<Vec2> pts;
  for (const auto& s : partition_area({0.0, 0.0, sc.area_length, sc.area_width}, sc.uav_count)) {
    pts.push_back({s.x0, s.y0});
  }
  return pts;
}

std::string row_id(int persons, std::uint64_t seed, const std::string& planner) {
  return "S" + std::to_string(persons) + "_seed" + std::to_string(seed) + "_" + planner;
}

}  // namespace

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  Scenario sc;
  PlannerKind kind{};
  try {
    sc = load_scenario_file(args.scenario);
    kind = parse_planner(args.planner);
    fs::create_directories(args.out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  World world;
  const MissionReport report = run_mission(sc, kind, args.seed, &world);
  const MetricsRow row = collect_metrics(report, sc.e_th);
  const fs::path dir(args.out);
  write_trace(dir / "trace.jsonl", world.trace);
  write_file_atomic(dir / "report.json", to_json(report).dump(2) + "\n");
  write_file_atomic(dir / "metrics.csv", metrics_header() + "\n" + metrics_csv_row(row) + "\n");

  out << "makespan " << std::fixed << std::setprecision(3) << row.makespan << " s\n"
      << "max_error " << row.max_error << " m\n";
  if (report.infeasible_accuracy) {
    err << "error: infeasible accuracy: e_th = " << sc.e_th
        << " m cannot be met even directly overhead for "
        << report.initial_plan.infeasible_targets << " target(s)\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  Scenario base;
  std::vector<PlannerKind> kinds;
  try {
    base = load_scenario_file(args.scenario);
    if (args.persons.empty() || args.seeds < 1 || args.planners.empty()) {
      throw ConfigError("sweep axes must be non-empty");
    }
    for (int s : args.persons) {
      if (s < 0) throw ConfigError("field 'persons': counts must be non-negative");
    }
    for (const auto& p : args.planners) kinds.push_back(parse_planner(p));
    fs::create_directories(fs::path(args.out) / "rows");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  struct Job {
    int persons;
    std::uint64_t seed;
    PlannerKind planner;
  };
  std::vector<Job> jobs;
  for (int s : args.persons) {
    for (int k = 0; k < args.seeds; ++k) {
      for (auto p : kinds) jobs.push_back({s, static_cast<std::uint64_t>(k), p});
    }
  }
  std::vector<std::string> rows(jobs.size());
  std::vector<std::string> failures(jobs.size());
  std::atomic<std::size_t> next{0};
  const fs::path row_dir = fs::path(args.out) / "rows";

  auto worker = [&]() {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& j = jobs[i];
      const std::string id = row_id(j.persons, j.seed, to_string(j.planner));
      try {
        Scenario sc = base;
        sc.person_count = j.persons;
        const MissionReport report = run_mission(sc, j.planner, j.seed);
        rows[i] = metrics_csv_row(collect_metrics(report, sc.e_th));
        write_file_atomic(row_dir / (id + ".csv"), rows[i] + "\n");
      } catch (const std::exception& e) {
        failures[i] = e.what();
        write_file_atomic(row_dir / (id + ".err"), failures[i] + "\n");
      }
    }
  };
  const int n = std::clamp(args.workers > 0 ? args.workers : worker_count(), 1,
                           static_cast<int>(jobs.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string table = metrics_header() + "\n";
  int failed = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!failures[i].empty()) {
      ++failed;
      err << "row " << row_id(jobs[i].persons, jobs[i].seed, to_string(jobs[i].planner))
          << " failed: " << failures[i] << '\n';
      continue;
    }
    table += rows[i] + "\n";
  }
  write_file_atomic(fs::path(args.out) / "metrics.csv", table);
  out << jobs.size() - failed << " rows written to " << (fs::path(args.out) / "metrics.csv").string()
      << '\n';
  return failed == static_cast<int>(jobs.size()) ? kExitConfig : kExitOk;
}

int cmd_plan(const PlanArgs& args, std::ostream& out, std::ostream& err) {
  Scenario sc;
  PlannerKind kind{};
  PlanningProblem problem;
  try {
    sc = load_scenario_file(args.scenario);
    kind = parse_planner(args.planner);
    problem = load_estimates_file(args.estimates, strip_corners(sc));
    problem.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  const Plan plan = solve(kind, problem, sc, stream_seed(sc.seed, {args.seed, 0x706c616eULL}));
  out << std::fixed << std::setprecision(3);
  for (std::size_t m = 0; m < plan.tours.size(); ++m) {
    const auto& t = plan.tours[m];
    out << "uav " << m << ":";
    for (const auto& v : t.visits) out << " p" << v.person;
    out << "  time " << t.time << " s\n";
    out << "  waypoints:";
    for (const auto& p : t.waypoints) out << " (" << p.x << ", " << p.y << ")";
    out << '\n';
  }
  out << "makespan " << plan.makespan << " s\n";
  if (plan.infeasible_targets > 0) {
    err << "error: infeasible accuracy for " << plan.infeasible_targets << " target(s)\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

namespace {

struct Report {
  std::ostream& out;
  bool all = true;
  void line(const std::string& name, bool pass, const std::string& detail) {
    all = all && pass;
    out << (pass ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
  }
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream s;
  s << std::setprecision(prec) << v;
  return s.str();
}

// Noisy annulus geometries around a random person, seen from a curved pass.
std::vector<Annulus> annulus_fixture(std::mt19937_64& rng, Vec2* estimate) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const RangingParams ranging{};
  const Vec2 person{40.0 * u(rng), 40.0 * u(rng)};
  std::vector<Annulus> annuli;
  for (int k = 0; k < 4; ++k) {
    const double th = 0.6 * k + 0.3 * u(rng);
    const Vec2 c{110.0 * std::cos(th), 110.0 * std::sin(th)};
    const double d = norm(c - person) * std::exp(0.1 * u(rng));
    annuli.push_back(build_annulus(d, ranging, 1.5, 0.1 * (3 - k), c));
  }
  *estimate = person + Vec2{5.0 * u(rng), 5.0 * u(rng)};
  return annuli;
}

}  // namespace

int cmd_validate(const ValidateArgs& args, std::ostream& out, std::ostream& err) {
  Scenario sc;
  try {
    if (!args.scenario.empty()) sc = load_scenario_file(args.scenario);
    fs::create_directories(args.out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  Report rep{out};

  {
    const RangingParams rp{2.0, 4.0};
    const auto mc = oracle::ranging_moments(100.0, rp, 1'000'000, 11);
    const double expected = 100.0 * std::exp(0.5 * log_std(rp) * log_std(rp));
    const auto bias = oracle::mean_error_check(mean_range_error, 100.0, rp, 1'000'000, 12);
    const bool pass = std::abs(mc.mean - expected) <= 0.01 * expected &&
                      std::abs(mc.log_var / (log_std(rp) * log_std(rp)) - 1.0) <= 0.05 && bias.pass;
    rep.line("ranging-moments", pass,
             "mean " + fmt(mc.mean, 6) + " (expected " + fmt(expected, 6) + "), bias " +
                 fmt(bias.observed) + " vs mean_range_error " + fmt(bias.expected));
  }

  {
    Scenario plan_sc = sc;
    plan_sc.edge_access = false;
    plan_sc.energy_budget = 1e12;
    int within = 0;
    const int instances = 3;
    for (int k = 0; k < instances; ++k) {
      std::mt19937_64 rng(stream_seed(99, {static_cast<std::uint64_t>(k)}));
      std::uniform_real_distribution<double> x(0.0, 1120.0), y(0.0, 640.0), v(-1.0, 1.0);
      PlanningProblem p;
      p.starts = {{0.0, 0.0}, {560.0, 0.0}};
      p.homes = p.starts;
      for (int s = 0; s < 6; ++s) {
        p.targets.push_back({s, 0, {x(rng), y(rng)}, {v(rng), v(rng)}, 5.0});
      }
      const auto best = oracle::brute_force_mtsp(p, plan_sc.uav_vmax, plan_sc.slot_duration);
      const Plan plan = epso_solve(p, plan_sc, stream_seed(7, {static_cast<std::uint64_t>(k)}));
      if (plan.makespan <= 1.02 * best.makespan) ++within;
    }
    rep.line("mtsp-brute-force", within == instances,
             std::to_string(within) + "/" + std::to_string(instances) +
                 " instances within 2% of the exhaustive optimum");
  }

  {
    std::mt19937_64 rng(31);
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      Vec2 est;
      const auto annuli = annulus_fixture(rng, &est);
      const double fast = farthest_point_error(annuli, est).error;
      const double slow = oracle::polar_farthest(annuli, est);
      worst = std::max(worst, std::abs(fast - slow) / std::max(slow, 1e-9));
    }
    rep.line("annulus-oracle", worst <= 0.02, "max relative deviation " + fmt(worst));
  }

  {
    const auto cal = oracle::calibrate_kappa(sc, 50.0, sc.min_window_slots, 100, 5);
    const bool pass = cal.kappa > 0.0 && cal.kappa < 10.0;
    rep.line("kappa-calibration", pass,
             "kappa " + fmt(cal.kappa) + " (p90 error " + fmt(cal.quantile_error) + " m)");
    nlohmann::json side{{"kappa", cal.kappa},
                        {"quantile", 0.9},
                        {"quantile_error", cal.quantile_error},
                        {"mean_range_error", cal.mean_range_error},
                        {"trials", cal.trials}};
    write_file_atomic((fs::path(args.out) / "kappa.json").string(), side.dump(2) + "\n");
  }

  {
    const double p0 = propulsion_power(0.0, sc.power);
    const long double hi = oracle::power(25.0L, sc.power);
    const double p25 = propulsion_power(25.0, sc.power);
    const bool pass = p0 == sc.power.p0 + sc.power.p1 &&
                      std::abs(p25 - static_cast<double>(hi)) <= 0.01 * static_cast<double>(hi);
    rep.line("power-oracle", pass,
             "P(0) " + fmt(p0, 8) + ", P(25) " + fmt(p25, 8) + " vs " +
                 fmt(static_cast<double>(hi), 8));
  }

  return rep.all ? kExitOk : kExitValidation;
}

}  // namespace uavloc::cli
