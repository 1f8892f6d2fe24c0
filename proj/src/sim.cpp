#include "uavloc/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "uavloc/energy.hpp"
#include "uavloc/ranging.hpp"

namespace uavloc {

MobilityParams MobilityParams::from(const Scenario& s) {
  return {s.person_vmax, s.resample_interval, s.slot_duration,
          Area{0.0, 0.0, s.area_length, s.area_width}};
}

PersonState person_mobility_step(const PersonState& state, int slot, std::mt19937_64& rng,
                                 const MobilityParams& params) {
  PersonState s = state;
  const int every = params.resample_interval;
  const bool redraw = every >= 0 && (slot == 0 || (every > 0 && slot % every == 0));
  if (redraw) {
    std::uniform_real_distribution<double> heading(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> speed(0.0, params.vmax);
    const double th = heading(rng);
    const double v = speed(rng);
    s.velocity = {v * std::cos(th), v * std::sin(th), 0.0};
  }
  return advance(s, params.slot_duration, params.area);
}

void PathFollower::set_route(std::vector<Leg> route) {
  route_ = std::move(route);
  next_ = 0;
}

std::vector<PathFollower::Leg> PathFollower::remaining() const {
  return {route_.begin() + static_cast<std::ptrdiff_t>(next_), route_.end()};
}

PathFollower::Step PathFollower::step(double distance, double speed) {
  Step out;
  Vec3 heading{};
  double left = distance;
  while (!done()) {
    const Vec3 seg = route_[next_].point - position_;
    const double len = norm(seg);
    if (len <= left) {
      position_ = route_[next_].point;
      left -= len;
      out.travelled += len;
      if (len > 0.0) heading = seg * (1.0 / len);
      out.reached.push_back(route_[next_].tag);
      ++next_;
      continue;
    }
    if (left <= 0.0) break;
    heading = seg * (1.0 / len);
    position_ += heading * left;
    out.travelled += left;
    left = 0.0;
    break;
  }
  out.velocity = out.travelled > 0.0 ? heading * speed : Vec3{};
  return out;
}

std::vector<const RangeWindow*> ReceptionLog::for_person(int person) const {
  std::vector<const RangeWindow*> out;
  for (const auto& [key, list] : windows) {
    if (key.second != person) continue;
    for (const auto& w : list) out.push_back(&w);
  }
  return out;
}

namespace {

constexpr std::uint64_t kTagMobility = 0x6d6f62ULL;
constexpr std::uint64_t kTagRanging = 0x726e67ULL;
constexpr std::uint64_t kTagMirror = 0x6d6972ULL;
constexpr std::uint64_t kTagPlacement = 0x706c63ULL;

World base_world(const Scenario& scenario, std::uint64_t world_seed) {
  check_scenario(scenario);
  World w;
  w.scenario = scenario;
  w.mobility = MobilityParams::from(scenario);
  w.mirror_rng.seed(stream_seed(world_seed, {kTagMirror}));
  const auto strips = partition_area({0.0, 0.0, scenario.area_length, scenario.area_width},
                                     scenario.uav_count);
  for (const auto& strip : strips) {
    const Vec2 home{strip.x0, strip.y0};
    w.homes.push_back(home);
    w.uavs.push_back({lift(home, scenario.altitude), {}});
  }
  w.energy.assign(scenario.uav_count, 0.0);
  w.uav_path.resize(scenario.uav_count);
  w.uav_speeds.resize(scenario.uav_count);
  return w;
}

void seed_person_streams(World& w, std::uint64_t world_seed) {
  for (std::size_t s = 0; s < w.persons.size(); ++s) {
    w.mobility_rng.emplace_back(stream_seed(world_seed, {kTagMobility, s}));
    w.ranging_rng.emplace_back(stream_seed(world_seed, {kTagRanging, s}));
  }
}

void record(World& w) {
  // Each slot is recorded once, even when a phase boundary revisits it.
  if (static_cast<int>(w.truth.size()) > w.slot) return;
  std::vector<Vec2> now;
  now.reserve(w.persons.size());
  for (const auto& p : w.persons) now.push_back(ground(p.position));
  w.truth.push_back(std::move(now));
  for (std::size_t m = 0; m < w.uavs.size(); ++m) w.uav_path[m].push_back(w.uavs[m].position);
  if (!w.record_trace) return;
  for (std::size_t m = 0; m < w.uavs.size(); ++m) {
    w.trace.push_back({w.slot, "uav" + std::to_string(m), w.uavs[m].position,
                       ground(w.uavs[m].velocity)});
  }
  for (std::size_t s = 0; s < w.persons.size(); ++s) {
    w.trace.push_back({w.slot, "person" + std::to_string(s), w.persons[s].position,
                       ground(w.persons[s].velocity)});
  }
}

std::vector<double> draw_samples(World& w, int person, double d) {
  std::vector<double> out(w.scenario.samples_per_slot);
  for (auto& r : out) r = sample_range(d, w.scenario.ranging, w.ranging_rng[person]);
  w.samples_drawn += out.size();
  return out;
}

bool in_range(const World& w, int m, int s, double* d_out = nullptr) {
  const double d = distance(w.uavs[m].position, w.persons[s].position);
  if (d_out) *d_out = d;
  return d <= w.scenario.comm_range;
}

void step_persons(World& w) {
  for (std::size_t s = 0; s < w.persons.size(); ++s) {
    w.persons[s] = person_mobility_step(w.persons[s], w.slot, w.mobility_rng[s], w.mobility);
  }
}

// Moves UAV m one slot and books its energy; returns the waypoint tags reached.
std::vector<int> step_uav(World& w, PathFollower& f, int m) {
  const double v = w.scenario.uav_vmax;
  const double dt = w.scenario.slot_duration;
  const auto st = f.step(v * dt, v);
  const double speed = st.travelled / dt;
  w.uavs[m].position = f.position();
  w.uavs[m].velocity = st.velocity;
  w.energy[m] += propulsion_power(speed, w.scenario.power) * dt;
  w.uav_speeds[m].push_back(speed);
  return st.reached;
}

}  // namespace

World make_world(const Scenario& scenario, std::uint64_t world_seed) {
  World w = base_world(scenario, world_seed);
  std::mt19937_64 place(stream_seed(world_seed, {kTagPlacement}));
  std::uniform_real_distribution<double> ux(0.0, scenario.area_length);
  std::uniform_real_distribution<double> uy(0.0, scenario.area_width);
  for (int s = 0; s < scenario.person_count; ++s) {
    const double x = ux(place);
    const double y = uy(place);
    w.persons.push_back({{x, y, 0.0}, {}});
  }
  seed_person_streams(w, world_seed);
  return w;
}

World make_world(const Scenario& scenario, std::vector<PersonState> persons,
                 std::uint64_t world_seed, bool keep_velocity) {
  Scenario sc = scenario;
  sc.person_count = static_cast<int>(persons.size());
  World w = base_world(sc, world_seed);
  w.persons = std::move(persons);
  seed_person_streams(w, world_seed);
  if (keep_velocity) {
    // Velocities given by the caller: never redraw, including at slot 0.
    w.mobility.resample_interval = -1;
  }
  return w;
}

std::vector<ScanPath> plan_scan(const Scenario& scenario) {
  const double g = ground_coverage_radius(scenario.comm_range, scenario.altitude);
  std::vector<ScanPath> paths;
  for (const auto& strip : partition_area({0.0, 0.0, scenario.area_length, scenario.area_width},
                                          scenario.uav_count)) {
    paths.push_back(
        boustrophedon_path(build_grid(strip, g), {strip.x0, strip.y0}, scenario.altitude));
  }
  return paths;
}

Phase1Result simulate_phase1(World& w, const std::vector<ScanPath>& paths) {
  const Scenario& sc = w.scenario;
  const int M = static_cast<int>(w.uavs.size());
  const int S = static_cast<int>(w.persons.size());
  if (static_cast<int>(paths.size()) != M) {
    throw std::invalid_argument("simulate_phase1: one scan path per UAV required");
  }

  Phase1Result out;
  out.paths = paths;
  std::vector<PathFollower> followers;
  for (int m = 0; m < M; ++m) {
    followers.emplace_back(paths[m].start);
    w.uavs[m].position = paths[m].start;
    std::vector<PathFollower::Leg> route;
    for (std::size_t i = 0; i < paths[m].centers.size(); ++i) {
      route.push_back({paths[m].centers[i], static_cast<int>(i)});
    }
    followers[m].set_route(std::move(route));
  }

  // Current sweep lane of each UAV: the lane of the waypoint it is flying to.
  auto lane_of = [&](int m) {
    const auto* leg = followers[m].current();
    const auto& lanes = paths[m].lanes;
    if (lanes.empty()) return 0;
    return leg ? lanes[leg->tag] : lanes.back();
  };

  struct Open {
    bool active = false;
    int lane = 0;
    RangeWindow window;
  };
  std::vector<Open> open(static_cast<std::size_t>(M) * S);
  auto close = [&](int m, int s) {
    Open& o = open[static_cast<std::size_t>(m) * S + s];
    if (!o.active) return;
    out.log.windows[{m, s}].push_back(std::move(o.window));
    o = Open{};
  };

  const int max_slots = 50'000'000;
  for (;;) {
    record(w);
    for (int m = 0; m < M; ++m) {
      const int lane = lane_of(m);
      for (int s = 0; s < S; ++s) {
        Open& o = open[static_cast<std::size_t>(m) * S + s];
        double d = 0.0;
        if (!in_range(w, m, s, &d)) {
          close(m, s);
          continue;
        }
        // A new sweep lane restarts the window; older data is discarded later.
        if (o.active && o.lane != lane) close(m, s);
        if (!o.active) {
          o.active = true;
          o.lane = lane;
          o.window.uav = m;
          o.window.person = s;
          o.window.start_slot = w.slot;
        }
        o.window.uav_positions.push_back(w.uavs[m].position);
        o.window.samples.push_back(draw_samples(w, s, d));
      }
    }
    const bool finished =
        std::all_of(followers.begin(), followers.end(), [](const auto& f) { return f.done(); });
    if (finished || w.slot >= max_slots) break;
    step_persons(w);
    for (int m = 0; m < M; ++m) step_uav(w, followers[m], m);
    ++w.slot;
  }
  for (int m = 0; m < M; ++m) {
    for (int s = 0; s < S; ++s) close(m, s);
  }
  out.end_slot = w.slot;

  const FitOptions opts = FitOptions::from(sc);
  out.estimates.resize(S);
  out.windows.resize(S);
  for (int s = 0; s < S; ++s) {
    const RangeWindow* chosen = nullptr;
    // Latest sufficiently long window; otherwise the longest usable one.
    for (const auto* win : out.log.for_person(s)) {
      if (win->slot_count() < sc.min_window_slots) continue;
      if (!chosen || win->end_slot() > chosen->end_slot() ||
          (win->end_slot() == chosen->end_slot() && win->slot_count() > chosen->slot_count())) {
        chosen = win;
      }
    }
    if (!chosen) {
      for (const auto* win : out.log.for_person(s)) {
        if (win->slot_count() < 3) continue;
        if (!chosen || win->slot_count() > chosen->slot_count()) chosen = win;
      }
    }
    if (chosen) {
      out.estimates[s] = fit_track(*chosen, opts);
      out.windows[s] = *chosen;
    }
  }
  return out;
}

namespace {

enum class Stage { idle, pending, refining, done };

struct Tracked {
  Stage stage = Stage::idle;
  int uav = -1;
  bool detected = false;
  TrackEstimate estimate;                  // best so far, chosen hypothesis first
  std::optional<RangeWindow> scan_window;  // phase-1 data behind the first estimate
  std::optional<Hypothesis> alternative;   // untried mirror at estimate.ref_slot
  RangeWindow window;
  int last_sample = -1;
  int arrival = -1;
  bool located = false;
  bool visited = false;
  bool swapped = false;
};

// Log-likelihood of the best speed-bounded constant-velocity track on `win`
// that passes through `at` at slot `at_slot`. Coarse grid over the velocity
// disc, then one finer grid around the best cell.
double best_track_likelihood(const RangeWindow& win, const Vec2& at, int at_slot, double vmax,
                             const RangingParams& ranging, double dt) {
  const double lag = (at_slot - win.start_slot) * dt;
  auto score = [&](const Vec2& v) {
    return window_log_likelihood(win, at - v * lag, v, ranging, dt);
  };
  constexpr int kCells = 10;
  Vec2 best_v{};
  double best = score(best_v);
  double step = vmax / kCells;
  Vec2 center{};
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = -kCells; i <= kCells; ++i) {
      for (int j = -kCells; j <= kCells; ++j) {
        const Vec2 v = center + Vec2{i * step, j * step};
        if (norm(v) > vmax) continue;
        const double ll = score(v);
        if (ll > best) {
          best = ll;
          best_v = v;
        }
      }
    }
    center = best_v;
    step /= kCells;
  }
  return best;
}

PlanTarget as_target(int person, const TrackEstimate& e) {
  return {person, e.ref_slot, e.position, e.velocity, e.error_bound};
}

}  // namespace

MissionReport simulate_phase2(World& w, Phase1Result phase1, PlannerKind planner,
                              std::uint64_t planner_seed) {
  const Scenario& sc = w.scenario;
  const int M = static_cast<int>(w.uavs.size());
  const int S = static_cast<int>(w.persons.size());
  const double dt = sc.slot_duration;
  const double cruise = propulsion_power(sc.uav_vmax, sc.power);
  const FitOptions opts = FitOptions::from(sc);

  MissionReport report;
  report.planner = to_string(planner);
  report.person_count = S;
  report.scan_end_slot = phase1.end_slot;
  report.scan_paths = phase1.paths;
  report.scan_estimates = phase1.estimates;
  report.uavs.resize(M);

  std::vector<Tracked> track(S);
  for (int s = 0; s < S; ++s) {
    auto& est = phase1.estimates[s];
    if (!est) continue;
    Tracked& t = track[s];
    t.detected = true;
    t.estimate = *est;
    t.scan_window = phase1.windows[s];
    if (est->mirror) {
      // Either hypothesis may be flown to first.
      std::uniform_real_distribution<double> coin(0.0, 1.0);
      const Hypothesis original = est->hypothesis();
      if (coin(w.mirror_rng) < 0.5) {
        t.estimate.position = est->mirror->position;
        t.estimate.velocity = est->mirror->velocity;
        t.estimate.mirror = original;
        t.alternative = original;
      } else {
        t.alternative = *est->mirror;
      }
    }
  }

  std::vector<PathFollower> followers;
  std::vector<bool> home(M, false);
  for (int m = 0; m < M; ++m) followers.emplace_back(w.uavs[m].position);

  // Plans for every idle/pending person from the UAVs' current positions.
  auto replan = [&](double start_slot) {
    PlanningProblem problem;
    std::vector<int> active;
    for (int m = 0; m < M; ++m) {
      problem.starts.push_back(ground(w.uavs[m].position));
      problem.homes.push_back(w.homes[m]);
      problem.energy_used.push_back(w.energy[m]);
    }
    problem.start_slot = start_slot;
    for (int s = 0; s < S; ++s) {
      if (!track[s].detected) continue;
      if (track[s].stage == Stage::idle || track[s].stage == Stage::pending) {
        problem.targets.push_back(as_target(s, track[s].estimate));
        active.push_back(s);
      }
    }
    // UAVs already on their way home stay out of the assignment.
    std::vector<int> uav_index;
    PlanningProblem usable = problem;
    usable.starts.clear();
    usable.homes.clear();
    usable.energy_used.clear();
    for (int m = 0; m < M; ++m) {
      if (home[m] || report.uavs[m].aborted) continue;
      uav_index.push_back(m);
      usable.starts.push_back(problem.starts[m]);
      usable.homes.push_back(problem.homes[m]);
      usable.energy_used.push_back(problem.energy_used[m]);
    }
    if (uav_index.empty()) {
      for (int s : active) track[s].stage = Stage::done;
      return Plan{};
    }
    const auto t0 = std::chrono::steady_clock::now();
    Plan plan = solve(planner, usable, sc, planner_seed + static_cast<std::uint64_t>(report.replans));
    report.planner_wall_time +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    for (std::size_t k = 0; k < uav_index.size(); ++k) {
      const int m = uav_index[k];
      std::vector<PathFollower::Leg> route;
      for (const auto& v : plan.tours[k].visits) {
        const int s = active[v.target];
        track[s].stage = Stage::pending;
        track[s].uav = m;
        track[s].window = RangeWindow{};
        track[s].last_sample = -1;
        route.push_back({lift(v.waypoint, sc.altitude), s});
      }
      route.push_back({lift(w.homes[m], sc.altitude), -1});
      followers[m].set_route(std::move(route));
      report.uavs[m].planned_waypoints.push_back(plan.tours[k].waypoints);
    }
    return plan;
  };

  // Current target of UAV m: the person tag of the next waypoint.
  auto current_target = [&](int m) {
    const auto* leg = followers[m].current();
    return leg ? leg->tag : -1;
  };

  auto finalize = [&](int s) {
    Tracked& t = track[s];
    t.visited = true;
    t.stage = Stage::done;
    if (t.window.slot_count() < 3) return;
    TrackEstimate fit = fit_track(t.window, opts);
    if (fit.mirror) {
      // The scan data were ranged from another line, so they tell the
      // reflections apart; without them keep the one nearer an earlier hypothesis.
      bool flip = false;
      if (t.scan_window) {
        auto fits = [&](const Vec2& p) {
          return best_track_likelihood(*t.scan_window, p, fit.ref_slot, sc.person_vmax,
                                       sc.ranging, dt);
        };
        flip = fits(fit.mirror->position) > fits(fit.position);
      } else {
        auto gap = [&](const Vec2& p) {
          double best = norm(p - extrapolate_to(t.estimate.hypothesis(), t.estimate.ref_slot,
                                                fit.ref_slot, dt));
          if (t.estimate.mirror) {
            best = std::min(best, norm(p - extrapolate_to(*t.estimate.mirror, t.estimate.ref_slot,
                                                          fit.ref_slot, dt)));
          }
          return best;
        };
        flip = gap(fit.mirror->position) < gap(fit.position);
      }
      if (flip) {
        const Hypothesis original = fit.hypothesis();
        fit.position = fit.mirror->position;
        fit.velocity = fit.mirror->velocity;
        fit.mirror = original;
      }
    }
    t.located = true;
    // An unresolved mirror pair has no valid bound, so the refit always wins then.
    const double prior = error_at(ErrorModel{t.estimate.error_bound, sc.alpha, t.estimate.ref_slot},
                                  std::max(fit.ref_slot, t.estimate.ref_slot), dt);
    if (t.estimate.mirror || fit.error_bound <= prior) {
      t.estimate = fit;
      t.alternative.reset();
    }
  };

  report.initial_plan = replan(static_cast<double>(w.slot));
  report.infeasible_accuracy = report.initial_plan.infeasible_targets > 0;
  for (int m = 0; m < M; ++m) {
    report.uavs[m].home = w.homes[m];
  }

  const int max_slots = w.slot + 10'000'000;
  for (;;) {
    record(w);
    const int now = w.slot;

    // Reception for the persons each UAV is currently serving.
    for (int m = 0; m < M; ++m) {
      const int target = home[m] ? -1 : current_target(m);
      for (int s = 0; s < S; ++s) {
        Tracked& t = track[s];
        if (t.uav != m) continue;
        const bool approaching = t.stage == Stage::pending && s == target;
        const bool refining = t.stage == Stage::refining;
        if (!approaching && !refining) continue;
        double d = 0.0;
        const bool heard = in_range(w, m, s, &d);
        const bool contiguous = t.last_sample == now - 1;
        if (heard) {
          if (t.window.slot_count() > 0 && !contiguous) {
            if (refining && t.window.slot_count() >= 3) {
              finalize(s);
              continue;
            }
            t.window = RangeWindow{};
          }
          if (t.window.slot_count() == 0) {
            t.window.uav = m;
            t.window.person = s;
            t.window.start_slot = now;
          }
          t.window.uav_positions.push_back(w.uavs[m].position);
          t.window.samples.push_back(draw_samples(w, s, d));
          t.last_sample = now;
        } else if (t.window.slot_count() > 0) {
          if (refining && t.window.slot_count() >= 3) {
            finalize(s);
            continue;
          }
          t.window = RangeWindow{};
        }
      }
    }

    bool need_replan = false;
    for (int s = 0; s < S; ++s) {
      Tracked& t = track[s];
      if (t.stage != Stage::refining) continue;
      const int since = now - t.arrival;
      if (t.window.slot_count() >= 3 && since >= sc.refine_slots) {
        finalize(s);
      } else if (since >= sc.hypothesis_timeout) {
        if (t.window.slot_count() == 0 && t.alternative) {
          // Nothing heard at the chosen hypothesis: try its reflection.
          const Hypothesis other = *t.alternative;
          t.estimate.mirror = t.estimate.hypothesis();
          t.estimate.position = other.position;
          t.estimate.velocity = other.velocity;
          t.alternative.reset();
          t.swapped = true;
          t.stage = Stage::idle;
          t.uav = -1;
          need_replan = true;
        } else {
          finalize(s);
        }
      }
    }
    if (need_replan) {
      ++report.replans;
      replan(static_cast<double>(now));
    }

    // Energy reserve: turn home when the remaining budget only covers the way back.
    for (int m = 0; m < M; ++m) {
      if (home[m] || report.uavs[m].aborted) continue;
      const double back = norm(ground(w.uavs[m].position) - w.homes[m]) / sc.uav_vmax;
      if (w.energy[m] + cruise * (back + 2.0 * dt) > sc.energy_budget) {
        report.uavs[m].aborted = true;
        for (int s = 0; s < S; ++s) {
          if (track[s].uav == m && track[s].stage == Stage::pending) {
            track[s].stage = Stage::done;
          }
        }
        followers[m].set_route({{lift(w.homes[m], sc.altitude), -1}});
      }
    }

    const bool all_home = std::all_of(home.begin(), home.end(), [](bool b) { return b; });
    const bool busy = std::any_of(track.begin(), track.end(), [](const Tracked& t) {
      return t.stage == Stage::refining || t.stage == Stage::pending;
    });
    if ((all_home && !busy) || now >= max_slots) break;
    if (all_home && busy) {
      // Nobody left to serve the outstanding persons.
      for (auto& t : track) {
        if (t.stage == Stage::pending) t.stage = Stage::done;
      }
    }

    step_persons(w);
    for (int m = 0; m < M; ++m) {
      if (home[m]) {
        w.uavs[m].velocity = {};
        continue;
      }
      for (int tag : step_uav(w, followers[m], m)) {
        if (tag < 0) {
          home[m] = true;
          report.uavs[m].makespan = (now + 1) * dt;
        } else if (track[tag].uav == m && track[tag].stage == Stage::pending) {
          track[tag].stage = Stage::refining;
          track[tag].arrival = now + 1;
        }
      }
    }
    ++w.slot;
  }
  report.end_slot = w.slot;

  for (int m = 0; m < M; ++m) {
    UavOutcome& u = report.uavs[m];
    const std::size_t last =
        home[m] ? static_cast<std::size_t>(std::lround(u.makespan / dt)) : w.uav_path[m].size() - 1;
    u.trajectory.assign(w.uav_path[m].begin(),
                        w.uav_path[m].begin() + static_cast<std::ptrdiff_t>(last + 1));
    u.speeds.assign(w.uav_speeds[m].begin(),
                    w.uav_speeds[m].begin() +
                        static_cast<std::ptrdiff_t>(std::min(last, w.uav_speeds[m].size())));
    u.energy = w.energy[m];
    u.within_budget = check_budget(u.energy, sc.energy_budget).within;
    report.makespan = std::max(report.makespan, u.makespan);
  }
  for (int s = 0; s < S; ++s) {
    const Tracked& t = track[s];
    PersonOutcome p;
    p.person = s;
    p.detected = t.detected;
    p.visited = t.visited;
    p.located = t.located;
    p.mirror_swapped = t.swapped;
    if (t.detected) {
      p.final_estimate = t.estimate;
      p.final_error_bound = t.estimate.error_bound;
      const int ref = std::clamp(t.estimate.ref_slot, 0, static_cast<int>(w.truth.size()) - 1);
      p.true_error = norm(t.estimate.position - w.truth[ref][s]);
      p.met_e_th = p.true_error <= sc.e_th;
      if (t.estimate.end_range > 0.0) {
        p.range_error = mean_range_error(t.estimate.end_range, sc.ranging);
        p.signed_range_error = signed_mean_range_error(t.estimate.end_range, sc.ranging);
      }
    }
    report.persons.push_back(std::move(p));
  }
  return report;
}

MissionSeeds mission_seeds(const Scenario& scenario, std::uint64_t seed_index,
                           PlannerKind planner) {
  const auto persons = static_cast<std::uint64_t>(scenario.person_count);
  return {stream_seed(scenario.seed, {persons, seed_index}),
          stream_seed(scenario.seed,
                      {persons, seed_index, 0x706c616eULL + static_cast<std::uint64_t>(planner)})};
}

MissionReport run_mission(const Scenario& scenario, PlannerKind planner,
                          std::uint64_t seed_index, World* world_out) {
  const MissionSeeds seeds = mission_seeds(scenario, seed_index, planner);
  World world = make_world(scenario, seeds.world);
  world.record_trace = world_out != nullptr;
  const auto paths = plan_scan(scenario);
  // Trajectories start at the launch point of every UAV.
  for (std::size_t m = 0; m < world.uavs.size(); ++m) world.uavs[m].position = paths[m].start;
  auto phase1 = simulate_phase1(world, paths);
  MissionReport report = simulate_phase2(world, std::move(phase1), planner, seeds.planner);
  report.seed_index = seed_index;
  if (world_out) *world_out = std::move(world);
  return report;
}

MetricsRow collect_metrics(const MissionReport& report, double e_th) {
  MetricsRow row;
  row.seed = report.seed_index;
  row.persons = report.person_count;
  row.planner = report.planner;
  row.makespan = report.makespan;
  row.planner_wall_time = report.planner_wall_time;
  row.replans = report.replans;
  int counted = 0;
  int within = 0;
  double sum = 0.0;
  for (const auto& p : report.persons) {
    if (!p.final_estimate) continue;
    ++counted;
    sum += p.true_error;
    row.max_error = std::max(row.max_error, p.true_error);
    if (p.true_error <= e_th) ++within;
  }
  row.mean_error = counted ? sum / counted : 0.0;
  row.fraction_within_e_th = report.person_count ? static_cast<double>(within) / report.person_count
                                                 : 0.0;
  for (const auto& u : report.uavs) row.total_energy += u.energy;
  return row;
}

}  // namespace uavloc
