#include "uavloc/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "uavloc/kinematics.hpp"
#include "uavloc/mle.hpp"

namespace uavloc::oracle {

RangingMoments ranging_moments(double d, const RangingParams& params, std::size_t draws,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // Welford accumulators for r and ln(r/d).
  double mean = 0.0, m2 = 0.0, lmean = 0.0, lm2 = 0.0;
  for (std::size_t i = 1; i <= draws; ++i) {
    const double r = sample_range(d, params, rng);
    const double l = std::log(r / d);
    const double dr = r - mean;
    mean += dr / i;
    m2 += dr * (r - mean);
    const double dl = l - lmean;
    lmean += dl / i;
    lm2 += dl * (l - lmean);
  }
  const double n = static_cast<double>(draws);
  return {mean, std::sqrt(m2 / (n - 1) / n), lmean, lm2 / (n - 1)};
}

Check mean_error_check(const MeanErrorFn& mean_error, double d, const RangingParams& params,
                       std::size_t draws, std::uint64_t seed) {
  const auto mc = ranging_moments(d, params, draws, seed);
  Check c;
  c.expected = mean_error(d, params);
  c.observed = mc.mean - d;
  const double tol = std::max(0.03 * std::abs(c.expected), 4.0 * mc.mean_sd);
  c.pass = std::abs(c.observed - c.expected) <= tol;
  return c;
}

long double power(long double v, const PowerParams& p) {
  const long double p0 = p.p0, p1 = p.p1, u = p.tip_speed, vr = p.induced_velocity;
  const long double x = v * v / (2.0L * vr * vr);
  const long double blade = p0 * (1.0L + 3.0L * v * v / (u * u));
  const long double induced = p1 / std::sqrt(std::sqrt(1.0L + x * x) + x);
  const long double parasite = 0.5L * static_cast<long double>(p.parasite_coeff) * v * v * v;
  return blade + induced + parasite;
}

double tour_makespan(const PlanningProblem& problem, int uav, std::span<const int> order,
                     double vmax, double slot_duration) {
  double x = problem.starts[uav].x, y = problem.starts[uav].y;
  double t = problem.start_slot * slot_duration;  // seconds
  double length = 0.0;
  for (int idx : order) {
    const PlanTarget& g = problem.targets[idx];
    const double ref = g.ref_slot * slot_duration;
    const double t0 = std::max(t, ref);
    const double cx = g.position.x + g.velocity.x * (t0 - ref);
    const double cy = g.position.y + g.velocity.y * (t0 - ref);
    const double ta = std::max(t + std::hypot(cx - x, cy - y) / vmax, ref);
    const double px = g.position.x + g.velocity.x * (ta - ref);
    const double py = g.position.y + g.velocity.y * (ta - ref);
    const double leg = std::hypot(px - x, py - y);
    length += leg;
    t += leg / vmax;
    x = px;
    y = py;
  }
  length += std::hypot(problem.homes[uav].x - x, problem.homes[uav].y - y);
  return length / vmax;
}

MtspOptimum brute_force_mtsp(const PlanningProblem& problem, double vmax, double slot_duration) {
  const int n = static_cast<int>(problem.targets.size());
  const int m = problem.uav_count();
  MtspOptimum best;
  best.makespan = std::numeric_limits<double>::infinity();
  std::vector<int> assign(n, 0);
  for (;;) {
    MtspOptimum cand;
    cand.tours.resize(m);
    for (int s = 0; s < n; ++s) cand.tours[assign[s]].push_back(s);
    for (int u = 0; u < m && cand.makespan < best.makespan; ++u) {
      auto& tour = cand.tours[u];
      std::sort(tour.begin(), tour.end());
      double tour_best = std::numeric_limits<double>::infinity();
      std::vector<int> best_order = tour;
      do {
        const double t = tour_makespan(problem, u, tour, vmax, slot_duration);
        if (t < tour_best) {
          tour_best = t;
          best_order = tour;
        }
      } while (std::next_permutation(tour.begin(), tour.end()));
      tour = best_order;
      cand.makespan = std::max(cand.makespan, tour_best);
    }
    if (cand.makespan < best.makespan) best = cand;
    int k = 0;
    while (k < n && ++assign[k] == m) assign[k++] = 0;
    if (k == n) break;
  }
  return best;
}

namespace {

bool inside(std::span<const Annulus> annuli, const HalfPlane* side, double x, double y) {
  for (const auto& a : annuli) {
    const double r2 = (x - a.center.x) * (x - a.center.x) + (y - a.center.y) * (y - a.center.y);
    if (r2 < a.inner * a.inner || r2 > a.outer * a.outer) return false;
  }
  if (side) {
    const Vec2 d = side->line.direction;
    const double s = d.x * (y - side->line.point.y) - d.y * (x - side->line.point.x);
    if (side->side * s < 0.0) return false;
  }
  return true;
}

}  // namespace

double polar_farthest(std::span<const Annulus> annuli, const Vec2& estimate,
                      const HalfPlane* side, double dtheta, double dr) {
  double reach = std::numeric_limits<double>::infinity();
  for (const auto& a : annuli) {
    reach = std::min(reach, std::hypot(a.center.x - estimate.x, a.center.y - estimate.y) + a.outer);
  }
  const int rays = static_cast<int>(std::ceil(2.0 * M_PI / dtheta));
  double best = inside(annuli, side, estimate.x, estimate.y) ? 0.0 : -1.0;
  for (int i = 0; i < rays; ++i) {
    const double th = i * dtheta;
    const double c = std::cos(th), s = std::sin(th);
    for (double r = reach; r > best; r -= dr) {
      if (inside(annuli, side, estimate.x + r * c, estimate.y + r * s)) {
        best = r;
        break;
      }
    }
  }
  return best;
}

KappaCalibration calibrate_kappa(const Scenario& scenario, double offset, int window_slots,
                                 int trials, std::uint64_t seed) {
  FitOptions opts = FitOptions::from(scenario);
  opts.compute_error_bound = false;
  const double step = scenario.uav_vmax * scenario.slot_duration;
  const double h = scenario.altitude;
  std::vector<double> errors;
  double slant_sum = 0.0;
  for (int k = 0; k < trials; ++k) {
    std::mt19937_64 rng(stream_seed(seed, {static_cast<std::uint64_t>(k)}));
    const Vec2 person{0.0, 0.0};
    RangeWindow w;
    w.start_slot = 0;
    const double x0 = -0.5 * step * (window_slots - 1);
    for (int t = 0; t < window_slots; ++t) {
      const Vec3 q{x0 + t * step, offset, h};
      const double d = std::hypot(q.x - person.x, q.y - person.y, q.z);
      slant_sum += d;
      w.uav_positions.push_back(q);
      std::vector<double> samples(scenario.samples_per_slot);
      for (auto& r : samples) r = sample_range(d, scenario.ranging, rng);
      w.samples.push_back(std::move(samples));
    }
    const TrackEstimate e = fit_track(w, opts);
    double err = norm(e.position - person);
    if (e.mirror) err = std::min(err, norm(e.mirror->position - person));
    errors.push_back(err);
  }
  std::sort(errors.begin(), errors.end());
  KappaCalibration out;
  out.trials = trials;
  out.quantile_error = errors[static_cast<std::size_t>(0.9 * (errors.size() - 1))];
  out.mean_range_error = mean_range_error(slant_sum / (trials * window_slots), scenario.ranging);
  out.kappa = out.quantile_error / out.mean_range_error;
  return out;
}

}  // namespace uavloc::oracle
