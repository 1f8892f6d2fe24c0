#include "uavloc/mle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "uavloc/kinematics.hpp"

namespace uavloc {
namespace {

// Per-slot sufficient statistics of the log-samples.
struct SlotStats {
  Vec3 q;
  double count = 0.0;
  double mean_log = 0.0;
  double sum_log = 0.0;
  double sum_sq_dev = 0.0;
  double tau = 0.0;  // seconds since the window's first slot
};

std::vector<SlotStats> slot_stats(const RangeWindow& w, double slot_duration) {
  std::vector<SlotStats> out;
  out.reserve(w.samples.size());
  for (int k = 0; k < w.slot_count(); ++k) {
    SlotStats s;
    s.q = w.uav_positions[k];
    s.tau = k * slot_duration;
    for (double r : w.samples[k]) {
      s.sum_log += std::log(r);
    }
    s.count = static_cast<double>(w.samples[k].size());
    s.mean_log = s.sum_log / s.count;
    for (double r : w.samples[k]) {
      const double dev = std::log(r) - s.mean_log;
      s.sum_sq_dev += dev * dev;
    }
    out.push_back(s);
  }
  return out;
}

// Track parameters: position at a pivot time, velocity.
using Params = std::array<double, 4>;

// With `vmax` > 0, p[2..3] is an unbounded u mapped to the velocity
// vmax·u/sqrt(1 + |u|²), which keeps the speed below vmax during the search.
// With `vmax` <= 0 they are the velocity itself.
struct TrackCost {
  const std::vector<SlotStats>& slots;
  double pivot_tau;
  double vmax = 0.0;

  Vec2 velocity(const Params& p) const {
    if (vmax <= 0.0) return {p[2], p[3]};
    const double s = std::sqrt(1.0 + p[2] * p[2] + p[3] * p[3]);
    return {vmax * p[2] / s, vmax * p[3] / s};
  }

  // ∂velocity/∂u as a row-major 2x2 matrix.
  std::array<double, 4> velocity_jacobian(const Params& p) const {
    if (vmax <= 0.0) return {1.0, 0.0, 0.0, 1.0};
    const double s2 = 1.0 + p[2] * p[2] + p[3] * p[3];
    const double s = std::sqrt(s2);
    const double k = vmax / (s * s2);
    return {k * (s2 - p[2] * p[2]), -k * p[2] * p[3], -k * p[2] * p[3], k * (s2 - p[3] * p[3])};
  }

  double log_distance(const SlotStats& s, const Params& p) const {
    const double dt = s.tau - pivot_tau;
    const Vec2 v = velocity(p);
    const double dx = s.q.x - (p[0] + v.x * dt);
    const double dy = s.q.y - (p[1] + v.y * dt);
    return 0.5 * std::log(dx * dx + dy * dy + s.q.z * s.q.z);
  }

  // Σ n·(mean ln r − ln d)²; differs from −2σ²·loglik by a constant.
  double operator()(const Params& p) const {
    double total = 0.0;
    for (const auto& s : slots) {
      const double e = s.mean_log - log_distance(s, p);
      total += s.count * e * e;
    }
    return std::isfinite(total) ? total : std::numeric_limits<double>::infinity();
  }
};

struct Minimum {
  Params params{};
  double cost = std::numeric_limits<double>::infinity();
  bool converged = false;
};

Minimum nelder_mead(const TrackCost& f, const Params& start, const Params& step,
                    int max_iterations, double tol) {
  constexpr int n = 4;
  std::array<Params, n + 1> simplex;
  std::array<double, n + 1> value;
  simplex[0] = start;
  for (int i = 0; i < n; ++i) {
    simplex[i + 1] = start;
    simplex[i + 1][i] += step[i];
  }
  for (int i = 0; i <= n; ++i) {
    value[i] = f(simplex[i]);
  }

  bool converged = false;
  for (int it = 0; it < max_iterations; ++it) {
    std::array<int, n + 1> order;
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return value[a] < value[b]; });
    const int best = order[0];
    const int worst = order[n];
    const int second = order[n - 1];
    if (std::abs(value[worst] - value[best]) <= tol) {
      converged = true;
      break;
    }

    Params centroid{};
    for (int i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (int d = 0; d < n; ++d) centroid[d] += simplex[i][d] / n;
    }
    auto along = [&](double t) {
      Params p;
      for (int d = 0; d < n; ++d) p[d] = centroid[d] + t * (simplex[worst][d] - centroid[d]);
      return p;
    };

    const Params reflected = along(-1.0);
    const double fr = f(reflected);
    if (fr < value[best]) {
      const Params expanded = along(-2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        value[worst] = fe;
      } else {
        simplex[worst] = reflected;
        value[worst] = fr;
      }
      continue;
    }
    if (fr < value[second]) {
      simplex[worst] = reflected;
      value[worst] = fr;
      continue;
    }
    const bool outside = fr < value[worst];
    const Params contracted = along(outside ? -0.5 : 0.5);
    const double fc = f(contracted);
    if (fc < (outside ? fr : value[worst])) {
      simplex[worst] = contracted;
      value[worst] = fc;
      continue;
    }
    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (int d = 0; d < n; ++d) {
        simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
      }
      value[i] = f(simplex[i]);
    }
  }

  const auto it = std::min_element(value.begin(), value.end());
  return {simplex[it - value.begin()], *it, converged};
}

// Damped Gauss-Newton on the residuals sqrt(n)·(mean ln r − ln d).
Minimum levenberg_marquardt(const TrackCost& f, const Minimum& from) {
  Params p = from.params;
  double cost = f(p);
  double lambda = 1e-3;
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    Eigen::Matrix4d jtj = Eigen::Matrix4d::Zero();
    Eigen::Vector4d jtr = Eigen::Vector4d::Zero();
    const Vec2 v = f.velocity(p);
    const auto dv = f.velocity_jacobian(p);
    for (const auto& s : f.slots) {
      const double dt = s.tau - f.pivot_tau;
      const double dx = s.q.x - (p[0] + v.x * dt);
      const double dy = s.q.y - (p[1] + v.y * dt);
      const double d2 = dx * dx + dy * dy + s.q.z * s.q.z;
      const double w = std::sqrt(s.count);
      const double r = w * (s.mean_log - 0.5 * std::log(d2));
      // ∂r/∂θ = −w·∂ln d/∂θ, ∂ln d/∂px = −dx/d²
      const double gx = w * dx * dt / d2;
      const double gy = w * dy * dt / d2;
      const Eigen::Vector4d j(w * dx / d2, w * dy / d2, gx * dv[0] + gy * dv[2],
                              gx * dv[1] + gy * dv[3]);
      jtj += j * j.transpose();
      jtr += j * r;
    }
    bool improved = false;
    for (int tries = 0; tries < 12; ++tries) {
      Eigen::Matrix4d a = jtj;
      a.diagonal() *= (1.0 + lambda);
      const Eigen::Vector4d delta = a.ldlt().solve(-jtr);
      Params trial = p;
      for (int d = 0; d < 4; ++d) trial[d] += delta[d];
      const double c = f(trial);
      if (c < cost) {
        const double change = cost - c;
        p = trial;
        cost = c;
        lambda = std::max(lambda * 0.1, 1e-12);
        improved = true;
        if (delta.norm() < 1e-12 * (1.0 + std::abs(p[0]) + std::abs(p[1])) ||
            change < 1e-24) {
          converged = true;
        }
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) {
      converged = true;  // no descent direction left at machine precision
      break;
    }
    if (converged) break;
  }
  return {p, cost, converged || from.converged};
}

std::vector<Vec2> circle_intersections(const Vec2& c0, double r0, const Vec2& c1, double r1) {
  const Vec2 d = c1 - c0;
  const double dist = norm(d);
  if (dist < 1e-9 || dist > r0 + r1 || dist < std::abs(r0 - r1)) {
    return {};
  }
  const double a = (r0 * r0 - r1 * r1 + dist * dist) / (2.0 * dist);
  const double h = std::sqrt(std::max(0.0, r0 * r0 - a * a));
  const Vec2 u = d * (1.0 / dist);
  const Vec2 base = c0 + u * a;
  const Vec2 perp{-u.y, u.x};
  return {base + perp * h, base - perp * h};
}

// Static range estimate over a slot range, projected to a ground circle.
struct GroundCircle {
  Vec2 center;
  double radius;
};

GroundCircle ground_circle(const std::vector<SlotStats>& slots, std::size_t lo, std::size_t hi) {
  double sum_log = 0.0;
  double count = 0.0;
  Vec2 center;
  double z = 0.0;
  for (std::size_t k = lo; k < hi; ++k) {
    sum_log += slots[k].sum_log;
    count += slots[k].count;
    center += ground(slots[k].q);
    z += slots[k].q.z;
  }
  const double n = static_cast<double>(hi - lo);
  center *= 1.0 / n;
  z /= n;
  const double d = std::exp(sum_log / count);
  return {center, std::sqrt(std::max(0.0, d * d - z * z))};
}

std::vector<Vec2> seed_positions(const std::vector<SlotStats>& slots) {
  std::vector<Vec2> seeds;
  const std::size_t n = slots.size();

  // Sub-window triangulation: early, middle and late thirds.
  const std::array<std::size_t, 4> cuts{0, n / 3, (2 * n) / 3, n};
  std::vector<GroundCircle> circles;
  for (int i = 0; i < 3; ++i) {
    if (cuts[i + 1] > cuts[i]) circles.push_back(ground_circle(slots, cuts[i], cuts[i + 1]));
  }
  for (std::size_t i = 0; i < circles.size(); ++i) {
    for (std::size_t j = i + 1; j < circles.size(); ++j) {
      for (const auto& p : circle_intersections(circles[i].center, circles[i].radius,
                                                circles[j].center, circles[j].radius)) {
        seeds.push_back(p);
      }
    }
  }

  // Coarse grid over the disc the person must occupy around the mid-window UAV.
  double reach = 0.0;
  for (const auto& c : circles) reach = std::max(reach, c.radius);
  reach = 1.25 * reach + 10.0;
  const Vec2 mid = ground(slots[n / 2].q);
  constexpr int kGrid = 17;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      const Vec2 off{reach * (2.0 * i / (kGrid - 1) - 1.0), reach * (2.0 * j / (kGrid - 1) - 1.0)};
      if (norm(off) <= reach) seeds.push_back(mid + off);
    }
  }
  return seeds;
}

std::vector<int> annulus_slots(int slot_count, int annuli) {
  std::vector<int> idx;
  if (annuli <= 1 || slot_count == 1) {
    idx.push_back(slot_count - 1);
    return idx;
  }
  for (int i = 0; i < annuli; ++i) {
    const int k = static_cast<int>(
        std::lround(static_cast<double>(i) * (slot_count - 1) / (annuli - 1)));
    if (idx.empty() || idx.back() != k) idx.push_back(k);
  }
  return idx;
}

}  // namespace

void RangeWindow::validate() const {
  if (uav_positions.empty()) {
    throw std::invalid_argument("RangeWindow: no slots");
  }
  if (samples.size() != uav_positions.size()) {
    throw std::invalid_argument("RangeWindow: every slot needs a UAV position and samples");
  }
  for (const auto& slot : samples) {
    if (slot.empty()) {
      throw std::invalid_argument("RangeWindow: slot without samples breaks continuity");
    }
    for (double r : slot) {
      if (!(r > 0.0)) {
        throw std::invalid_argument("RangeWindow: samples must be positive");
      }
    }
  }
}

double window_log_likelihood(const RangeWindow& window, const Vec2& w0, const Vec2& v,
                             const RangingParams& ranging, double slot_duration) {
  window.validate();
  const double s = log_std(ranging);
  const auto slots = slot_stats(window, slot_duration);
  const TrackCost cost{slots, 0.0};
  const Params p{w0.x, w0.y, v.x, v.y};
  double residual = 0.0;
  double total_log = 0.0;
  double count = 0.0;
  for (const auto& st : slots) {
    const double ld = cost.log_distance(st, p);
    if (!std::isfinite(ld)) {
      return -std::numeric_limits<double>::infinity();
    }
    // Σ_i (ln r_i − ln d)² = n·(mean − ln d)² + Σ (ln r_i − mean)²
    const double e = st.mean_log - ld;
    residual += st.count * e * e + st.sum_sq_dev;
    total_log += st.sum_log;
    count += st.count;
  }
  if (s == 0.0) {
    return -residual;
  }
  return -total_log - count * std::log(std::sqrt(2.0 * std::numbers::pi) * s) -
         residual / (2.0 * s * s);
}

double estimate_static_distance(std::span<const double> samples) {
  if (samples.empty()) {
    throw std::invalid_argument("estimate_static_distance: no samples");
  }
  double sum = 0.0;
  for (double r : samples) {
    if (!(r > 0.0)) {
      throw std::invalid_argument("estimate_static_distance: samples must be positive");
    }
    sum += std::log(r);
  }
  return std::exp(sum / static_cast<double>(samples.size()));
}

CollinearCheck detect_collinear(std::span<const Vec3> positions, double tol_m) {
  if (positions.size() < 2) {
    throw std::invalid_argument("detect_collinear: need at least two positions");
  }
  Vec2 mean;
  for (const auto& p : positions) mean += ground(p);
  mean *= 1.0 / static_cast<double>(positions.size());
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : positions) {
    const Vec2 d = ground(p) - mean;
    sxx += d.x * d.x;
    sxy += d.x * d.y;
    syy += d.y * d.y;
  }
  // Principal axis of the 2x2 scatter matrix.
  const double angle = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  CollinearCheck out;
  out.line = Line2{mean, {std::cos(angle), std::sin(angle)}};
  for (const auto& p : positions) {
    out.max_deviation = std::max(out.max_deviation, std::abs(out.line.signed_distance(ground(p))));
  }
  out.collinear = out.max_deviation < tol_m;
  return out;
}

Hypothesis mirror_hypothesis(const Hypothesis& h, const Line2& line) {
  return {line.reflect_point(h.position), line.reflect_vector(h.velocity)};
}

Vec2 extrapolate_to(const Hypothesis& h, int ref_slot, double slot, double slot_duration) {
  return h.position + h.velocity * ((slot - ref_slot) * slot_duration);
}

Vec2 extrapolate(const TrackEstimate& estimate, int slot, double slot_duration) {
  if (slot < estimate.ref_slot) {
    throw std::invalid_argument("extrapolate: slot precedes the estimate's reference slot");
  }
  return extrapolate_to(estimate.hypothesis(), estimate.ref_slot, slot, slot_duration);
}

FitOptions FitOptions::from(const Scenario& s) {
  FitOptions o;
  o.ranging = s.ranging;
  o.slot_duration = s.slot_duration;
  o.person_vmax = s.person_vmax;
  o.collinear_tol = s.collinear_tol;
  o.annuli_count = s.annuli_count;
  o.range_source = s.annulus_range_source;
  o.resolution = {s.angular_samples, s.grid_cells};
  return o;
}

std::vector<Annulus> window_annuli(const RangeWindow& window, const Hypothesis& track_at_end,
                                   const FitOptions& options) {
  std::vector<Annulus> annuli;
  const int last = window.slot_count() - 1;
  for (int k : annulus_slots(window.slot_count(), options.annuli_count)) {
    const Vec3& q = window.uav_positions[k];
    const double lag = (last - k) * options.slot_duration;
    double d_star = 0.0;
    if (options.range_source == AnnulusRangeSource::track) {
      const Vec2 w = track_at_end.position - track_at_end.velocity * lag;
      d_star = distance(q, lift(w));
    } else {
      d_star = estimate_static_distance(window.samples[k]);
    }
    const Annulus slant =
        build_annulus(d_star, options.ranging, options.person_vmax, lag, ground(q));
    annuli.push_back(project_to_ground(slant, q.z));
  }
  return annuli;
}

FarthestPoint window_error_bound(const RangeWindow& window, const Hypothesis& track_at_end,
                                 const std::optional<Line2>& collinear_line,
                                 const FitOptions& options) {
  const auto annuli = window_annuli(window, track_at_end, options);
  std::optional<HalfPlane> side;
  if (collinear_line) {
    const double sd = collinear_line->signed_distance(track_at_end.position);
    if (std::abs(sd) > 1e-6) {
      side = HalfPlane{*collinear_line, sd > 0.0 ? 1.0 : -1.0};
    }
  }
  return farthest_point_error(annuli, track_at_end.position, options.resolution,
                              side ? &*side : nullptr);
}

TrackEstimate fit_track(const RangeWindow& window, const FitOptions& options) {
  window.validate();
  if (window.slot_count() < 3) {
    throw std::invalid_argument("fit_track: window must span at least three slots");
  }
  const auto slots = slot_stats(window, options.slot_duration);
  const double pivot = slots[slots.size() / 2].tau;
  const TrackCost cost{slots, pivot, std::max(options.person_vmax, 1e-12)};

  // Rank seeds at zero velocity, then refine the best distinct ones.
  std::vector<std::pair<double, Vec2>> ranked;
  for (const auto& p : seed_positions(slots)) {
    ranked.emplace_back(cost(Params{p.x, p.y, 0.0, 0.0}), p);
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Vec2> starts;
  for (const auto& [c, p] : ranked) {
    if (starts.size() >= 10) break;
    const bool distinct = std::none_of(starts.begin(), starts.end(),
                                       [&](const Vec2& s) { return norm(s - p) < 10.0; });
    if (distinct) starts.push_back(p);
  }

  Minimum best;
  const Params step{15.0, 15.0, 0.5, 0.5};
  for (const auto& s : starts) {
    const Minimum coarse = nelder_mead(cost, Params{s.x, s.y, 0.0, 0.0}, step,
                                       options.max_iterations, options.objective_tol);
    const Minimum fine = levenberg_marquardt(cost, coarse);
    if (fine.cost < best.cost) best = fine;
  }

  const Vec2 velocity = cost.velocity(best.params);
  const double tau_end = slots.back().tau;
  const Vec2 at_end = Vec2{best.params[0], best.params[1]} + velocity * (tau_end - pivot);
  const Vec2 at_start = Vec2{best.params[0], best.params[1]} - velocity * pivot;

  TrackEstimate est;
  est.person = window.person;
  est.ref_slot = window.end_slot();
  est.position = at_end;
  est.velocity = clamp_norm(velocity, options.person_vmax);
  est.converged = best.converged;
  est.end_range = distance(window.uav_positions.back(), lift(at_end));
  est.log_likelihood =
      window_log_likelihood(window, at_start, velocity, options.ranging, options.slot_duration);

  const auto check = detect_collinear(window.uav_positions, options.collinear_tol);
  if (check.collinear) {
    est.collinear_line = check.line;
    est.mirror = mirror_hypothesis(est.hypothesis(), check.line);
  }
  if (options.compute_error_bound) {
    const auto bound = window_error_bound(window, {at_end, velocity}, est.collinear_line, options);
    est.error_bound = bound.error;
    est.empty_region = bound.empty_region;
  }
  return est;
}

}  // namespace uavloc
