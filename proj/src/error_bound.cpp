#include "uavloc/error_bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace uavloc {
namespace {

constexpr double kBoundaryTol = 1e-9;

struct Box {
  double x0, y0, x1, y1;
  bool empty() const { return x0 > x1 || y0 > y1; }
};

Box intersection_box(std::span<const Annulus> annuli) {
  Box box{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (const auto& a : annuli) {
    box.x0 = std::max(box.x0, a.center.x - a.outer);
    box.y0 = std::max(box.y0, a.center.y - a.outer);
    box.x1 = std::min(box.x1, a.center.x + a.outer);
    box.y1 = std::min(box.y1, a.center.y + a.outer);
  }
  return box;
}

}  // namespace

Annulus build_annulus(double d_star, const RangingParams& ranging, double person_vmax,
                      double lag_seconds, const Vec2& center) {
  const double m = mean_range_error(d_star, ranging);
  const double drift = person_vmax * lag_seconds;
  return {center, std::max(0.0, d_star - m - drift), d_star + m + drift};
}

Annulus project_to_ground(const Annulus& slant, double altitude) {
  auto to_ground = [altitude](double r) {
    return std::sqrt(std::max(0.0, r * r - altitude * altitude));
  };
  return {slant.center, to_ground(slant.inner), to_ground(slant.outer)};
}

bool region_contains(std::span<const Annulus> annuli, const Vec2& p, const HalfPlane* side,
                     double rel_tol) {
  if (side != nullptr && !side->contains(p, rel_tol > 0.0 ? 1e-6 : 0.0)) {
    return false;
  }
  for (const auto& a : annuli) {
    const Vec2 d = p - a.center;
    const double r2 = dot(d, d);
    const double lo = a.inner * (1.0 - rel_tol);
    const double hi = a.outer * (1.0 + rel_tol);
    if (r2 < lo * lo || r2 > hi * hi) {
      return false;
    }
  }
  return true;
}

FarthestPoint farthest_point_error(std::span<const Annulus> annuli, const Vec2& estimate,
                                   const Resolution& resolution, const HalfPlane* side) {
  if (annuli.empty()) {
    throw std::invalid_argument("farthest_point_error: need at least one annulus");
  }
  FarthestPoint out;
  double best2 = -1.0;
  auto consider = [&](const Vec2& p) {
    if (!region_contains(annuli, p, side, kBoundaryTol)) {
      return;
    }
    ++out.accepted;
    const Vec2 d = p - estimate;
    best2 = std::max(best2, dot(d, d));
  };

  consider(estimate);

  const int n = resolution.angular_samples;
  const double step = 2.0 * std::numbers::pi / n;
  for (const auto& a : annuli) {
    for (double radius : {a.inner, a.outer}) {
      if (radius <= 0.0) {
        continue;
      }
      for (int k = 0; k < n; ++k) {
        const double th = step * k;
        consider({a.center.x + radius * std::cos(th), a.center.y + radius * std::sin(th)});
      }
    }
  }

  const Box box = intersection_box(annuli);
  if (!box.empty()) {
    const int g = resolution.grid_cells;
    const double dx = (box.x1 - box.x0) / (g - 1);
    const double dy = (box.y1 - box.y0) / (g - 1);
    for (int i = 0; i < g; ++i) {
      for (int j = 0; j < g; ++j) {
        consider({box.x0 + dx * i, box.y0 + dy * j});
      }
    }
  }

  if (out.accepted == 0) {
    out.empty_region = true;
    double widest = 0.0;
    for (const auto& a : annuli) {
      widest = std::max(widest, 0.5 * (a.outer - a.inner));
    }
    out.error = widest;
    return out;
  }
  out.error = std::sqrt(best2);
  return out;
}

double error_at(const ErrorModel& model, int slot, double slot_duration) {
  if (slot < model.ref_slot) {
    throw std::invalid_argument("error_at: slot precedes the reference slot");
  }
  return error_at_time(model, static_cast<double>(slot), slot_duration);
}

double error_at_time(const ErrorModel& model, double slot, double slot_duration) {
  const double elapsed = std::max(0.0, slot - model.ref_slot) * slot_duration;
  return model.e0 * (1.0 + model.alpha * elapsed);
}

}  // namespace uavloc
