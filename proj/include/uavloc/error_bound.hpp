#pragma once

#include <optional>
#include <span>

#include "uavloc/geometry.hpp"
#include "uavloc/ranging.hpp"

namespace uavloc {

/// Ring of possible target positions around one UAV ground position.
struct Annulus {
  Vec2 center;
  double inner = 0.0;
  double outer = 0.0;
};

/// Closed half-plane on the side of `line` selected by `side` (+1 or −1).
struct HalfPlane {
  Line2 line;
  double side = 1.0;

  bool contains(const Vec2& p, double tol = 0.0) const {
    return side * line.signed_distance(p) >= -tol;
  }
};

/// Annulus from a range estimate d* that is `lag_seconds` older than the
/// reference slot:
///   inner = max(0, d* − m_ξ(d*) − v_max·lag), outer = d* + m_ξ(d*) + v_max·lag.
Annulus build_annulus(double d_star, const RangingParams& ranging, double person_vmax,
                      double lag_seconds, const Vec2& center);

/// Maps slant-range radii to ground radii for a UAV at `altitude`:
/// r ↦ sqrt(max(0, r² − h²)).
Annulus project_to_ground(const Annulus& slant, double altitude);

/// True iff p lies in every annulus (and in `side` when given). `rel_tol`
/// widens each ring by rel_tol·radius to absorb rounding on boundary points.
bool region_contains(std::span<const Annulus> annuli, const Vec2& p,
                     const HalfPlane* side = nullptr, double rel_tol = 0.0);

struct Resolution {
  int angular_samples = 2048;  ///< boundary samples per circle (δθ = 2π/n)
  int grid_cells = 256;        ///< lattice points per axis over the bounding box
};

struct FarthestPoint {
  double error = 0.0;
  bool empty_region = false;  ///< no candidate accepted; `error` is the fallback
  int accepted = 0;
};

/// Largest distance from `estimate` to a sampled point of the annulus
/// intersection. Candidates: both boundary circles of every annulus sampled
/// at δθ, a lattice over the intersection's bounding box, and the estimate
/// itself. When nothing is accepted the result falls back to the widest
/// half-width max((outer − inner)/2) and sets `empty_region`.
FarthestPoint farthest_point_error(std::span<const Annulus> annuli, const Vec2& estimate,
                                   const Resolution& resolution = {},
                                   const HalfPlane* side = nullptr);

/// Error bound that grows linearly after the reference slot.
struct ErrorModel {
  double e0 = 0.0;     ///< bound at the reference slot, m
  double alpha = 0.0;  ///< growth rate, 1/s
  int ref_slot = 0;
};

/// e0·(1 + α·(slot − ref_slot)·slot_duration). Throws when slot < ref_slot.
double error_at(const ErrorModel& model, int slot, double slot_duration);

/// Same growth law evaluated at a fractional slot (planned arrival times).
double error_at_time(const ErrorModel& model, double slot, double slot_duration);

}  // namespace uavloc
