#pragma once

#include <optional>
#include <span>
#include <vector>

#include "uavloc/error_bound.hpp"
#include "uavloc/geometry.hpp"
#include "uavloc/ranging.hpp"
#include "uavloc/scenario.hpp"

namespace uavloc {

/// One continuous reception episode between a UAV and a person.
///
/// Slot k of the window is absolute slot `start_slot + k`; the UAV position
/// and every sample of that slot share one geometry.
struct RangeWindow {
  int uav = 0;
  int person = 0;
  int start_slot = 0;
  std::vector<Vec3> uav_positions;
  std::vector<std::vector<double>> samples;

  int slot_count() const { return static_cast<int>(uav_positions.size()); }
  int end_slot() const { return start_slot + slot_count() - 1; }

  /// Throws std::invalid_argument when slots are missing or a sample is not positive.
  void validate() const;
};

/// A constant-velocity ground track.
struct Hypothesis {
  Vec2 position;  ///< at the reference slot
  Vec2 velocity;  ///< m/s
};

struct TrackEstimate {
  int person = 0;
  int ref_slot = 0;  ///< t_e, last slot of the fitted window
  Vec2 position;
  Vec2 velocity;
  double error_bound = 0.0;
  std::optional<Hypothesis> mirror;
  std::optional<Line2> collinear_line;
  double log_likelihood = 0.0;
  double end_range = 0.0;  ///< slant range from the UAV at ref_slot, m
  bool converged = true;
  bool empty_region = false;

  Hypothesis hypothesis() const { return {position, velocity}; }
};

/// Sum over slots and samples of ln f(r | d(t)), with the track parameterized
/// by its position `w0` at the window's first slot and velocity `v` (m/s).
///
/// Returns −∞ when some slot has d = 0. With σ_Ψ = 0 the density is
/// degenerate and the negated squared log-residual sum is returned instead.
double window_log_likelihood(const RangeWindow& window, const Vec2& w0, const Vec2& v,
                             const RangingParams& ranging, double slot_duration);

/// Closed-form maximizer for a fixed geometry: the geometric mean of samples.
double estimate_static_distance(std::span<const double> samples);

struct CollinearCheck {
  bool collinear = false;
  Line2 line;
  double max_deviation = 0.0;
};

/// Total-least-squares line through the ground projections of `positions`.
CollinearCheck detect_collinear(std::span<const Vec3> positions, double tol_m);

Hypothesis mirror_hypothesis(const Hypothesis& h, const Line2& line);

/// ŵ(t_e) + v̂·(slot − t_e)·slot_duration. Throws when slot < ref_slot.
Vec2 extrapolate(const TrackEstimate& estimate, int slot, double slot_duration);
Vec2 extrapolate_to(const Hypothesis& h, int ref_slot, double slot, double slot_duration);

struct FitOptions {
  RangingParams ranging;
  double slot_duration = 0.025;
  double person_vmax = 1.5;
  double collinear_tol = 0.5;
  int annuli_count = 5;
  AnnulusRangeSource range_source = AnnulusRangeSource::track;
  Resolution resolution{};
  int max_iterations = 500;
  double objective_tol = 1e-10;
  bool compute_error_bound = true;

  static FitOptions from(const Scenario& scenario);
};

/// Maximum-likelihood constant-velocity track over one window, with error
/// bound and, for collinear windows, the reflected second hypothesis.
/// Requires at least three slots.
TrackEstimate fit_track(const RangeWindow& window, const FitOptions& options);

/// Annuli describing where the person can be at the window's last slot,
/// given a fitted track. Uses `options.annuli_count` evenly spaced slots.
std::vector<Annulus> window_annuli(const RangeWindow& window, const Hypothesis& track_at_end,
                                   const FitOptions& options);

/// Error bound e_s(t_e) for a track fitted on `window`.
FarthestPoint window_error_bound(const RangeWindow& window, const Hypothesis& track_at_end,
                                 const std::optional<Line2>& collinear_line,
                                 const FitOptions& options);

}  // namespace uavloc
