#pragma once

#include <random>

namespace uavloc {

/// 10·log10(e): converts natural-log units to decibels.
inline constexpr double kDecibelsPerNeper = 4.342944819032518;

/// Log-normal shadowing parameters of the RSSI ranging model.
///
/// A measured range is `r = d · 10^(-Ψ/(10η))` with `Ψ ~ N(0, σ_Ψ²)` in dB,
/// so `ln(r/d) ~ N(0, log_std²)` with `log_std = σ_Ψ / (ξ·η)`.
struct RangingParams {
  double eta = 2.0;        ///< path-loss exponent
  double sigma_psi = 4.0;  ///< shadowing standard deviation, dB

  /// σ = σ_Ψ / ξ (shadowing std in nepers, before path-loss scaling).
  double sigma() const { return sigma_psi / kDecibelsPerNeper; }

  friend bool operator==(const RangingParams&, const RangingParams&) = default;
};

/// Standard deviation of ln(r/d).
double log_std(const RangingParams& params);

/// Draws one range measurement for true distance `d`. Throws on d <= 0.
double sample_range(double d, const RangingParams& params, std::mt19937_64& rng);

/// Log-normal density of measuring `r` at true distance `d`, in 1/m.
double range_pdf(double r, double d, const RangingParams& params);

/// Magnitude of the mean ranging bias, d·(exp(log_std²/2) − 1).
double mean_range_error(double d, const RangingParams& params);

/// Signed form as printed in the source model, d·(1 − exp(log_std²/2)).
double signed_mean_range_error(double d, const RangingParams& params);

}  // namespace uavloc
