#pragma once

#include <span>

namespace uavloc {

/// Rotary-wing propulsion power coefficients.
///
/// Defaults are the commonly used rotary-wing reference values (blade profile
/// and induced hover power, tip speed, mean induced velocity, lumped parasite
/// coefficient). They are reference-derived, not measured for any airframe.
struct PowerParams {
  double p0 = 79.8563;    ///< blade profile power in hover, W
  double p1 = 88.6279;    ///< induced power in hover, W
  double tip_speed = 120.0;           ///< rotor blade tip speed U, m/s
  double induced_velocity = 4.03;     ///< mean rotor induced velocity in hover v_r, m/s
  double parasite_coeff = 0.018485;   ///< A in ½·A·V³, kg/m

  friend bool operator==(const PowerParams&, const PowerParams&) = default;
};

/// Propulsion power at forward speed V (W). Throws on V < 0.
///
/// P(V) = P0(1 + 3V²/U²) + P1·sqrt(sqrt(1 + V⁴/(4v_r⁴)) − V²/(2v_r²)) + ½AV³.
/// The induced term uses v_r⁴ inside the inner radical, which is the
/// dimensionally consistent form of the rotary-wing model.
double propulsion_power(double speed, const PowerParams& params);

/// Σ P(V_t)·slot_duration over a per-slot speed profile, J.
double mission_energy(std::span<const double> speeds, const PowerParams& params,
                      double slot_duration);

struct BudgetCheck {
  bool within = true;
  double margin = 0.0;  ///< E_max − E, J (negative when over budget)
};

BudgetCheck check_budget(double energy, double budget);

}  // namespace uavloc
