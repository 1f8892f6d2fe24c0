#include "uavloc/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavloc {

double propulsion_power(double speed, const PowerParams& params) {
  if (speed < 0.0) {
    throw std::invalid_argument("propulsion_power: speed must be non-negative");
  }
  const double v2 = speed * speed;
  const double vr2 = params.induced_velocity * params.induced_velocity;
  const double blade = params.p0 * (1.0 + 3.0 * v2 / (params.tip_speed * params.tip_speed));
  const double inner = std::sqrt(1.0 + v2 * v2 / (4.0 * vr2 * vr2)) - v2 / (2.0 * vr2);
  const double induced = params.p1 * std::sqrt(std::max(0.0, inner));
  const double parasite = 0.5 * params.parasite_coeff * v2 * speed;
  return blade + induced + parasite;
}

double mission_energy(std::span<const double> speeds, const PowerParams& params,
                      double slot_duration) {
  double total = 0.0;
  for (double v : speeds) {
    total += propulsion_power(v, params) * slot_duration;
  }
  return total;
}

BudgetCheck check_budget(double energy, double budget) {
  return {energy <= budget, budget - energy};
}

}  // namespace uavloc
