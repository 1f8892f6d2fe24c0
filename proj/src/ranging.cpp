#include "uavloc/ranging.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uavloc {

double log_std(const RangingParams& params) {
  return params.sigma_psi / (kDecibelsPerNeper * params.eta);
}

double sample_range(double d, const RangingParams& params, std::mt19937_64& rng) {
  if (!(d > 0.0)) {
    throw std::invalid_argument("sample_range: distance must be positive");
  }
  const double s = log_std(params);
  if (s == 0.0) {
    return d;
  }
  std::normal_distribution<double> gauss(0.0, s);
  return d * std::exp(gauss(rng));
}

double range_pdf(double r, double d, const RangingParams& params) {
  if (!(r > 0.0) || !(d > 0.0)) {
    return 0.0;
  }
  const double s = log_std(params);
  const double z = std::log(r / d);
  return std::exp(-z * z / (2.0 * s * s)) / (r * s * std::sqrt(2.0 * std::numbers::pi));
}

double mean_range_error(double d, const RangingParams& params) {
  const double s = log_std(params);
  return d * std::expm1(0.5 * s * s);
}

double signed_mean_range_error(double d, const RangingParams& params) {
  return -mean_range_error(d, params);
}

}  // namespace uavloc
