#include "uavloc/kinematics.hpp"

#include <cmath>

namespace uavloc {
namespace {

// Folds x into [lo, hi], flipping the velocity sign once per bounce.
void reflect_axis(double& x, double& v, double lo, double hi) {
  const double span = hi - lo;
  if (span <= 0.0) {
    x = lo;
    return;
  }
  while (x < lo || x > hi) {
    if (x > hi) {
      x = 2.0 * hi - x;
    } else {
      x = 2.0 * lo - x;
    }
    v = -v;
  }
}

}  // namespace

UavState advance(const UavState& state, double dt) {
  return {state.position + state.velocity * dt, state.velocity};
}

PersonState advance(const PersonState& state, double dt, const Area& area) {
  PersonState next{state.position + state.velocity * dt, state.velocity};
  reflect_axis(next.position.x, next.velocity.x, area.x0, area.x0 + area.length);
  reflect_axis(next.position.y, next.velocity.y, area.y0, area.y0 + area.width);
  next.position.z = 0.0;
  next.velocity.z = 0.0;
  return next;
}

double distance(const Vec3& q, const Vec3& w) { return norm(q - w); }

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = mix_seed(master);
  for (std::uint64_t t : tags) {
    h = mix_seed(h ^ mix_seed(t + 0x632be59bd9b4e019ULL));
  }
  return h;
}

}  // namespace uavloc
