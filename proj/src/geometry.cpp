#include "uavloc/geometry.hpp"

namespace uavloc {

Vec2 clamp_norm(const Vec2& a, double max_norm) {
  const double n = norm(a);
  if (n <= max_norm || n == 0.0) {
    return a;
  }
  return a * (max_norm / n);
}

Vec2 Line2::reflect_vector(const Vec2& v) const {
  // v' = 2 (v·u) u - v
  return 2.0 * dot(v, direction) * direction - v;
}

Vec2 Line2::reflect_point(const Vec2& p) const {
  return point + reflect_vector(p - point);
}

}  // namespace uavloc
