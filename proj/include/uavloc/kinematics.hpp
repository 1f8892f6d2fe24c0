#pragma once

#include <cstdint>
#include <initializer_list>

#include "uavloc/geometry.hpp"

namespace uavloc {

struct UavState {
  Vec3 position;
  Vec3 velocity;
};

/// Ground person; position.z and velocity.z stay 0.
struct PersonState {
  Vec3 position;
  Vec3 velocity;
};

/// Axis-aligned ground rectangle [x0, x0+length] × [y0, y0+width].
struct Area {
  double x0 = 0.0;
  double y0 = 0.0;
  double length = 0.0;
  double width = 0.0;

  bool contains(const Vec2& p, double tol = 0.0) const {
    return p.x >= x0 - tol && p.x <= x0 + length + tol && p.y >= y0 - tol &&
           p.y <= y0 + width + tol;
  }
  friend bool operator==(const Area&, const Area&) = default;
};

/// position += velocity·dt. No boundary handling.
UavState advance(const UavState& state, double dt);

/// position += velocity·dt with specular reflection at the area edges.
PersonState advance(const PersonState& state, double dt, const Area& area);

/// Euclidean distance between a UAV and a ground point.
double distance(const Vec3& q, const Vec3& w);

/// SplitMix64 mixing step; used to derive independent rng stream seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Deterministic stream seed from a master seed and a tuple of stream tags.
std::uint64_t stream_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags);

}  // namespace uavloc
