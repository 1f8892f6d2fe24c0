#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "synthetic.hpp"
#include "uavloc/error_bound.hpp"
#include "uavloc/oracles.hpp"

using namespace uavloc;
using doctest::Approx;

TEST_CASE("annulus construction") {
  const RangingParams p{};
  const Annulus a = build_annulus(100.0, p, 1.5, 2.0, {0, 0});
  CHECK(a.inner == Approx(85.81).epsilon(2e-4));
  CHECK(a.outer == Approx(114.19).epsilon(2e-4));

  const Annulus sharp = build_annulus(100.0, {2.0, 0.0}, 1.5, 0.0, {0, 0});
  CHECK(sharp.inner == 100.0);
  CHECK(sharp.outer == 100.0);

  // Heavy shadowing pushes the bias past d* itself.
  const RangingParams heavy{1.0, 8.0};
  REQUIRE(mean_range_error(5.0, heavy) > 5.0);
  CHECK(build_annulus(5.0, heavy, 1.5, 0.0, {0, 0}).inner == 0.0);
  CHECK(build_annulus(5.0, heavy, 1.5, 0.0, {0, 0}).outer > 10.0);
}

TEST_CASE("ground projection") {
  const Annulus g = project_to_ground({{1, 2}, 90.0, 150.0}, 100.0);
  CHECK(g.center == Vec2{1, 2});
  CHECK(g.inner == 0.0);
  CHECK(g.outer == Approx(std::sqrt(12500.0)));
}

TEST_CASE("region membership") {
  const std::vector<Annulus> one{{{0, 0}, 85.81, 114.19}};
  CHECK(region_contains(one, {100.0, 0.0}));
  CHECK_FALSE(region_contains(one, {0.0, 0.0}));

  const std::vector<Annulus> disjoint{{{0, 0}, 0.0, 10.0}, {{100, 0}, 0.0, 10.0}};
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-50, 150);
  for (int i = 0; i < 1000; ++i) {
    REQUIRE_FALSE(region_contains(disjoint, {u(rng), u(rng)}));
  }

  const HalfPlane upper{{{0, 0}, {1, 0}}, 1.0};
  CHECK(region_contains(one, {0.0, 100.0}, &upper));
  CHECK_FALSE(region_contains(one, {0.0, -100.0}, &upper));
}

TEST_CASE("farthest point: single ring seen from its mid circle") {
  const std::vector<Annulus> one{{{0, 0}, 85.81, 114.19}};
  const auto r = farthest_point_error(one, {100.0, 0.0});
  CHECK_FALSE(r.empty_region);
  CHECK(r.error == Approx(214.19).epsilon(1e-4));
  CHECK(r.error == Approx(oracle::polar_farthest(one, {100.0, 0.0})).epsilon(0.02));
}

TEST_CASE("farthest point: rings meeting in one point") {
  const std::vector<Annulus> touch{{{0, 0}, 0.0, 10.0}, {{20, 0}, 0.0, 10.0}};
  const auto r = farthest_point_error(touch, {10.0, 0.0});
  CHECK_FALSE(r.empty_region);
  CHECK(r.error < 1e-6);
}

TEST_CASE("farthest point: empty region falls back to the widest half-width") {
  const std::vector<Annulus> apart{{{0, 0}, 0.0, 10.0}, {{100, 0}, 4.0, 30.0}};
  const auto r = farthest_point_error(apart, {500.0, 500.0});
  CHECK(r.empty_region);
  CHECK(r.error == Approx(13.0));
  CHECK_THROWS_AS(farthest_point_error(std::vector<Annulus>{}, {0, 0}), std::invalid_argument);
}

TEST_CASE("farthest point: noiseless three-ring geometry against the polar oracle") {
  const Vec2 truth{30, 70};
  std::vector<Annulus> annuli;
  const std::vector<Vec2> centers{{0, 0}, {60, 0}, {60, 60}};
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const double slant = std::hypot(norm(centers[k] - truth), 100.0);
    const double lag = 0.5 * static_cast<double>(centers.size() - 1 - k) + 0.5;
    annuli.push_back(project_to_ground(build_annulus(slant, {2.0, 0.0}, 1.5, lag, centers[k]), 100.0));
  }
  const auto r = farthest_point_error(annuli, truth);
  const double widest = annuli[0].outer - annuli[0].inner;
  CHECK(r.error > 0.0);
  CHECK(r.error <= widest + 1.0);
  CHECK(r.error == Approx(oracle::polar_farthest(annuli, truth)).epsilon(0.02));
}

TEST_CASE("farthest point: adding a ring never increases the bound") {
  for (const auto& f : synth::annulus_fixtures(12, 77)) {
    if (f.annuli.size() < 3) continue;
    const HalfPlane* side = f.side ? &*f.side : nullptr;
    const std::vector<Annulus> fewer(f.annuli.begin(), f.annuli.end() - 1);
    const Resolution fine{4096, 256};
    const auto all = farthest_point_error(f.annuli, f.estimate, fine, side);
    const auto part = farthest_point_error(fewer, f.estimate, fine, side);
    if (all.empty_region || part.empty_region) continue;
    CHECK(all.error <= part.error + 1e-9);
  }
}

TEST_CASE("farthest point: stable under a finer discretization") {
  for (const auto& f : synth::annulus_fixtures(12, 91)) {
    const HalfPlane* side = f.side ? &*f.side : nullptr;
    const auto base = farthest_point_error(f.annuli, f.estimate, {2048, 256}, side);
    const auto fine = farthest_point_error(f.annuli, f.estimate, {4096, 512}, side);
    if (base.empty_region) continue;
    CHECK(std::abs(fine.error - base.error) < 0.02 * fine.error);
  }
}

TEST_CASE("farthest point: bound covers every sampled region point") {
  for (const auto& f : synth::annulus_fixtures(8, 5)) {
    const HalfPlane* side = f.side ? &*f.side : nullptr;
    const auto r = farthest_point_error(f.annuli, f.estimate, {}, side);
    if (r.empty_region) continue;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-250, 250);
    for (int i = 0; i < 4000; ++i) {
      const Vec2 p{u(rng), u(rng)};
      if (region_contains(f.annuli, p, side)) {
        CHECK(norm(p - f.estimate) <= r.error * 1.02);
      }
    }
  }
}

TEST_CASE("error growth") {
  const ErrorModel m{5.0, 0.1, 200};
  CHECK(error_at(m, 200, 0.025) == 5.0);
  CHECK(error_at(m, 600, 0.025) == Approx(10.0));
  CHECK_THROWS_AS(error_at(m, 199, 0.025), std::invalid_argument);
  const ErrorModel flat{7.0, 0.0, 0};
  for (int slot : {0, 10, 100000}) CHECK(error_at(flat, slot, 0.025) == 7.0);
  CHECK(error_at_time(m, 400.0, 0.025) == Approx(7.5));
}
