#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "uavloc/oracles.hpp"
#include "uavloc/ranging.hpp"

using namespace uavloc;
using doctest::Approx;

TEST_CASE("log_std") {
  CHECK(log_std({2.0, 4.0}) == Approx(0.460517).epsilon(1e-6));
  CHECK(log_std({2.0, 0.0}) == 0.0);
  CHECK(log_std({1.0, 4.342944819032518}) == Approx(1.0).epsilon(1e-12));
  CHECK(RangingParams{2.0, 4.0}.sigma() == Approx(0.921034).epsilon(1e-6));
}

TEST_CASE("sample_range: noiseless and deterministic") {
  std::mt19937_64 rng(1);
  CHECK(sample_range(100.0, {2.0, 0.0}, rng) == 100.0);

  std::mt19937_64 a(42), b(42);
  CHECK(sample_range(100.0, {}, a) == sample_range(100.0, {}, b));
  CHECK_THROWS_AS(sample_range(0.0, {}, a), std::invalid_argument);
  CHECK_THROWS_AS(sample_range(-1.0, {}, a), std::invalid_argument);
}

TEST_CASE("sample_range: moments over 1e5 draws") {
  const RangingParams p{};
  const auto m = oracle::ranging_moments(100.0, p, 100000, 7);
  const double ls = log_std(p);
  CHECK(std::abs(m.mean - 111.19) / 111.19 < 0.01);
  CHECK(std::abs(m.log_mean) < 3.0 * ls / std::sqrt(1e5));
  CHECK(std::abs(m.log_var - ls * ls) / (ls * ls) < 0.05);
}

TEST_CASE("range_pdf") {
  const RangingParams p{};
  CHECK(range_pdf(100.0, 100.0, p) == Approx(0.008663).epsilon(1e-4));

  // Trapezoid in log space: ∫ f(r) dr = ∫ f(e^u) e^u du.
  const double lo = std::log(100.0) - 12.0, hi = std::log(100.0) + 12.0;
  const int n = 200000;
  const double h = (hi - lo) / n;
  double total = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double u = lo + i * h;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    total += w * range_pdf(std::exp(u), 100.0, p) * std::exp(u);
  }
  CHECK(std::abs(total * h - 1.0) < 1e-6);

  // The mode sits below d.
  double best_r = 0.0, best_f = 0.0;
  for (double r = 1.0; r < 300.0; r += 0.01) {
    if (range_pdf(r, 100.0, p) > best_f) {
      best_f = range_pdf(r, 100.0, p);
      best_r = r;
    }
  }
  CHECK(best_r < 100.0);
}

TEST_CASE("mean_range_error") {
  const RangingParams p{};
  CHECK(mean_range_error(100.0, p) == Approx(11.187).epsilon(1e-4));
  CHECK(mean_range_error(0.0, p) == 0.0);
  CHECK(mean_range_error(240.0, p) == Approx(2.0 * mean_range_error(120.0, p)));
  CHECK(signed_mean_range_error(100.0, p) == Approx(-mean_range_error(100.0, p)));
}

TEST_CASE("mean_range_error agrees with the Monte-Carlo bias") {
  const auto c = oracle::mean_error_check(
      [](double d, const RangingParams& p) { return mean_range_error(d, p); }, 100.0, {}, 1000000,
      9);
  CHECK(c.pass);
  CHECK(std::abs(c.observed - c.expected) / c.expected < 0.01);
}

TEST_CASE("a biased mean error is caught by the Monte-Carlo check") {
  const auto c = oracle::mean_error_check(
      [](double d, const RangingParams& p) { return 1.1 * mean_range_error(d, p); }, 100.0, {},
      1000000, 9);
  CHECK_FALSE(c.pass);
}
