#include "campbell.hpp"
#include "estimators.hpp"
#include "events.hpp"
#include "rng.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace perco;

TEST_CASE("phi = 0 gives zero") {
  const auto m = ModelSpec::classical(2, KernelKind::plain, Profile::tabulated({{0.0, 0.0}}), 2.0, 1.0);
  CHECK(campbell_long_edges(m, 2.0, 1.0, 1.0).value == 0.0);
}

TEST_CASE("indicator support shorter than c r gives exactly zero") {
  const auto m = ModelSpec::classical(2, KernelKind::plain, Profile::indicator(1.0), 2.0, 1.0);
  CHECK(campbell_long_edges(m, 3.0, 2.0, 0.6).value == 0.0);
  const auto b = ModelSpec::boolean(3, RadiusLaw::uniform(0.1, 0.4));
  CHECK(campbell_long_edges(b, 3.0, 1.0, 0.81).value == 0.0);
}

TEST_CASE("d = 1, phi = rho^-2 beyond 1, r = 1, c = 2") {
  // lambda^2 * int_{-1}^{1} int_{|y-x|>2} |y-x|^-2 dy dx = 2 lambda^2.
  const double frozen = 2.0;

  // independent brute-force midpoint sum over a large square plus the exact tail
  const double big = 400.0, h = 0.01;
  double sum = 0.0;
  for (double x = -1 + h / 2; x < 1; x += h) {
    for (double y = -big + h / 2; y < big; y += h) {
      const double z = std::abs(y - x);
      if (z > 2) sum += h * h / (z * z);
    }
  }
  // |y| > big contributes int_{-1}^{1} (1/(big - x) + 1/(big + x)) dx
  sum += std::log((big + 1) / (big - 1)) * 2;
  CHECK(sum == doctest::Approx(frozen).epsilon(1e-3));

  const auto m = ModelSpec::classical(1, KernelKind::plain, Profile::polynomial(2.0), 2.0, 1.0);
  for (double lambda : {0.5, 1.0, 3.0}) {
    const auto v = campbell_long_edges(m, lambda, 1.0, 2.0, 1e-9);
    CHECK(v.verdict == IntegralVerdict::finite);
    CHECK(v.value == doctest::Approx(frozen * lambda * lambda).epsilon(1e-6));
  }
}

TEST_CASE("divergent mean for heavy tails") {
  const auto b = ModelSpec::boolean(2, RadiusLaw::pareto(1.5, 0.2));
  const auto v = campbell_long_edges(b, 1.0, 1.0, 1.0);
  CHECK(v.verdict == IntegralVerdict::divergent);
  CHECK(std::isinf(v.value));
}

TEST_CASE("window part plus escaping part is the whole") {
  const std::vector<ModelSpec> models = {
      ModelSpec::boolean(2, RadiusLaw::pareto(2.5, 0.3)),
      ModelSpec::classical(2, KernelKind::product, Profile::indicator(1.0), 3.5, 1.0),
      ModelSpec::classical(1, KernelKind::sum, Profile::polynomial(2.0), 2.5, 1.0),
  };
  for (const auto& m : models) {
    CAPTURE(m.describe());
    const double r = 2.0, c = 1.0, w = 4.1;
    const double whole = campbell_long_edges(m, 0.5, r, c).value;
    const double inside = campbell_long_edges_window(m, 0.5, r, c, w).value;
    const double out = campbell_escaping_pairs(m, 0.5, r, w, c * r).value;
    CHECK(inside + out == doctest::Approx(whole).epsilon(1e-5));
  }
}

TEST_CASE("sphere fractions") {
  CHECK(sphere_fraction_inside(2, 0.0, 0.5, 1.0) == 1.0);
  CHECK(sphere_fraction_inside(2, 0.2, 0.5, 1.0) == 1.0);
  CHECK(sphere_fraction_inside(2, 0.2, 1.5, 1.0) == 0.0);
  CHECK(sphere_fraction_inside(1, 0.5, 1.0, 1.0) == 0.5);
  const double s = 0.7, rho = 0.6, big = 1.0;
  const double exact = std::acos((s * s + rho * rho - big * big) / (2 * s * rho)) / std::numbers::pi;
  CHECK(sphere_fraction_inside(2, s, rho, big) == doctest::Approx(exact));
  // d = 3: cap area fraction (1 - cos)/2 by Archimedes
  const double cos3 = (s * s + rho * rho - big * big) / (2 * s * rho);
  CHECK(sphere_fraction_inside(3, s, rho, big) == doctest::Approx((1 - cos3) / 2));
}

TEST_CASE("covariograms") {
  CHECK(ball_covariogram(2, 3.0, 0.0) == doctest::Approx(9 * std::numbers::pi));
  CHECK(ball_covariogram(2, 3.0, 6.0) == doctest::Approx(0.0));
  CHECK(ball_covariogram(1, 3.0, 2.0) == doctest::Approx(4.0));
  // two unit discs at distance 1 overlap in 2 pi / 3 - sqrt(3) / 2
  CHECK(ball_covariogram(2, 1.0, 1.0) == doctest::Approx(2 * std::numbers::pi / 3 - std::sqrt(3.0) / 2));
  const auto box = Window::box({0, 0}, {10, 4});
  CHECK(box_covariogram(box, 0.0) == doctest::Approx(40.0));
  const double rho = 1.5;
  CHECK(box_covariogram(box, rho) ==
        doctest::Approx(40 - 2 * rho * 14 / std::numbers::pi + rho * rho / std::numbers::pi).epsilon(1e-7));
  CHECK(box_covariogram(Window::box({0}, {5}), 2.0) == doctest::Approx(3.0));
}

TEST_CASE("edge count in the 10 x 10 box") {
  const auto m = ModelSpec::classical(2, KernelKind::plain, Profile::indicator(1.0), 2.0, 1.0);
  const auto v = campbell_edge_count(m, 1.0, Window::box({0, 0}, {10, 10}));
  CHECK(v.value == doctest::Approx(143.996299).epsilon(1e-8));
  const auto ball = campbell_edge_count(m, 2.0, Window::centered_ball(2, 5.0));
  // unit-disc kernel in a disc of radius 5: 2 * int_0^1 gamma(rho) 2 pi rho drho
  double s = 0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const double rho = (k + 0.5) / n;
    s += ball_covariogram(2, 5.0, rho) * 2 * std::numbers::pi * rho / n;
  }
  CHECK(ball.value == doctest::Approx(2.0 * s).epsilon(1e-6));
}

TEST_CASE("simulated long-edge counts and the Markov bound") {
  const auto m = ModelSpec::boolean(2, RadiusLaw::pareto(2.5, 0.3));
  const double lambda = 0.5, r = 2.0, c = 1.0;
  const auto window = event_window(2, EventSpec::long_edge(r, c));
  const double oracle = campbell_long_edges_window(m, lambda, r, c, window.radius()).value;
  const int reps = 2000;
  double s = 0, s2 = 0;
  int hits = 0;
  for (int k = 0; k < reps; ++k) {
    const auto g = sample_graph(m, lambda, window, replicate_key(31, k));
    const double e = static_cast<double>(count_long_edges(g, r, c));
    s += e;
    s2 += e * e;
    hits += e > 0;
  }
  const double mean = s / reps;
  const double sd = std::sqrt((s2 / reps - mean * mean) * reps / (reps - 1));
  CHECK(std::abs(mean - oracle) < 3 * sd / std::sqrt(reps));
  const double p = static_cast<double>(hits) / reps;
  CHECK(p <= campbell_long_edges(m, lambda, r, c).value + 3 * std::sqrt(p * (1 - p) / reps));
}

TEST_CASE("slowly decaying tail: sum kernel in d = 1") {
  // W + W' >= 2 >= |z| on [0, 2], so int_2^inf phi_bar = E[2 S - 2] = 4 E[W] - 2
  // with E[W] = (tau - 1) / (tau - 2) = 3; the mean is lambda^2 * 2r * 2 * 10.
  const auto m = ModelSpec::classical(1, KernelKind::sum, Profile::polynomial(2.0), 2.5, 1.0);
  const auto v = campbell_long_edges(m, 0.5, 2.0, 1.0);
  CHECK(v.verdict == IntegralVerdict::finite);
  CHECK(v.value == doctest::Approx(20.0).epsilon(1e-5));
}
