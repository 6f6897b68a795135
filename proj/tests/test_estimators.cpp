#include "errors.hpp"
#include "estimators.hpp"
#include "rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace perco;

namespace {

// Slow reference for L(r,c) on the same replicate streams: direct pair loop,
// no spatial index, no graph object.
bool naive_long_edge(const ModelSpec& m, double lambda, double r, double c, std::uint64_t replicate) {
  const auto window = event_window(m.dim(), EventSpec::long_edge(r, c));
  const auto cloud = sample_ppp(window, lambda, stream_key(replicate, Stream::cloud));
  const auto seed = stream_key(replicate, Stream::edges);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t j = 0; j < cloud.size(); ++j) {
      if (i == j || norm(cloud.position(i)) >= r) continue;
      const double len = distance(cloud.position(i), cloud.position(j));
      if (len > c * r && pair_uniform(seed, cloud.id(i), cloud.id(j)) < connection_prob(m, cloud.point(i), cloud.point(j)))
        return true;
    }
  }
  return false;
}

} // namespace

TEST_CASE("zero intensity: no hits") {
  const auto m = ModelSpec::classical(2, KernelKind::product, Profile::polynomial(1.5), 2.5, 1.0);
  for (const auto& ev : {EventSpec::long_edge(1, 1), EventSpec::crossing(1), EventSpec::far_edge(0.5)}) {
    const auto e = estimate_event(m, 0.0, ev, 50, 1);
    CHECK(e.estimate.hits == 0);
    CHECK(e.estimate.trials == 50);
    CHECK(e.estimate.p == 0.0);
  }
}

TEST_CASE("certain events") {
  // indicator reaching over the whole window, many points: C(1) always holds
  const auto m = ModelSpec::classical(2, KernelKind::plain, Profile::indicator(1e6), 2.0, 1.0);
  const auto e = estimate_event(m, 50.0, EventSpec::crossing(1.0), 200, 3);
  CHECK(e.estimate.hits == 200);
  CHECK(e.estimate.hi == 1.0);
}

TEST_CASE("long-edge estimates agree with a naive implementation on the same seeds") {
  const auto m = ModelSpec::boolean(2, RadiusLaw::deterministic(0.5));
  for (auto [lambda, r] : {std::pair{0.1, 2.0}, std::pair{0.5, 0.4}, std::pair{1.0, 0.45}}) {
    CAPTURE(r);
    const std::int64_t n = 400;
    const auto e = estimate_event(m, lambda, EventSpec::long_edge(r, 1.0), n, 77);
    std::int64_t naive = 0;
    for (std::int64_t i = 0; i < n; ++i) naive += naive_long_edge(m, lambda, r, 1.0, replicate_key(77, i));
    CHECK(e.estimate.hits == naive);
    const double p = static_cast<double>(naive) / n;
    CHECK(e.estimate.lo <= p);
    CHECK(p <= e.estimate.hi);
  }
  const auto heavy = ModelSpec::classical(2, KernelKind::product, Profile::polynomial(1.5), 2.5, 1.0);
  const auto e = estimate_event(heavy, 0.5, EventSpec::long_edge(1.5, 1.0), 200, 5);
  std::int64_t naive = 0;
  for (std::int64_t i = 0; i < 200; ++i) naive += naive_long_edge(heavy, 0.5, 1.5, 1.0, replicate_key(5, i));
  CHECK(e.estimate.hits == naive);
  CHECK(naive > 0);
}

TEST_CASE("thread count does not change estimates") {
  const auto m = ModelSpec::boolean(2, RadiusLaw::pareto(1.8, 0.2));
  RunOptions one, many;
  many.threads = 8;
  const auto a = estimate_event(m, 0.6, EventSpec::crossing(1.5), 300, 9, one);
  const auto b = estimate_event(m, 0.6, EventSpec::crossing(1.5), 300, 9, many);
  CHECK(a.estimate.hits == b.estimate.hits);
}

TEST_CASE("truncation bounds") {
  const auto b = ModelSpec::boolean(2, RadiusLaw::uniform(0.1, 0.5));
  CHECK(truncation_bound(b, 1.0, EventSpec::long_edge(2, 1), 4.1)->value == 0.0);
  CHECK(truncation_bound(b, 1.0, EventSpec::local_crossing(2), 6.1)->value == 0.0);
  const auto h = ModelSpec::boolean(2, RadiusLaw::pareto(2.5, 0.2));
  const auto t = truncation_bound(h, 1.0, EventSpec::crossing(2), 4.1);
  REQUIRE(t.has_value());
  CHECK(t->value > 0.0);
  const auto g = ModelSpec::generalized(2, {KernelKind::plain, Profile::indicator(1.0), 2.0, 1.0});
  CHECK_FALSE(truncation_bound(g, 1.0, EventSpec::crossing(2), 4.1).has_value());
}

TEST_CASE("probe: bounded radii above 2 R_max vanish") {
  const auto m = ModelSpec::boolean(2, RadiusLaw::uniform(0.2, 0.5));
  const auto rep = probe_H(m, 1.0, 1.0, 1.1, 8.8, 4, 200, 1);
  CHECK(rep.verdict == TrendVerdict::vanishing);
  CHECK(rep.all_zero);
  for (const auto& p : rep.points) CHECK(p.estimate.hits == 0);
  CHECK_FALSE(rep.slope_defined);
}

TEST_CASE("probe: growing Campbell mean gives persistence") {
  // phi = r^-1.5 beyond 1 in d = 1: the long-edge mean grows like r^0.5
  const auto m = ModelSpec::classical(1, KernelKind::plain, Profile::polynomial(1.5), 2.0, 1.0);
  const auto rep = probe_H(m, 1.0, 1.0, 1.0, 8.0, 4, 400, 2);
  CHECK(rep.verdict == TrendVerdict::persistent);
  for (std::size_t k = 1; k < rep.points.size(); ++k) {
    CHECK(rep.points[k].campbell->value > rep.points[k - 1].campbell->value);
  }
  // same verdict at half the intensity, up to inconclusive
  const auto half = probe_H(m, 0.5, 1.0, 1.0, 8.0, 4, 400, 3);
  CHECK(half.verdict != TrendVerdict::vanishing);
}

TEST_CASE("probe: fast decay vanishes") {
  // long-edge mean falls like r^-2
  const auto m = ModelSpec::classical(1, KernelKind::plain, Profile::polynomial(4.0), 2.0, 1.0);
  const auto rep = probe_H(m, 1.0, 1.0, 1.0, 32.0, 6, 400, 4);
  CHECK(rep.verdict == TrendVerdict::vanishing);
  CHECK(rep.note.find("finite-scale proxy") != std::string::npos);
}

TEST_CASE("probe arguments") {
  const auto m = ModelSpec::boolean(2, RadiusLaw::deterministic(0.5));
  CHECK_THROWS_AS(probe_H(m, 1.0, 1.0, 1.0, 8.0, 3, 10, 1), ConfigError);
  CHECK_THROWS_AS(probe_H(m, 1.0, 1.0, 8.0, 1.0, 4, 10, 1), ConfigError);
  const auto g = geometric_grid(1.0, 8.0, 4);
  REQUIRE(g.size() == 4);
  CHECK(g[1] == doctest::Approx(2.0));
  CHECK(g[3] == 8.0);
}

TEST_CASE("covering") {
  CHECK(covering_number(1.0, 3).count() == 1);
  const auto line = covering_number(3.0, 1);
  CHECK(line.count() <= 3);
  std::set<double> cs;
  for (const auto& c : line.centers) cs.insert(c[0]);
  CHECK(cs == std::set<double>{-2.0, 0.0, 2.0});
  for (int d : {1, 2, 3}) {
    for (double q : {1.5, 2.0, 3.0, 5.0}) {
      CAPTURE(d);
      CAPTURE(q);
      const auto cover = covering_number(q, d);
      CHECK(uncovered_samples(cover, 20000, 1) == 0);
    }
  }
  CHECK_THROWS_AS(covering_number(0.5, 2), ConfigError);
}

TEST_CASE("lemma 1 with c' = c is tight") {
  const auto m = ModelSpec::boolean(2, RadiusLaw::pareto(1.5, 0.3));
  const auto rep = check_lemma1(m, 0.3, 2.0, 1.0, 1.0, 300, 4);
  CHECK(rep.covering == 1);
  CHECK(rep.lhs.hits == rep.rhs.hits);
  CHECK(rep.exact_violations == 0);
  CHECK(rep.not_violated);
}

TEST_CASE("lemma 1 on a heavy-tailed Boolean model") {
  const auto m = ModelSpec::boolean(2, RadiusLaw::pareto(1.5, 0.3));
  const auto rep = check_lemma1(m, 0.05, 5.0, 1.0, 2.0, 2000, 5);
  CHECK(rep.covering == 9);
  CHECK(rep.exact_violations == 0);
  CHECK(rep.rhs.hits > 0);
  CHECK(rep.not_violated);
}

TEST_CASE("mixing") {
  const auto m = ModelSpec::classical(2, KernelKind::plain, Profile::indicator(1.0), 2.0, 1.0);
  const auto zero = estimate_mixing_cov(m, 0.0, 1.0, {7.0, 0.0}, 1000, 1);
  CHECK(zero.cov == 0.0);
  CHECK(zero.p_a == 0.0);
  const auto e = estimate_mixing_cov(m, 1.2, 1.0, {7.0, 0.0}, 1000, 2);
  CHECK(e.p_a > 0.1);
  CHECK(e.contains_zero());
  CHECK(e.separation == doctest::Approx(7.0));
  CHECK_THROWS_AS(estimate_mixing_cov(m, 1.0, 1.0, {5.0, 0.0}, 1000, 1), ConfigError);
  CHECK_THROWS_AS(estimate_mixing_cov(m, 1.0, 1.0, {7.0, 0.0}, 999, 1), ConfigError);
  // exploratory measurement on the generalized model: finite, no verdict
  const auto g = ModelSpec::generalized(2, {KernelKind::plain, Profile::indicator(1.5), 2.0, 1.0});
  const auto ge = estimate_mixing_cov(g, 1.0, 1.0, {7.0, 0.0}, 1000, 3);
  CHECK(std::isfinite(ge.cov));
  CHECK(ge.lo <= ge.hi);
}
