#include "parallel.hpp"
#include "rng.hpp"
#include "stats.hpp"

#include <doctest.h>

#include <random>
#include <stdexcept>

using namespace perco;

TEST_CASE("quantiles") {
  CHECK(normal_quantile(0.95) == doctest::Approx(1.959963985));
  CHECK(normal_quantile(0.99) == doctest::Approx(2.575829304));
  CHECK(student_quantile(0.95, 4) == doctest::Approx(2.776445105));
  CHECK(student_quantile(0.95, 1e6) == doctest::Approx(1.96).epsilon(1e-3));
}

TEST_CASE("Wilson interval edge cases") {
  const auto zero = wilson_estimate(0, 100);
  CHECK(zero.p == 0.0);
  CHECK(zero.lo == 0.0);
  CHECK(zero.hi == doctest::Approx(0.0369935));
  const auto all = wilson_estimate(100, 100);
  CHECK(all.hi == 1.0);
  CHECK(all.lo == doctest::Approx(1 - 0.0369935));
  const auto half = wilson_estimate(50, 100);
  CHECK(half.lo == doctest::Approx(1 - half.hi));
  CHECK(half.lo < 0.5);
  CHECK(half.hi > 0.5);
}

TEST_CASE("Wilson coverage on Bernoulli streams") {
  const int intervals = 10000;
  const int n = 1000;
  for (double p : {0.01, 0.1, 0.5}) {
    CAPTURE(p);
    CounterRng rng(hash_combine(42, static_cast<std::uint64_t>(p * 1000)));
    std::binomial_distribution<std::int64_t> binom(n, p);
    int covered = 0;
    for (int k = 0; k < intervals; ++k) {
      const auto e = wilson_estimate(binom(rng), n);
      covered += e.lo <= p && p <= e.hi;
    }
    const double cov = static_cast<double>(covered) / intervals;
    CHECK(cov >= 0.93);
    CHECK(cov <= 0.97);
  }
}

TEST_CASE("replicates come back in index order") {
  for (int threads : {1, 2, 8}) {
    const auto out = run_replicates<std::uint64_t>(1000, threads, [](std::size_t i) { return mix64(i); });
    bool ok = true;
    for (std::size_t i = 0; i < out.size(); ++i) ok = ok && out[i] == mix64(i);
    CHECK(ok);
  }
  CHECK(run_replicates<int>(0, 4, [](std::size_t) { return 1; }).empty());
}

TEST_CASE("the lowest failing replicate wins") {
  for (int threads : {1, 3, 8}) {
    try {
      run_replicates<int>(500, threads, [](std::size_t i) -> int {
        if (i % 97 == 13) throw std::runtime_error("failed at " + std::to_string(i));
        return 0;
      });
      FAIL("no exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "failed at 13");
    }
  }
}
