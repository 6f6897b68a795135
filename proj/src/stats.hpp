#pragma once

#include <cstdint>

namespace perco {

// Bernoulli Monte Carlo estimate with a Wilson score interval.
struct Estimate {
  std::int64_t hits = 0;
  std::int64_t trials = 0;
  double p = 0.0;
  double lo = 0.0;
  double hi = 1.0;
  double level = 0.95;
};

// Two-sided standard normal quantile z with P(|Z| <= z) = level.
double normal_quantile(double level);
// Two-sided Student t quantile with `dof` degrees of freedom.
double student_quantile(double level, double dof);

Estimate wilson_estimate(std::int64_t hits, std::int64_t trials, double level = 0.95);

} // namespace perco
