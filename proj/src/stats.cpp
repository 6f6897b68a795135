#include "stats.hpp"

#include "errors.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>

namespace perco {

namespace {

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("confidence level must lie in (0,1)");
}

} // namespace

double normal_quantile(double level) {
  check_level(level);
  return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * level);
}

double student_quantile(double level, double dof) {
  check_level(level);
  return boost::math::quantile(boost::math::students_t_distribution<double>(dof), 0.5 + 0.5 * level);
}

Estimate wilson_estimate(std::int64_t hits, std::int64_t trials, double level) {
  if (trials < 1) throw ConfigError("an estimate needs at least one trial");
  if (hits < 0 || hits > trials) throw ConsistencyError("hit count outside [0, trials]");
  Estimate e;
  e.hits = hits;
  e.trials = trials;
  e.level = level;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z = normal_quantile(level);
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  e.p = p;
  // exact ends at 0 and n hits; rounding must not push the interval past p
  e.lo = hits == 0 ? 0.0 : std::min(p, std::max(0.0, centre - half));
  e.hi = hits == trials ? 1.0 : std::max(p, std::min(1.0, centre + half));
  return e;
}

} // namespace perco
