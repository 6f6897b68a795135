#pragma once

#include "model.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace perco::testing {

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Goodness of fit of integer samples against Poisson(mean). Neighbouring
// classes are merged until each expects at least 5 observations.
inline ChiSquare poisson_gof(const std::vector<std::int64_t>& counts, double mean) {
  const boost::math::poisson_distribution<> pois(mean);
  std::map<std::int64_t, double> observed;
  for (auto c : counts) observed[c] += 1.0;
  const double n = static_cast<double>(counts.size());

  std::vector<double> obs, expct;
  double o = 0.0, e = 0.0;
  const auto top = static_cast<std::int64_t>(mean + 10.0 * std::sqrt(mean) + 10.0);
  for (std::int64_t k = 0; k <= top; ++k) {
    o += observed.count(k) ? observed[k] : 0.0;
    e += n * boost::math::pdf(pois, static_cast<double>(k));
    if (e >= 5.0) {
      obs.push_back(o);
      expct.push_back(e);
      o = e = 0.0;
    }
  }
  // upper tail, folded into the last class
  for (const auto& [k, v] : observed)
    if (k > top) o += v;
  e += n * boost::math::cdf(boost::math::complement(pois, static_cast<double>(top)));
  if (!obs.empty()) {
    obs.back() += o;
    expct.back() += e;
  }

  ChiSquare r;
  for (std::size_t i = 0; i < obs.size(); ++i) r.statistic += (obs[i] - expct[i]) * (obs[i] - expct[i]) / expct[i];
  r.dof = std::max<int>(1, static_cast<int>(obs.size()) - 1);
  r.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(r.dof), r.statistic));
  return r;
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sd_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Concrete models covering every variant, kernel and profile family.
inline std::vector<ModelSpec> catalog() {
  std::vector<ModelSpec> m;
  m.push_back(ModelSpec::boolean(2, RadiusLaw::deterministic(0.5)));
  m.push_back(ModelSpec::boolean(2, RadiusLaw::uniform(0.2, 0.8)));
  m.push_back(ModelSpec::boolean(3, RadiusLaw::pareto(4.0, 0.3)));
  for (auto k : {KernelKind::plain, KernelKind::product, KernelKind::sum, KernelKind::min}) {
    const double tau = k == KernelKind::plain ? 2.0 : 2.5;
    m.push_back(ModelSpec::classical(2, k, Profile::indicator(1.0), tau, 1.0));
    m.push_back(ModelSpec::classical(1, k, Profile::polynomial(2.5), tau, 0.7));
  }
  m.push_back(ModelSpec::classical(2, KernelKind::product, Profile::tabulated({{0.5, 1.0}, {1.0, 0.4}, {3.0, 0.0}}),
                                   3.0, 1.0));
  return m;
}

} // namespace perco::testing
