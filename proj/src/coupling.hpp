#pragma once

#include "estimators.hpp"
#include "graph.hpp"
#include "ppp.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace perco {

// High-intensity cloud and its independent thinning. Point i is kept iff its
// retention variate V(id_i) < lambda_low / lambda_high; V depends only on the
// seed and the point id, so thinnings at different ratios are nested.
struct CoupledPair {
  double lambda_low = 0.0;
  double lambda_high = 0.0;
  PointCloud high;
  std::vector<bool> retained;
  PointCloud low;
};

// Retention variate of point `id` in the stream keyed by `seed`.
double retention_uniform(std::uint64_t seed, std::uint64_t id) noexcept;

// Keeps the points of `cloud` with retention variate < ratio.
PointCloud thin_cloud(const PointCloud& cloud, double ratio, std::uint64_t seed, double intensity);

// `seed` keys both the high cloud and the retention variates.
CoupledPair thin_pair(const Window& window, double lambda_low, double lambda_high, std::uint64_t seed);

// Both graphs with pair randomness keyed by the inherited ids. Boolean and
// classical models only.
std::pair<GeomGraph, GeomGraph> coupled_graphs(const CoupledPair& pair, const ModelSpec& model, std::uint64_t seed,
                                               const BuildOptions& build = {});

// The low graph equals the subgraph of the high graph induced by the points
// the low cloud kept (matched by id).
bool is_induced_subgraph(const GeomGraph& low, const GeomGraph& high);

struct Lemma2Report {
  double lambda = 0.0;
  double lambda_prime = 0.0;
  double r = 0.0;
  Estimate low;  // P_lambda(L(r,1))
  Estimate high; // P_lambda'(L(r,1))
  std::int64_t upper_violations = 0; // replicates with L in the low graph but not the high one
  std::int64_t subgraph_failures = 0;
  bool lower_ok = false; // (lambda/lambda')^2 * high.lo <= low.hi
  bool upper_ok = false; // low.lo <= high.hi and no per-replicate violation
  bool not_violated = false;
};

// (lambda/lambda')^2 P_lambda'(L(r,1)) <= P_lambda(L(r,1)) <= P_lambda'(L(r,1)) on
// coupled replicates: the lower bound statistically, the upper bound both
// statistically and per replicate.
Lemma2Report check_lemma2(const ModelSpec& model, double lambda, double lambda_prime, double r, std::int64_t n,
                          std::uint64_t seed, const RunOptions& opt = {});

} // namespace perco
