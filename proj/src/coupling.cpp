#include "coupling.hpp"

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

#include <algorithm>
#include <unordered_map>

namespace perco {

double retention_uniform(std::uint64_t seed, std::uint64_t id) noexcept {
  return to_open_unit(hash_combine(seed, id));
}

PointCloud thin_cloud(const PointCloud& cloud, double ratio, std::uint64_t seed, double intensity) {
  std::vector<bool> keep(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) keep[i] = retention_uniform(seed, cloud.id(i)) < ratio;
  return cloud.subset(keep, intensity);
}

CoupledPair thin_pair(const Window& window, double lambda_low, double lambda_high, std::uint64_t seed) {
  if (!(lambda_low >= 0.0) || !(lambda_high >= lambda_low) || !std::isfinite(lambda_high)) {
    throw ConfigError("thinning needs 0 <= lambda_low <= lambda_high");
  }
  auto high = sample_ppp(window, lambda_high, stream_key(seed, Stream::cloud));
  const double ratio = lambda_high > 0.0 ? lambda_low / lambda_high : 1.0;
  const auto key = stream_key(seed, Stream::retention);
  std::vector<bool> keep(high.size());
  for (std::size_t i = 0; i < high.size(); ++i) keep[i] = retention_uniform(key, high.id(i)) < ratio;
  auto low = high.subset(keep, lambda_low);
  return {lambda_low, lambda_high, std::move(high), std::move(keep), std::move(low)};
}

std::pair<GeomGraph, GeomGraph> coupled_graphs(const CoupledPair& pair, const ModelSpec& model, std::uint64_t seed,
                                               const BuildOptions& build) {
  if (!model.is_pairwise()) {
    throw ContractError("coupled graphs need a Boolean or classical model; generalized models are not monotone");
  }
  return {build_graph(pair.low, model, seed, build), build_graph(pair.high, model, seed, build)};
}

bool is_induced_subgraph(const GeomGraph& low, const GeomGraph& high) {
  const auto& lc = low.cloud();
  const auto& hc = high.cloud();
  std::unordered_map<std::uint64_t, std::uint32_t> index_of; // id -> index in high
  for (std::size_t i = 0; i < hc.size(); ++i) index_of.emplace(hc.id(i), static_cast<std::uint32_t>(i));
  std::vector<std::int64_t> to_low(hc.size(), -1);
  for (std::size_t i = 0; i < lc.size(); ++i) {
    const auto it = index_of.find(lc.id(i));
    if (it == index_of.end()) return false;
    const auto j = it->second;
    if (!std::equal(lc.position(i).begin(), lc.position(i).end(), hc.position(j).begin()) || lc.mark(i) != hc.mark(j)) {
      return false;
    }
    to_low[j] = static_cast<std::int64_t>(i);
  }
  std::vector<Edge> induced;
  for (const auto& e : high.edges()) {
    const auto a = to_low[e.a];
    const auto b = to_low[e.b];
    if (a < 0 || b < 0) continue;
    induced.push_back({static_cast<std::uint32_t>(std::min(a, b)), static_cast<std::uint32_t>(std::max(a, b))});
  }
  std::sort(induced.begin(), induced.end());
  return std::equal(induced.begin(), induced.end(), low.edges().begin(), low.edges().end());
}

Lemma2Report check_lemma2(const ModelSpec& model, double lambda, double lambda_prime, double r, std::int64_t n,
                          std::uint64_t seed, const RunOptions& opt) {
  if (!(lambda > 0.0) || !(lambda_prime >= lambda)) throw ConfigError("check-lemma2 needs 0 < lambda <= lambda'");
  if (n < 1) throw ConfigError("number of trials must be >= 1");
  Lemma2Report rep;
  rep.lambda = lambda;
  rep.lambda_prime = lambda_prime;
  rep.r = r;
  const auto event = EventSpec::long_edge(r, 1.0);
  const Window window = event_window(model.dim(), event, opt.window_margin);

  struct Outcome {
    char low = 0, high = 0, subgraph_ok = 1;
  };
  const auto res = run_replicates<Outcome>(static_cast<std::size_t>(n), opt.threads, [&](std::size_t i) {
    const auto key = replicate_key(seed, i);
    const auto pair = thin_pair(window, lambda, lambda_prime, key);
    const auto [low, high] = coupled_graphs(pair, model, stream_key(key, Stream::edges), opt.build);
    return Outcome{static_cast<char>(evaluate_event(low, event)), static_cast<char>(evaluate_event(high, event)),
                   static_cast<char>(is_induced_subgraph(low, high))};
  });
  std::int64_t lo = 0, hi = 0;
  for (const auto& o : res) {
    lo += o.low;
    hi += o.high;
    rep.upper_violations += o.low && !o.high;
    rep.subgraph_failures += !o.subgraph_ok;
  }
  rep.low = wilson_estimate(lo, n, opt.level);
  rep.high = wilson_estimate(hi, n, opt.level);
  const double ratio2 = (lambda / lambda_prime) * (lambda / lambda_prime);
  rep.lower_ok = ratio2 * rep.high.lo <= rep.low.hi;
  rep.upper_ok = rep.low.lo <= rep.high.hi && rep.upper_violations == 0;
  rep.not_violated = rep.lower_ok && rep.upper_ok && rep.subgraph_failures == 0;
  return rep;
}

} // namespace perco
