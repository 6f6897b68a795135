#include "graph.hpp"

#include "errors.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>

namespace perco {

CellGrid::CellGrid(const PointCloud& cloud, double cell_side) : dim_(cloud.dim()) {
  const auto lo = cloud.window().lower();
  const auto hi = cloud.window().upper();
  const auto d = static_cast<std::size_t>(dim_);
  lower_.assign(lo.begin(), lo.end());
  // keep the cell count within a small multiple of the point count
  const double cap = 4.0 * static_cast<double>(cloud.size()) + 64.0;
  side_ = std::max(cell_side, 1e-3);
  for (;;) {
    double cells = 1.0;
    for (std::size_t k = 0; k < d; ++k) cells *= std::max(1.0, std::ceil((hi[k] - lo[k]) / side_));
    if (cells <= cap) break;
    side_ *= 1.5;
  }
  extent_.resize(d);
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) {
    extent_[k] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil((hi[k] - lo[k]) / side_)));
    total *= static_cast<std::size_t>(extent_[k]);
  }

  std::vector<std::size_t> cell(cloud.size());
  starts_.assign(total + 1, 0);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    cell[i] = cell_of(cloud.position(i));
    ++starts_[cell[i] + 1];
  }
  std::partial_sum(starts_.begin(), starts_.end(), starts_.begin());
  order_.resize(cloud.size());
  std::vector<std::uint32_t> fill(starts_.begin(), starts_.end() - 1);
  for (std::size_t i = 0; i < cloud.size(); ++i) order_[fill[cell[i]]++] = static_cast<std::uint32_t>(i);
}

std::size_t CellGrid::cell_of(std::span<const double> p) const noexcept {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < extent_.size(); ++k) {
    auto c = static_cast<std::int64_t>(std::floor((p[k] - lower_[k]) / side_));
    c = std::clamp<std::int64_t>(c, 0, extent_[k] - 1);
    idx = idx * static_cast<std::size_t>(extent_[k]) + static_cast<std::size_t>(c);
  }
  return idx;
}

Region Region::ball(std::vector<double> center, double radius) {
  return {Kind::ball, std::move(center), radius};
}

Region Region::outside(std::vector<double> center, double radius) {
  return {Kind::outside_ball, std::move(center), radius};
}

Region Region::everything() {
  return {};
}

bool Region::contains(std::span<const double> p) const noexcept {
  if (kind == Kind::everything) return true;
  const double dist = center.empty() ? norm(p) : distance(p, center);
  return kind == Kind::ball ? dist < radius : dist >= radius;
}

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;
  std::vector<std::uint32_t> size;

  explicit UnionFind(std::size_t n) : parent(n), size(n, 1) { std::iota(parent.begin(), parent.end(), 0u); }

  std::uint32_t find(std::uint32_t x) {
    std::uint32_t root = x;
    while (parent[root] != root) root = parent[root];
    while (parent[x] != root) {
      const std::uint32_t next = parent[x];
      parent[x] = root;
      x = next;
    }
    return root;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
};

} // namespace

GeomGraph::GeomGraph(PointCloud cloud, std::vector<Edge> edges) : cloud_(std::move(cloud)), edges_(std::move(edges)) {
  const std::size_t n = cloud_.size();
  std::sort(edges_.begin(), edges_.end());
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const auto& e = edges_[k];
    if (!(e.a < e.b) || e.b >= n) throw ConsistencyError("edge list has a self-loop or an invalid index");
    if (k > 0 && edges_[k - 1] == e) throw ConsistencyError("edge list has a duplicate edge");
  }

  offsets_.assign(n + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.a + 1];
    ++offsets_[e.b + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adjacency_.resize(2 * edges_.size());
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    adjacency_[fill[e.a]++] = e.b;
    adjacency_[fill[e.b]++] = e.a;
  }

  UnionFind uf(n);
  for (const auto& e : edges_) uf.unite(e.a, e.b);
  component_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    component_[i] = uf.find(static_cast<std::uint32_t>(i));
    if (component_[i] == i) ++components_;
  }
}

GeomGraph build_graph(const PointCloud& cloud, const ModelSpec& model, std::uint64_t seed, const BuildOptions& opt) {
  if (cloud.dim() != model.dim()) throw ConfigError("cloud and model differ in dimension");
  const std::size_t n = cloud.size();
  if (n > 0xFFFFFFF0u) throw ResourceError("too many points for one graph");
  const auto d = static_cast<std::size_t>(cloud.dim());
  std::vector<Edge> edges;
  if (n < 2) return GeomGraph(cloud, std::move(edges));

  const auto* gen = model.as_generalized();
  std::optional<CellGrid> context_grid;
  if (gen && gen->damping_factor < 1.0) context_grid.emplace(cloud, gen->damping_radius);

  auto consider = [&](std::uint32_t i, std::uint32_t j) {
    const double p = model.phi(cloud.mark(i), cloud.mark(j), distance(cloud.position(i), cloud.position(j)));
    if (!(p > 0.0)) return;
    const double u = pair_uniform(seed, cloud.id(i), cloud.id(j));
    if (u >= p) return;
    if (context_grid) {
      // the damping can only lower p, so it is evaluated only when U < base
      double mid[max_dimension];
      const auto a = cloud.position(i);
      const auto b = cloud.position(j);
      for (std::size_t k = 0; k < d; ++k) mid[k] = 0.5 * (a[k] + b[k]);
      const std::span<const double> m(mid, d);
      int near = 0;
      context_grid->for_each_near(m, gen->damping_radius, [&](std::uint32_t z) {
        if (z != i && z != j && distance(cloud.position(z), m) <= gen->damping_radius) ++near;
      });
      if (u >= p * std::pow(gen->damping_factor, near)) return;
    }
    edges.push_back({std::min(i, j), std::max(i, j)});
  };

  const double all_pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  std::vector<double> key(n);
  for (std::size_t i = 0; i < n; ++i) key[i] = model.mark_key(cloud.mark(i));
  std::vector<std::uint32_t> by_key(n);
  std::iota(by_key.begin(), by_key.end(), 0u);
  std::sort(by_key.begin(), by_key.end(), [&](auto a, auto b) { return key[a] > key[b] || (key[a] == key[b] && a < b); });

  // The B points with the largest keys are paired with everything; the rest
  // only with grid neighbours within reach(k, k) of the largest remaining key.
  const double density = static_cast<double>(n) / cloud.window().volume();
  auto cutoff_for = [&](std::size_t big) { return big >= n ? 0.0 : model.reach(key[by_key[big]], key[by_key[big]]); };
  auto cost_for = [&](std::size_t big) {
    const double cut = cutoff_for(big);
    if (!std::isfinite(cut)) return std::numeric_limits<double>::infinity();
    const double small = static_cast<double>(n - big);
    const double per_point = std::min(static_cast<double>(n), density * std::pow(3.0 * std::max(cut, 1e-3), d));
    return static_cast<double>(big) * static_cast<double>(n) + small * per_point;
  };
  std::size_t big = 0;
  double best = cost_for(0);
  for (std::size_t b = 1; b <= n; b *= 2) {
    const std::size_t cand = std::min(b, n);
    const double c = cost_for(cand);
    if (c < best) best = c, big = cand;
  }

  if (!std::isfinite(best) || best >= all_pairs) {
    // unbounded reach: every pair is examined
    if (n > opt.exact_limit) {
      throw ResourceError("profile has unbounded range and the cloud has " + std::to_string(n) +
                          " points (limit " + std::to_string(opt.exact_limit) +
                          " for pair-by-pair enumeration); shrink the window or the intensity");
    }
    if (all_pairs > opt.pair_budget) throw ResourceError("pair count exceeds the pair budget");
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j) consider(i, j);
    return GeomGraph(cloud, std::move(edges));
  }
  if (best > opt.pair_budget) {
    throw ResourceError("estimated candidate pairs " + std::to_string(best) + " exceed the pair budget " +
                        std::to_string(opt.pair_budget) + "; shrink the window or the intensity");
  }

  std::vector<bool> is_big(n, false);
  for (std::size_t k = 0; k < big; ++k) is_big[by_key[k]] = true;
  for (std::size_t k = 0; k < big; ++k) {
    const std::uint32_t i = by_key[k];
    for (std::uint32_t j = 0; j < n; ++j) {
      if (j == i || (is_big[j] && j < i)) continue;
      consider(i, j);
    }
  }
  const double cut = cutoff_for(big);
  if (big < n && cut > 0.0) {
    const double side = std::max(cut, 1e-3);
    const CellGrid grid(cloud, side);
    for (std::uint32_t i = 0; i < n; ++i) {
      if (is_big[i]) continue;
      const auto p = cloud.position(i);
      grid.for_each_near(p, cut, [&](std::uint32_t j) {
        if (j > i && !is_big[j] && distance(p, cloud.position(j)) <= cut) consider(i, j);
      });
    }
  }
  return GeomGraph(cloud, std::move(edges));
}

bool connected_regions(const GeomGraph& graph, const Region& a, const Region& b) {
  const std::size_t n = graph.size();
  std::vector<std::uint8_t> seen(n, 0); // bit 0: has a vertex in A, bit 1: in B
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = graph.cloud().position(i);
    std::uint8_t flags = 0;
    if (a.contains(p)) flags |= 1;
    if (b.contains(p)) flags |= 2;
    if (!flags) continue;
    auto& f = seen[graph.component(i)];
    f |= flags;
    if (f == 3) return true;
  }
  return false;
}

bool connected_regions_restricted(const GeomGraph& graph, const Region& a, const Region& b, const Region& s) {
  const std::size_t n = graph.size();
  std::vector<std::uint8_t> visited(n, 0);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto p = graph.cloud().position(i);
    if (s.contains(p) && a.contains(p)) {
      visited[i] = 1;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const std::uint32_t v = queue.front();
    queue.pop_front();
    if (b.contains(graph.cloud().position(v))) return true;
    for (std::uint32_t w : graph.neighbors(v)) {
      if (visited[w] || !s.contains(graph.cloud().position(w))) continue;
      visited[w] = 1;
      queue.push_back(w);
    }
  }
  return false;
}

std::vector<std::uint32_t> bfs_components(const GeomGraph& graph) {
  const std::size_t n = graph.size();
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> label(n, unset);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (label[root] != unset) continue;
    label[root] = root;
    queue.push_back(root);
    while (!queue.empty()) {
      const std::uint32_t v = queue.front();
      queue.pop_front();
      for (std::uint32_t w : graph.neighbors(v)) {
        if (label[w] != unset) continue;
        label[w] = root;
        queue.push_back(w);
      }
    }
  }
  return label;
}

void write_graph_dump(std::ostream& os, const GeomGraph& graph) {
  const auto& cloud = graph.cloud();
  char buf[64];
  os << "# perco graph dump: dim " << cloud.dim() << ", points " << cloud.size() << ", edges "
     << graph.edges().size() << "\n";
  os << "# points: i x_1 ... x_d u\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    os << i;
    for (double x : cloud.position(i)) {
      std::snprintf(buf, sizeof buf, " %.9g", x);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, " %.9g", cloud.mark(i));
    os << buf << "\n";
  }
  os << "# edges: i j\n";
  for (const auto& e : graph.edges()) os << e.a << ' ' << e.b << "\n";
}

} // namespace perco
