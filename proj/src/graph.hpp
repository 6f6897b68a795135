#pragma once

#include "model.hpp"
#include "ppp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace perco {

struct Edge {
  std::uint32_t a; // a < b, indices into the cloud
  std::uint32_t b;

  bool operator==(const Edge&) const = default;
  auto operator<=>(const Edge&) const = default;
};

// Uniform grid of cells over the bounding box of a window. Points are
// bucketed by cell so range queries only touch nearby cells.
class CellGrid {
public:
  CellGrid(const PointCloud& cloud, double cell_side);

  double cell_side() const noexcept { return side_; }
  std::size_t cell_count() const noexcept { return starts_.size() - 1; }

  // Calls fn(j) for every point j in a cell meeting the cube of half-width
  // `radius` around p. Callers filter by exact distance.
  template <class Fn>
  void for_each_near(std::span<const double> p, double radius, Fn&& fn) const {
    const std::size_t d = extent_.size();
    std::int64_t first[max_dimension], last[max_dimension], cur[max_dimension];
    for (std::size_t k = 0; k < d; ++k) {
      first[k] = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((p[k] - radius - lower_[k]) / side_)));
      last[k] = std::min<std::int64_t>(extent_[k] - 1,
                                       static_cast<std::int64_t>(std::floor((p[k] + radius - lower_[k]) / side_)));
      if (first[k] > last[k]) return;
      cur[k] = first[k];
    }
    for (;;) {
      std::size_t idx = 0;
      for (std::size_t k = 0; k < d; ++k) idx = idx * static_cast<std::size_t>(extent_[k]) + static_cast<std::size_t>(cur[k]);
      for (std::uint32_t s = starts_[idx]; s < starts_[idx + 1]; ++s) fn(order_[s]);
      std::size_t k = d;
      for (;;) {
        if (k == 0) return;
        --k;
        if (++cur[k] <= last[k]) break;
        cur[k] = first[k];
      }
    }
  }

private:
  std::size_t cell_of(std::span<const double> p) const noexcept;

  int dim_;
  double side_;
  std::vector<double> lower_;
  std::vector<std::int64_t> extent_; // cells per axis
  std::vector<std::uint32_t> order_; // point indices sorted by cell
  std::vector<std::uint32_t> starts_;
};

// Region of R^d used by connectivity queries.
struct Region {
  enum class Kind { ball, outside_ball, everything };

  Kind kind = Kind::everything;
  std::vector<double> center; // empty means the origin
  double radius = 0.0;

  // open ball |p - c| < r
  static Region ball(std::vector<double> center, double radius);
  // closed complement |p - c| >= r
  static Region outside(std::vector<double> center, double radius);
  static Region everything();

  bool contains(std::span<const double> p) const noexcept;
};

// Random connection graph on a cloud. Immutable after construction; the
// component labels are final (every vertex points at its root).
class GeomGraph {
public:
  GeomGraph(PointCloud cloud, std::vector<Edge> edges);

  const PointCloud& cloud() const noexcept { return cloud_; }
  std::size_t size() const noexcept { return cloud_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const std::uint32_t> neighbors(std::size_t i) const noexcept {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }
  std::uint32_t component(std::size_t i) const noexcept { return component_[i]; }
  std::size_t component_count() const noexcept { return components_; }

private:
  PointCloud cloud_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> adjacency_;
  std::vector<std::uint32_t> component_;
  std::size_t components_ = 0;
};

struct BuildOptions {
  // Largest number of candidate pairs a build may examine.
  double pair_budget = 4e9;
  // Largest cloud for which unbounded-range profiles are enumerated pair by pair.
  std::size_t exact_limit = 50000;
};

// Each unordered pair {i, j} carries U = pair_uniform(seed, id_i, id_j) and is
// an edge iff U < p(i, j, context). Throws ResourceError when the pair count
// exceeds the budget.
GeomGraph build_graph(const PointCloud& cloud, const ModelSpec& model, std::uint64_t seed,
                      const BuildOptions& opt = {});

// Some component has a vertex in A and a vertex in B.
bool connected_regions(const GeomGraph& graph, const Region& a, const Region& b);

// A path from A to B all of whose vertices lie in S (breadth-first search on
// the subgraph induced by S).
bool connected_regions_restricted(const GeomGraph& graph, const Region& a, const Region& b, const Region& s);

// Components by breadth-first search, labelled by their smallest vertex.
// Independent of the union-find labels; used to cross-check them.
std::vector<std::uint32_t> bfs_components(const GeomGraph& graph);

// Plain-text dump: a header, the point table "i x_1 ... x_d u" and the edge
// list "i j".
void write_graph_dump(std::ostream& os, const GeomGraph& graph);

} // namespace perco
