#include "errors.hpp"
#include "events.hpp"
#include "rng.hpp"

#include <doctest.h>

using namespace perco;

namespace {

GeomGraph graph_of(int dim, const std::vector<std::vector<double>>& pts, std::vector<Edge> edges,
                   double window_radius = 100.0) {
  std::vector<double> coords, marks;
  std::vector<std::uint64_t> ids;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    coords.insert(coords.end(), pts[i].begin(), pts[i].end());
    marks.push_back(0.5);
    ids.push_back(i);
  }
  return GeomGraph(PointCloud(Window::centered_ball(dim, window_radius), 1.0, 0, coords, marks, ids),
                   std::move(edges));
}

GeomGraph random_graph(const ModelSpec& m, double lambda, double radius, std::uint64_t key) {
  const auto cloud = sample_ppp(Window::centered_ball(m.dim(), radius), lambda, stream_key(key, Stream::cloud));
  return build_graph(cloud, m, stream_key(key, Stream::edges));
}

} // namespace

TEST_CASE("event windows") {
  CHECK(event_window(2, EventSpec::long_edge(2.0, 3.0)).radius() == doctest::Approx(2.0 * 4.05));
  CHECK(event_window(2, EventSpec::crossing(2.0)).radius() == doctest::Approx(4.1));
  CHECK(event_window(2, EventSpec::local_crossing(2.0)).radius() == doctest::Approx(6.1));
  CHECK(event_window(2, EventSpec::far_edge(2.0)).radius() == doctest::Approx(42.1));
  const auto w = event_window(2, EventSpec::local_crossing(1.0, {10.0, 0.0}), 0.1);
  CHECK(w.center()[0] == 10.0);
  CHECK(w.radius() == doctest::Approx(3.1));
  CHECK(EventSpec::long_edge(2, 1.5).label() == "L(2;1.5)");
}

TEST_CASE("empty graph: no event") {
  const auto g = graph_of(2, {}, {});
  CHECK_FALSE(long_edge_event(g, 1.0, 1.0));
  CHECK_FALSE(crossing_event(g, 1.0));
  CHECK_FALSE(local_crossing_event(g, 1.0));
  CHECK_FALSE(f_event(g, 1.0));
}

TEST_CASE("long edge from the origin") {
  const double r = 2.0, c = 1.5;
  const auto g = graph_of(2, {{0, 0}, {1.1 * c * r, 0}}, {{0, 1}});
  CHECK(long_edge_event(g, r, c));
  CHECK_FALSE(long_edge_event(g, r, 1.2 * c));
  CHECK(count_long_edges(g, r, c) == 1);
}

TEST_CASE("endpoint must be in the open ball B(0,r)") {
  const auto g = graph_of(1, {{1.0}, {5.0}}, {{0, 1}});
  CHECK_FALSE(long_edge_event(g, 1.0, 1.0));
  CHECK(long_edge_event(g, 1.0 + 1e-9, 1.0));
}

TEST_CASE("crossing") {
  CHECK(crossing_event(graph_of(2, {{0.5, 0}, {2.5, 0}}, {{0, 1}}), 1.0));
  // points only inside the annulus
  CHECK_FALSE(crossing_event(graph_of(2, {{1.2, 0}, {1.8, 0}, {0, 1.5}}, {{0, 1}, {1, 2}}), 1.0));
}

TEST_CASE("local crossing ignores paths that leave B(x,3r)") {
  // inner -> far outside 3r -> beyond 2r; C holds, G does not
  const auto g = graph_of(2, {{0.5, 0}, {4, 0}, {2.5, 0}}, {{0, 1}, {1, 2}});
  CHECK(crossing_event(g, 1.0));
  CHECK_FALSE(local_crossing_event(g, 1.0));
  const auto direct = graph_of(2, {{0.5, 0}, {2.5, 0}}, {{0, 1}});
  CHECK(local_crossing_event(direct, 1.0));
  CHECK(local_crossing_event(direct, 1.0, std::vector<double>{0.0, 0.0}));
}

TEST_CASE("local crossing around a shifted center") {
  const auto g = graph_of(2, {{10.5, 0}, {12.5, 0}}, {{0, 1}});
  CHECK(local_crossing_event(g, 1.0, std::vector<double>{10.0, 0.0}));
  CHECK_FALSE(local_crossing_event(g, 1.0));
}

TEST_CASE("far edges") {
  const double r = 1.0;
  CHECK(f_event(graph_of(2, {{19 * r, 0}, {20.5 * r, 0}}, {{0, 1}}), r));
  CHECK_FALSE(f_event(graph_of(2, {{19 * r, 0}, {19.9 * r, 0}}, {{0, 1}}), r));
}

TEST_CASE("small windows are refused") {
  const auto g = graph_of(2, {{0, 0}}, {}, 3.0);
  CHECK_THROWS_AS(long_edge_event(g, 1.0, 3.0), WindowCoverageError);
  CHECK_THROWS_AS(f_event(g, 1.0), WindowCoverageError);
  CHECK_NOTHROW(crossing_event(g, 1.0));
  CHECK_NOTHROW(local_crossing_event(g, 1.0));
}

TEST_CASE("bounded radii: no long edges beyond 2 R_max") {
  const auto m = ModelSpec::boolean(2, RadiusLaw::uniform(0.1, 0.5));
  for (std::uint64_t k = 0; k < 200; ++k) {
    const auto g = random_graph(m, 2.0, 2.1 * 1.1, replicate_key(1, k));
    CHECK_FALSE(long_edge_event(g, 1.1, 1.0));
  }
}

TEST_CASE("event inclusions on sampled graphs") {
  const std::vector<ModelSpec> models = {
      ModelSpec::boolean(2, RadiusLaw::pareto(1.8, 0.15)),
      ModelSpec::classical(2, KernelKind::product, Profile::polynomial(1.5), 2.5, 1.0),
      ModelSpec::generalized(2, {KernelKind::plain, Profile::polynomial(1.8), 2.0, 1.0}, 1.0, 0.5),
  };
  const double r = 0.5;
  for (const auto& m : models) {
    CAPTURE(m.describe());
    int l3 = 0, g_hits = 0;
    for (std::uint64_t k = 0; k < 300; ++k) {
      const auto g = random_graph(m, 1.0, (21 + 0.05) * r, replicate_key(2, k));
      const bool c = crossing_event(g, r);
      const bool gg = local_crossing_event(g, r);
      const bool l = long_edge_event(g, r, 3.0);
      l3 += l;
      g_hits += gg;
      CHECK((!l || c));
      CHECK((!gg || c));
      CHECK(f_event(g, r) == long_edge_event(g, 20 * r, 1.0 / 20));
      bool prev = true;
      for (double cc : {0.5, 1.0, 2.0, 3.0, 5.0}) {
        const bool now = long_edge_event(g, r, cc);
        CHECK((prev || !now));
        prev = now;
      }
    }
    CHECK(l3 > 0);
    CHECK(g_hits > 0);
  }
}
