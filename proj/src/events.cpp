#include "events.hpp"

#include "errors.hpp"

#include <cstdio>

namespace perco {

namespace {

std::vector<double> origin_or(std::span<const double> center, int dim) {
  if (center.empty()) return std::vector<double>(static_cast<std::size_t>(dim), 0.0);
  return {center.begin(), center.end()};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void check_scale(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("event scale r must be positive");
}

} // namespace

const char* event_kind_name(EventKind kind) noexcept {
  switch (kind) {
  case EventKind::long_edge: return "L";
  case EventKind::crossing: return "C";
  case EventKind::local_crossing: return "G";
  case EventKind::far_edge: return "F";
  }
  return "?";
}

EventSpec EventSpec::long_edge(double r, double c) {
  check_scale(r);
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("long-edge ratio c must be positive");
  return {EventKind::long_edge, r, c, {}};
}

EventSpec EventSpec::crossing(double r) {
  check_scale(r);
  return {EventKind::crossing, r, 1.0, {}};
}

EventSpec EventSpec::local_crossing(double r, std::vector<double> center) {
  check_scale(r);
  return {EventKind::local_crossing, r, 1.0, std::move(center)};
}

EventSpec EventSpec::far_edge(double r) {
  check_scale(r);
  return {EventKind::far_edge, r, 1.0, {}};
}

double EventSpec::extent() const noexcept {
  switch (kind) {
  case EventKind::long_edge: return 1.0 + c;
  case EventKind::crossing: return 2.0;
  case EventKind::local_crossing: return 3.0;
  case EventKind::far_edge: return 21.0;
  }
  return 0.0;
}

// Labels go into CSV cells, so arguments are separated by semicolons.
std::string EventSpec::label() const {
  switch (kind) {
  case EventKind::long_edge: return "L(" + fmt(r) + ";" + fmt(c) + ")";
  case EventKind::crossing: return "C(" + fmt(r) + ")";
  case EventKind::local_crossing: {
    if (center.empty()) return "G(" + fmt(r) + ")";
    std::string s = "G(" + fmt(r) + ";[";
    for (std::size_t k = 0; k < center.size(); ++k) s += (k ? " " : "") + fmt(center[k]);
    return s + "])";
  }
  case EventKind::far_edge: return "F(" + fmt(r) + ")";
  }
  return "?";
}

Window event_window(int dim, const EventSpec& event, double eps) {
  if (!(eps >= 0.0)) throw ConfigError("window margin must be >= 0");
  return Window::ball(origin_or(event.center, dim), (event.extent() + eps) * event.r);
}

void require_coverage(const GeomGraph& graph, std::span<const double> center, double radius, const char* what) {
  const auto& w = graph.cloud().window();
  const auto c = origin_or(center, w.dim());
  if (!w.contains_ball(c, radius)) {
    throw WindowCoverageError(std::string(what) + " needs the window to contain a ball of radius " + fmt(radius) +
                              "; enlarge the window");
  }
}

bool has_long_edge(const GeomGraph& graph, std::span<const double> center, double radius, double length) {
  const auto& cloud = graph.cloud();
  const Region ball = Region::ball({center.begin(), center.end()}, radius);
  for (const auto& e : graph.edges()) {
    const auto a = cloud.position(e.a);
    const auto b = cloud.position(e.b);
    if ((ball.contains(a) || ball.contains(b)) && distance(a, b) > length) return true;
  }
  return false;
}

bool long_edge_event(const GeomGraph& graph, double r, double c) {
  require_coverage(graph, {}, (1.0 + c) * r, "L(r,c)");
  return has_long_edge(graph, {}, r, c * r);
}

bool crossing_event(const GeomGraph& graph, double r) {
  require_coverage(graph, {}, 2.0 * r, "C(r)");
  return connected_regions(graph, Region::ball({}, r), Region::outside({}, 2.0 * r));
}

bool local_crossing_event(const GeomGraph& graph, double r, std::span<const double> center) {
  require_coverage(graph, center, 3.0 * r, "G(r,x)");
  const std::vector<double> x(center.begin(), center.end());
  return connected_regions_restricted(graph, Region::ball(x, r), Region::outside(x, 2.0 * r),
                                      Region::ball(x, 3.0 * r));
}

bool f_event(const GeomGraph& graph, double r) {
  require_coverage(graph, {}, 21.0 * r, "F(r)");
  return has_long_edge(graph, {}, 20.0 * r, r);
}

bool evaluate_event(const GeomGraph& graph, const EventSpec& event) {
  switch (event.kind) {
  case EventKind::long_edge: return long_edge_event(graph, event.r, event.c);
  case EventKind::crossing: return crossing_event(graph, event.r);
  case EventKind::local_crossing: return local_crossing_event(graph, event.r, event.center);
  case EventKind::far_edge: return f_event(graph, event.r);
  }
  return false;
}

std::size_t count_long_edges(const GeomGraph& graph, double r, double c) {
  const auto& cloud = graph.cloud();
  std::size_t n = 0;
  for (const auto& e : graph.edges()) {
    const auto a = cloud.position(e.a);
    const auto b = cloud.position(e.b);
    if (!(distance(a, b) > c * r)) continue;
    n += (norm(a) < r) + (norm(b) < r);
  }
  return n;
}

} // namespace perco
