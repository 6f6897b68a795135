#pragma once

#include "graph.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace perco {

// L(r,c): an edge of length > c r with an endpoint in B(0, r).
// C(r): B(0, r) <-> B(0, 2r)^c.
// G(r,x): B(x, r) <-> B(x, 2r)^c using only vertices in B(x, 3r).
// F(r): an edge of length > r with an endpoint in B(0, 20r).
enum class EventKind { long_edge, crossing, local_crossing, far_edge };

const char* event_kind_name(EventKind kind) noexcept;

struct EventSpec {
  EventKind kind = EventKind::long_edge;
  double r = 1.0;
  double c = 1.0;             // long_edge only
  std::vector<double> center; // local_crossing only; empty means the origin

  static EventSpec long_edge(double r, double c);
  static EventSpec crossing(double r);
  static EventSpec local_crossing(double r, std::vector<double> center = {});
  static EventSpec far_edge(double r);

  // Radius, in units of r, of the ball around the event center that the
  // window must contain.
  double extent() const noexcept;
  std::string label() const;
};

inline constexpr double default_window_margin = 0.05;

// B(center, (extent + eps) r): the simulation window for one event.
Window event_window(int dim, const EventSpec& event, double eps = default_window_margin);

// Throws WindowCoverageError unless the graph's window contains the closed
// ball B(center, radius).
void require_coverage(const GeomGraph& graph, std::span<const double> center, double radius, const char* what);

bool long_edge_event(const GeomGraph& graph, double r, double c);
bool crossing_event(const GeomGraph& graph, double r);
bool local_crossing_event(const GeomGraph& graph, double r, std::span<const double> center = {});
bool f_event(const GeomGraph& graph, double r);
bool evaluate_event(const GeomGraph& graph, const EventSpec& event);

// Existence of an edge longer than `length` with an endpoint in the open ball
// B(center, radius); no coverage check.
bool has_long_edge(const GeomGraph& graph, std::span<const double> center, double radius, double length);

// Number of (edge, endpoint) incidences with the endpoint in B(0, r) and the
// edge longer than c r. An edge with both ends in the ball counts twice; this
// is the quantity whose mean the Campbell formula gives.
std::size_t count_long_edges(const GeomGraph& graph, double r, double c);

} // namespace perco
