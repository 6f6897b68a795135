#pragma once

#include "campbell.hpp"
#include "events.hpp"
#include "graph.hpp"
#include "model.hpp"
#include "stats.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace perco {

struct RunOptions {
  int threads = 1;
  double window_margin = default_window_margin;
  double level = 0.95;
  BuildOptions build;
};

// One replicate: a PPP on `window` and its graph, both drawn from streams of
// `replicate` (see replicate_key).
GeomGraph sample_graph(const ModelSpec& model, double lambda, const Window& window, std::uint64_t replicate,
                       const BuildOptions& build = {});

struct EventEstimate {
  EventSpec event;
  Estimate estimate;
  double window_radius = 0.0;
  // Expected number of edges from the region the event looks at to the
  // outside of the window (Campbell). Missing for generalized models.
  std::optional<CampbellValue> truncation;
};

// Campbell bound on the probability that truncating R^d to `window_radius`
// changes the event. Zero for G, which never looks outside B(x, 3r).
std::optional<CampbellValue> truncation_bound(const ModelSpec& model, double lambda, const EventSpec& event,
                                              double window_radius);

EventEstimate estimate_event(const ModelSpec& model, double lambda, const EventSpec& event, std::int64_t n,
                             std::uint64_t seed, const RunOptions& opt = {});

enum class TrendVerdict { vanishing, persistent, inconclusive };

const char* trend_verdict_name(TrendVerdict v) noexcept;

struct TrendPoint {
  double r = 0.0;
  Estimate estimate;
  std::optional<CampbellValue> campbell;   // infinite-volume mean number of long edges
  std::optional<CampbellValue> truncation; // as in EventEstimate
};

struct ProbeOptions {
  double p_min = 0.05;           // persistence floor for the last third of the grid
  double decrease_factor = 4.0;  // required drop from first to last estimate for "vanishing"
};

// Finite-scale proxy for H(lambda, c): estimates of P(L(r,c)) on a geometric
// r-grid, the log-log slope over nonzero estimates and a verdict.
struct TrendReport {
  double lambda = 0.0;
  double c = 1.0;
  std::vector<TrendPoint> points;
  bool slope_defined = false; // needs >= 3 nonzero estimates
  double slope = 0.0;
  double slope_lo = 0.0;
  double slope_hi = 0.0;
  TrendVerdict verdict = TrendVerdict::inconclusive;
  bool all_zero = false;
  // all hits zero while the Campbell means are below 0.1 / n
  bool small_mean_caveat = false;
  ProbeOptions options;
  std::string note;
};

// k points from r_min to r_max, equal ratios.
std::vector<double> geometric_grid(double r_min, double r_max, int k);

TrendReport probe_H(const ModelSpec& model, double lambda, double c, double r_min, double r_max, int k,
                    std::int64_t n, std::uint64_t seed, const RunOptions& opt = {}, const ProbeOptions& popt = {});

// Explicit covering of B(0, q) by closed unit balls: the centres of a cubic
// grid of m = ceil(q sqrt(d)) cells per axis, keeping the cells that meet
// B(0, q). Each cell has circumradius <= 1.
struct Covering {
  int dim = 1;
  double q = 1.0;
  std::vector<std::vector<double>> centers;
  std::size_t count() const noexcept { return centers.size(); }
};

Covering covering_number(double q, int dim);

// Fraction-free check: `samples` uniform points of B(0, q), each within
// distance 1 of some centre. Returns the number of uncovered samples.
std::int64_t uncovered_samples(const Covering& cover, std::int64_t samples, std::uint64_t seed);

struct Lemma1Report {
  double r = 0.0, c = 1.0, c_prime = 1.0;
  std::size_t covering = 1;
  Estimate lhs; // L(r, c')
  Estimate rhs; // L(c' r / c, c): endpoint in B(0, c' r / c), length > c' r
  std::int64_t exact_violations = 0; // rhs held but no translated lhs did
  double window_radius = 0.0;
  bool not_violated = false;
};

Lemma1Report check_lemma1(const ModelSpec& model, double lambda, double r, double c, double c_prime, std::int64_t n,
                          std::uint64_t seed, const RunOptions& opt = {});

struct MixingEstimate {
  std::int64_t trials = 0;
  double p_a = 0.0; // P(G(r))
  double p_b = 0.0; // P(G(r, x))
  double cov = 0.0;
  double se = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;
  double separation = 0.0; // |x| / r
  bool contains_zero() const noexcept { return lo <= 0.0 && 0.0 <= hi; }
};

// Sample covariance of 1{G(r)} and 1{G(r, x)} on shared graphs, with a
// normal-approximation interval. Needs |x| > 6r and n >= 1000.
MixingEstimate estimate_mixing_cov(const ModelSpec& model, double lambda, double r, const std::vector<double>& x,
                                   std::int64_t n, std::uint64_t seed, const RunOptions& opt = {});

} // namespace perco
