#include "quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace perco {

namespace {

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const noexcept { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  double err = 0.0;
  // max_depth 0: a single Kronrod panel with |K15 - G7| as error estimate
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
  return {a, b, v, err};
}

} // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt,
                     std::span<const double> breakpoints) {
  QuadResult out;
  if (!(b > a)) return out;

  std::vector<double> edges{a};
  for (double x : breakpoints)
    if (x > a && x < b) edges.push_back(x);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<Panel> heap;
  double value = 0.0;
  double error = 0.0;
  const int per = std::max(1, opt.initial_panels);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double h = (edges[k + 1] - edges[k]) / per;
    for (int j = 0; j < per; ++j) {
      const double lo = edges[k] + j * h;
      const double hi = j + 1 == per ? edges[k + 1] : lo + h;
      auto p = gk15(f, lo, hi);
      value += p.value;
      error += p.error;
      heap.push(p);
    }
  }

  int panels = static_cast<int>(heap.size());
  auto done = [&] { return error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value)); };
  while (!done() && panels < opt.max_panels) {
    const Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break; // interval exhausted at double resolution
    heap.pop();
    const Panel l = gk15(f, worst.a, mid);
    const Panel r = gk15(f, mid, worst.b);
    value += l.value + r.value - worst.value;
    error += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++panels;
  }

  // re-sum to drop accumulated cancellation in the running totals
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = value;
  out.error = error;
  out.panels = panels;
  out.converged = error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
  return out;
}

} // namespace perco
