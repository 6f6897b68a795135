#pragma once

#include <functional>
#include <span>

namespace perco {

struct QuadOptions {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  int max_panels = 4000;
  int initial_panels = 4; // per breakpoint segment
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
  bool converged = true;

  QuadResult& operator+=(const QuadResult& o) noexcept {
    value += o.value;
    error += o.error;
    panels += o.panels;
    converged = converged && o.converged;
    return *this;
  }
};

// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b]. Panels are
// split worst-error first until error <= max(abs_tol, rel_tol * |value|).
// `breakpoints` inside (a, b) become panel boundaries.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt = {},
                     std::span<const double> breakpoints = {});

} // namespace perco
