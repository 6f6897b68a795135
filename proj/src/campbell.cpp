#include "campbell.hpp"

#include "errors.hpp"
#include "quadrature.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace perco {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void check_inputs(const ModelSpec& model, double lambda) {
  if (!model.is_pairwise()) throw ContractError("Campbell integrals need a Boolean or classical model");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("intensity must be >= 0");
}

// integral over |x| < a of the fraction of S(x, rho) inside B(0, R)
double inside_mass(int d, double a, double rho, double big_r, double rel_tol) {
  const double sigma = unit_sphere_area(d);
  if (rho + a <= big_r) return unit_ball_volume(d) * std::pow(a, d);
  if (rho >= big_r + a) return 0.0;
  auto f = [&](double s) { return sigma * std::pow(s, d - 1) * sphere_fraction_inside(d, s, rho, big_r); };
  const double bp[] = {std::abs(big_r - rho)};
  return integrate(f, 0.0, a, {.rel_tol = rel_tol, .abs_tol = 1e-300, .initial_panels = 2}, bp).value;
}

// lambda^2 sigma_d * integral over [lo, hi] of phi_bar(rho) rho^{d-1} weight(rho)
template <class Weight>
double radial_pairs(const ModelSpec& model, double lambda, double lo, double hi, double rel_tol,
                    std::vector<double> bps, const Weight& weight) {
  if (!(hi > lo) || lambda == 0.0) return 0.0;
  const int d = model.dim();
  const double sigma = unit_sphere_area(d);
  for (double b : model.distance_breakpoints()) bps.push_back(b);
  auto f = [&](double rho) {
    const double w = weight(rho);
    if (w == 0.0) return 0.0;
    return sigma * phi_bar(model, rho, rel_tol * 0.01) * std::pow(rho, d - 1) * w;
  };
  const QuadOptions opt{.rel_tol = rel_tol, .abs_tol = 1e-300, .max_panels = 4000, .initial_panels = 8};
  return lambda * lambda * integrate(f, lo, hi, opt, bps).value;
}

CampbellValue tail_value(const ModelSpec& model, double from, double factor, double rel_tol) {
  CampbellValue out;
  if (factor == 0.0) return out;
  const auto tail = radial_tail_integral(model, from, rel_tol);
  out.verdict = tail.verdict;
  out.diagnostics = tail.diagnostics;
  out.value = tail.verdict == IntegralVerdict::divergent ? inf : factor * tail.value;
  return out;
}

} // namespace

double sphere_fraction_inside(int dim, double s, double rho, double big_r) {
  if (rho + s <= big_r) return 1.0;
  if (rho >= big_r + s || s >= big_r + rho) return 0.0;
  if (dim == 1) return 0.5; // one of the two points x +- rho is inside
  const double h = (big_r * big_r - s * s - rho * rho) / (2.0 * s * rho);
  if (h >= 1.0) return 1.0;
  if (h <= -1.0) return 0.0;
  const double a = 0.5 * (dim - 1);
  return boost::math::ibeta(a, a, 0.5 * (1.0 + h));
}

double ball_covariogram(int dim, double radius, double rho) {
  if (rho >= 2.0 * radius) return 0.0;
  const double x = 1.0 - rho * rho / (4.0 * radius * radius);
  return unit_ball_volume(dim) * std::pow(radius, dim) * boost::math::ibeta(0.5 * (dim + 1), 0.5, x);
}

double box_covariogram(const Window& box, double rho) {
  const int d = box.dim();
  std::vector<double> len(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) len[k] = box.upper()[k] - box.lower()[k];
  auto overlap = [](double l, double t) { return std::max(0.0, l - t); };
  const QuadOptions opt{.rel_tol = 1e-10, .abs_tol = 1e-300, .initial_panels = 4};
  switch (d) {
  case 1: return overlap(len[0], rho);
  case 2: {
    auto f = [&](double th) { return overlap(len[0], rho * std::cos(th)) * overlap(len[1], rho * std::sin(th)); };
    std::vector<double> bps;
    if (rho > len[0]) bps.push_back(std::acos(len[0] / rho));
    if (rho > len[1]) bps.push_back(std::asin(len[1] / rho));
    return integrate(f, 0.0, 0.5 * std::numbers::pi, opt, bps).value / (0.5 * std::numbers::pi);
  }
  case 3: {
    // octant of the sphere, area pi/2; theta from the third axis
    auto over_theta = [&](double ph) {
      auto f = [&](double th) {
        const double st = std::sin(th);
        return overlap(len[0], rho * st * std::cos(ph)) * overlap(len[1], rho * st * std::sin(ph)) *
               overlap(len[2], rho * std::cos(th)) * st;
      };
      return integrate(f, 0.0, 0.5 * std::numbers::pi, opt).value;
    };
    return integrate(over_theta, 0.0, 0.5 * std::numbers::pi, opt).value / (0.5 * std::numbers::pi);
  }
  default: throw ContractError("box covariogram is implemented for dimension <= 3");
  }
}

CampbellValue campbell_long_edges(const ModelSpec& model, double lambda, double r, double c, double rel_tol) {
  check_inputs(model, lambda);
  const double vol = unit_ball_volume(model.dim()) * std::pow(r, model.dim());
  return tail_value(model, c * r, lambda * lambda * vol, rel_tol);
}

CampbellValue campbell_long_edges_window(const ModelSpec& model, double lambda, double r, double c,
                                         double window_radius, double rel_tol) {
  check_inputs(model, lambda);
  const int d = model.dim();
  CampbellValue out;
  out.value = radial_pairs(model, lambda, c * r, window_radius + r, rel_tol, {std::max(0.0, window_radius - r)},
                           [&](double rho) { return inside_mass(d, r, rho, window_radius, rel_tol * 0.01); });
  return out;
}

CampbellValue campbell_escaping_pairs(const ModelSpec& model, double lambda, double a, double window_radius,
                                      double length, double rel_tol) {
  check_inputs(model, lambda);
  const int d = model.dim();
  const double vol = unit_ball_volume(d) * std::pow(a, d);
  const double far = window_radius + a;
  auto out = tail_value(model, std::max(far, length), lambda * lambda * vol, rel_tol);
  if (out.verdict == IntegralVerdict::divergent) return out;
  const double lo = std::max(length, std::max(0.0, window_radius - a));
  out.value += radial_pairs(model, lambda, lo, far, rel_tol, {},
                            [&](double rho) { return vol - inside_mass(d, a, rho, window_radius, rel_tol * 0.01); });
  return out;
}

CampbellValue campbell_edge_count(const ModelSpec& model, double lambda, const Window& window, double rel_tol) {
  check_inputs(model, lambda);
  CampbellValue out;
  double diam = 0.0;
  if (window.kind() == WindowKind::ball) {
    diam = 2.0 * window.radius();
  } else {
    for (int k = 0; k < window.dim(); ++k) diam += std::pow(window.upper()[k] - window.lower()[k], 2);
    diam = std::sqrt(diam);
    if (window.dim() > 3) throw ContractError("edge-count oracle for box windows needs dimension <= 3");
  }
  std::vector<double> bps;
  if (window.kind() == WindowKind::box) {
    for (int k = 0; k < window.dim(); ++k) bps.push_back(window.upper()[k] - window.lower()[k]);
  }
  out.value = 0.5 * radial_pairs(model, lambda, 0.0, diam, rel_tol, bps, [&](double rho) {
    return window.kind() == WindowKind::ball ? ball_covariogram(window.dim(), window.radius(), rho)
                                             : box_covariogram(window, rho);
  });
  return out;
}

} // namespace perco
