#pragma once

#include "model.hpp"
#include "ppp.hpp"
#include "validate.hpp"

#include <string>

namespace perco {

// Expected pair counts of a PPP from the Campbell/Mecke formula. All of them
// integrate the mark-averaged connection function phi_bar, so they need a
// Boolean or classical model.
struct CampbellValue {
  double value = 0.0; // +inf when divergent
  IntegralVerdict verdict = IntegralVerdict::finite;
  std::string diagnostics;
};

// E[# (x, y) with x ~ y, |x| < r, |y - x| > c r] in R^d
//   = lambda^2 kappa_d r^d * integral over |z| > c r of phi_bar(|z|) dz.
CampbellValue campbell_long_edges(const ModelSpec& model, double lambda, double r, double c, double rel_tol = 1e-6);

// Same count with y restricted to the ball window B(0, window_radius).
CampbellValue campbell_long_edges_window(const ModelSpec& model, double lambda, double r, double c,
                                         double window_radius, double rel_tol = 1e-6);

// E[# (x, y) with x ~ y, |x| < a, |y| >= window_radius, |y - x| > length]:
// edges that leave the window from B(0, a).
CampbellValue campbell_escaping_pairs(const ModelSpec& model, double lambda, double a, double window_radius,
                                      double length, double rel_tol = 1e-6);

// E[# edges with both endpoints in the window].
CampbellValue campbell_edge_count(const ModelSpec& model, double lambda, const Window& window,
                                  double rel_tol = 1e-6);

// Fraction of the sphere of radius rho around a point at distance s from the
// origin that lies inside B(0, R).
double sphere_fraction_inside(int dim, double s, double rho, double big_r);

// Volume of W intersected with W + v, averaged over directions of v, |v| = rho.
double ball_covariogram(int dim, double radius, double rho);
double box_covariogram(const Window& box, double rho); // dim <= 3

} // namespace perco
