#pragma once

#include "estimators.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace perco {

struct RenormOptions {
  double constant = 1.0; // the dimensional constant C of the inequality
  // Mixing term C C_mix lambda r^-zeta; required for generalized models,
  // absent for classical ones.
  std::optional<double> c_mix;
  std::optional<double> zeta;
};

struct RenormRow {
  double r = 0.0;
  Estimate lhs;   // P(C(10r))
  Estimate g_est; // P(G(r))
  Estimate c_est; // P(C(r))
  Estimate f_est; // P(F(r))
  std::optional<double> fitted_c; // max(0, (lhs - f) / c^2); empty when lhs > f and c = 0
  double bound = 0.0;             // C c^2 + f + C C_mix lambda r^-zeta at the point estimates
  std::int64_t inclusion_failures = 0; // replicates with G(r) or L(r,3) but not C(r)
};

struct RenormTable {
  double lambda = 0.0;
  double window_factor = 0.0; // window radius / r
  RenormOptions options;
  std::vector<RenormRow> rows;
  // fitted constants defined on >= 2 rows and either all zero or all
  // positive with max/min <= 2
  bool fitted_stable = false;
  std::string note;
};

// All four events on shared replicates per scale, window B(0, (21 + eps) r).
RenormTable renorm_table(const ModelSpec& model, double lambda, const std::vector<double>& scales, std::int64_t n,
                         std::uint64_t seed, const RunOptions& opt = {}, const RenormOptions& ropt = {});

struct BracketPoint {
  double lambda = 0.0;
  Estimate estimate;
};

struct LambdaBracket {
  double r_probe = 0.0;
  double threshold = 0.5;
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
  bool never_crosses = false;     // p(lambda_max) < threshold
  bool below_lower_bound = false; // p(lambda_min) >= threshold
  bool ambiguous_stop = false;    // stopped on a midpoint whose interval held the threshold
  std::vector<BracketPoint> evaluations; // in evaluation order
  std::string note;
};

// Largest probe scale whose window B(0, (2 + eps) r) holds `budget` expected
// points at intensity lambda_max.
double default_probe_scale(int dim, double lambda_max, double budget = 1e5, double eps = default_window_margin);

// Bisection of lambda -> P_lambda(C(r_probe)) against `threshold` on nested
// thinnings of a PPP(lambda_max), so every replicate is monotone in lambda.
LambdaBracket bracket_lambda_hat(const ModelSpec& model, double r_probe, double threshold, double lambda_min,
                                 double lambda_max, std::int64_t n, std::uint64_t seed, const RunOptions& opt = {},
                                 int max_iterations = 12);

} // namespace perco
