#pragma once

#include "model.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace perco {

using PhiFn = std::function<double(double s, double t, double r)>;

// Mark-averaged connection function: the integral of phi(s, t, r) over
// (s, t) in (0,1)^2. Boolean and classical models only.
double phi_bar(const ModelSpec& model, double r, double rel_tol = 1e-9);

enum class IntegralVerdict { finite, divergent, inconclusive };

const char* verdict_name(IntegralVerdict v) noexcept;

struct RadialIntegral {
  IntegralVerdict verdict = IntegralVerdict::inconclusive;
  double value = 0.0;      // quadrature part plus extrapolated tail (finite verdict)
  double quadrature = 0.0; // integral up to `cutoff`
  double tail = 0.0;       // power-law extrapolation beyond `cutoff`
  double cutoff = 0.0;
  double fitted_exponent = 0.0; // of r^{d-1} phi_bar(r) over the last decade; 0 if compact
  double error = 0.0;           // quadrature error estimate
  std::string diagnostics;
};

// sigma_d * integral from `from` to infinity of phi_bar(r) r^{d-1} dr, i.e. the
// integral of phi_bar(|z|) over {|z| > from}. Integrates decade by decade and
// extrapolates a fitted power law; exponent >= -1 is reported as divergent.
RadialIntegral radial_tail_integral(const ModelSpec& model, double from, double rel_tol = 1e-9);

struct CheckResult {
  std::int64_t trials = 0;
  std::int64_t failures = 0;
  double worst_s = 0.0, worst_t = 0.0, worst_r = 0.0; // first failing triple
  bool passed() const noexcept { return failures == 0; }
};

// phi(s,t,r) == phi(t,s,r) exactly on random triples; r log-uniform around r_scale.
CheckResult check_symmetry(const PhiFn& phi, std::int64_t trials, std::uint64_t seed, double r_scale);
// phi(s,t,r1) >= phi(s,t,r2) for r1 < r2 on random rays.
CheckResult check_distance_monotone(const PhiFn& phi, std::int64_t trials, std::uint64_t seed, double r_scale);
// Every value in [0,1].
CheckResult check_range(const PhiFn& phi, std::int64_t trials, std::uint64_t seed, double r_scale);

struct FrameworkReport {
  std::string model;
  CheckResult symmetry;
  CheckResult monotone;
  CheckResult range;
  RadialIntegral integral;
  bool passed() const noexcept {
    return symmetry.passed() && monotone.passed() && range.passed() && integral.verdict == IntegralVerdict::finite;
  }
};

// Symmetry, distance monotonicity and integrability of phi. Boolean and
// classical models only (ContractError otherwise).
FrameworkReport validate_framework(const ModelSpec& model, std::int64_t trials = 10000, std::uint64_t seed = 1,
                                   double rel_tol = 1e-9);

} // namespace perco
