#pragma once

#include "ppp.hpp"

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace perco {

// Radius law of the Boolean model. Radii are a deterministic, nonincreasing
// function of the mark: R(u) = S^{-1}(u) where S(x) = P(R > x).
struct RadiusLaw {
  enum class Kind { deterministic, uniform, pareto };

  Kind kind = Kind::deterministic;
  double a = 0.0; // deterministic: R; uniform: lower end; pareto: tail shape alpha
  double b = 0.0; // uniform: upper end; pareto: scale (minimum radius)

  static RadiusLaw deterministic(double radius);
  static RadiusLaw uniform(double lo, double hi);
  static RadiusLaw pareto(double shape, double scale);

  double radius(double u) const noexcept;
  double survival(double x) const noexcept;
  double min_radius() const noexcept;
  double max_radius() const noexcept; // +inf for pareto
  std::string describe() const;
};

enum class KernelKind { plain, product, sum, min };

const char* kernel_name(KernelKind kind) noexcept;
const char* kernel_formula(KernelKind kind) noexcept;
// g(w, v); symmetric, strictly positive for finite weights, nonincreasing in each weight.
double kernel_value(KernelKind kind, double w, double v) noexcept;

// Nonincreasing profile rho: [0, inf) -> [0, 1].
struct Profile {
  enum class Kind { indicator, polynomial, tabulated };

  Kind kind = Kind::indicator;
  double theta = 1.0; // indicator threshold, rho(theta) = 1
  double delta = 2.0; // polynomial exponent, rho(t) = min(1, t^-delta)
  std::vector<std::pair<double, double>> table; // (t, value), linear in between, flat outside

  static Profile indicator(double theta);
  static Profile polynomial(double delta);
  static Profile tabulated(std::vector<std::pair<double, double>> table);

  double operator()(double t) const noexcept;
  // Smallest t with rho = 0 beyond it; +inf when the profile never vanishes.
  double support_end() const noexcept;
  // Points where rho is not smooth.
  std::vector<double> breakpoints() const;
  std::string describe() const;
};

struct BooleanModel {
  RadiusLaw radius;
};

// phi(s, t, r) = rho(g(W(s), W(t)) r^d / beta), W(u) = u^{-1/(tau-1)}.
struct ClassicalModel {
  KernelKind kernel = KernelKind::plain;
  Profile profile;
  double tau = 2.0;
  double beta = 1.0;
};

// Classical base damped by the surrounding points: p = base * factor^N with N
// the number of other points within `damping_radius` of the pair midpoint.
struct GeneralizedModel {
  ClassicalModel base;
  double damping_radius = 1.0;
  double damping_factor = 0.5;
};

enum class Variant { boolean, classical, generalized };

const char* variant_name(Variant v) noexcept;

class ModelSpec {
public:
  static ModelSpec boolean(int dim, RadiusLaw radius);
  static ModelSpec classical(int dim, KernelKind kernel, Profile profile, double tau, double beta);
  static ModelSpec generalized(int dim, ClassicalModel base, double damping_radius = 1.0,
                               double damping_factor = 0.5);

  int dim() const noexcept { return dim_; }
  Variant variant() const noexcept { return static_cast<Variant>(data_.index()); }
  bool is_pairwise() const noexcept { return variant() != Variant::generalized; }

  const BooleanModel* as_boolean() const noexcept { return std::get_if<BooleanModel>(&data_); }
  const ClassicalModel* as_classical() const noexcept { return std::get_if<ClassicalModel>(&data_); }
  const GeneralizedModel* as_generalized() const noexcept { return std::get_if<GeneralizedModel>(&data_); }

  // phi(s, t, r) for Boolean/classical models; the base probability for the
  // generalized model.
  double phi(double s, double t, double r) const noexcept;

  // Per-point key used to bound interaction range (radius or weight).
  double mark_key(double u) const noexcept;
  // Any edge between points with keys <= ka, kb has length <= reach(ka, kb).
  // +inf when the profile has unbounded support.
  double reach(double ka, double kb) const noexcept;
  bool has_finite_reach() const noexcept;
  // Length scale used to seed radial quadrature.
  double characteristic_length() const noexcept;
  // Distances where phi(s, t, .) is not smooth for every (s, t) (may be empty).
  std::vector<double> distance_breakpoints() const;

  std::string describe() const;

private:
  ModelSpec(int dim, std::variant<BooleanModel, ClassicalModel, GeneralizedModel> data)
      : dim_(dim), data_(std::move(data)) {}

  int dim_;
  std::variant<BooleanModel, ClassicalModel, GeneralizedModel> data_;
};

// W = u^{-1/(tau-1)}. Throws ConfigError for tau <= 1 or u outside (0,1).
double weight_from_mark(double u, double tau);

// phi(u_a, u_b, |a-b|). Throws ContractError for generalized models.
double connection_prob(const ModelSpec& model, PointRef a, PointRef b);

// Edge probability given the rest of the configuration. Equals
// connection_prob for pairwise models.
double connection_prob_ctx(const ModelSpec& model, PointRef a, PointRef b, std::span<const PointRef> context);

// Number of context points within `radius` of the midpoint of a and b.
int count_near_midpoint(PointRef a, PointRef b, std::span<const PointRef> context, double radius);

} // namespace perco
