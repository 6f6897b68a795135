#include "model.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace perco {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(9);
  os << v;
  return os.str();
}

void check_dim(int dim) {
  if (dim < 1 || dim > max_dimension) throw ConfigError("model dimension must be in [1, 8]");
}

void check_classical(const ClassicalModel& m) {
  if (!(m.beta > 0.0) || !std::isfinite(m.beta)) throw ConfigError("amplitude beta must be positive");
  if (m.kernel != KernelKind::plain && !(m.tau > 1.0)) {
    throw ConfigError("weight exponent tau must be > 1 for weighted kernels");
  }
}

} // namespace

RadiusLaw RadiusLaw::deterministic(double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw ConfigError("deterministic radius must be >= 0");
  return {Kind::deterministic, radius, 0.0};
}

RadiusLaw RadiusLaw::uniform(double lo, double hi) {
  if (!(lo >= 0.0 && hi > lo) || !std::isfinite(hi)) throw ConfigError("uniform radius law needs 0 <= lo < hi");
  return {Kind::uniform, lo, hi};
}

RadiusLaw RadiusLaw::pareto(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) || !std::isfinite(scale)) {
    throw ConfigError("pareto radius law needs shape > 0 and scale > 0");
  }
  return {Kind::pareto, shape, scale};
}

double RadiusLaw::radius(double u) const noexcept {
  switch (kind) {
  case Kind::deterministic: return a;
  case Kind::uniform: return b - u * (b - a);
  case Kind::pareto: return b * std::pow(u, -1.0 / a);
  }
  return 0.0;
}

double RadiusLaw::survival(double x) const noexcept {
  switch (kind) {
  case Kind::deterministic: return x < a ? 1.0 : 0.0;
  case Kind::uniform:
    if (x < a) return 1.0;
    if (x >= b) return 0.0;
    return (b - x) / (b - a);
  case Kind::pareto: return x < b ? 1.0 : std::pow(x / b, -a);
  }
  return 0.0;
}

double RadiusLaw::min_radius() const noexcept {
  return kind == Kind::pareto ? b : a;
}

double RadiusLaw::max_radius() const noexcept {
  switch (kind) {
  case Kind::deterministic: return a;
  case Kind::uniform: return b;
  case Kind::pareto: return inf;
  }
  return inf;
}

std::string RadiusLaw::describe() const {
  switch (kind) {
  case Kind::deterministic: return "R = " + fmt(a);
  case Kind::uniform: return "R ~ uniform[" + fmt(a) + ", " + fmt(b) + "]";
  case Kind::pareto: return "P(R > x) = (x/" + fmt(b) + ")^-" + fmt(a) + " for x >= " + fmt(b);
  }
  return {};
}

const char* kernel_name(KernelKind kind) noexcept {
  switch (kind) {
  case KernelKind::plain: return "plain";
  case KernelKind::product: return "product";
  case KernelKind::sum: return "sum";
  case KernelKind::min: return "min";
  }
  return "?";
}

const char* kernel_formula(KernelKind kind) noexcept {
  switch (kind) {
  case KernelKind::plain: return "g(w,v) = 1";
  case KernelKind::product: return "g(w,v) = 1/(w*v)";
  case KernelKind::sum: return "g(w,v) = 1/(w+v)";
  case KernelKind::min: return "g(w,v) = 1/max(w,v) = min(1/w, 1/v)";
  }
  return "?";
}

double kernel_value(KernelKind kind, double w, double v) noexcept {
  switch (kind) {
  case KernelKind::plain: return 1.0;
  case KernelKind::product: return 1.0 / (w * v);
  case KernelKind::sum: return 1.0 / (w + v);
  case KernelKind::min: return 1.0 / std::max(w, v);
  }
  return 1.0;
}

Profile Profile::indicator(double theta) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw ConfigError("indicator threshold must be >= 0");
  Profile p;
  p.kind = Kind::indicator;
  p.theta = theta;
  return p;
}

Profile Profile::polynomial(double delta) {
  if (!(delta > 1.0) || !std::isfinite(delta)) throw ConfigError("polynomial profile needs delta > 1");
  Profile p;
  p.kind = Kind::polynomial;
  p.delta = delta;
  return p;
}

Profile Profile::tabulated(std::vector<std::pair<double, double>> table) {
  if (table.empty()) throw ConfigError("tabulated profile needs at least one node");
  for (std::size_t k = 0; k < table.size(); ++k) {
    const auto [t, v] = table[k];
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("tabulated profile abscissae must be >= 0");
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("tabulated profile values must lie in [0,1]");
    if (k > 0 && !(t > table[k - 1].first)) throw ConfigError("tabulated profile abscissae must increase");
    if (k > 0 && v > table[k - 1].second) throw ConfigError("tabulated profile must be nonincreasing");
  }
  Profile p;
  p.kind = Kind::tabulated;
  p.table = std::move(table);
  return p;
}

double Profile::operator()(double t) const noexcept {
  switch (kind) {
  case Kind::indicator: return t <= theta ? 1.0 : 0.0;
  case Kind::polynomial: return t <= 1.0 ? 1.0 : std::pow(t, -delta);
  case Kind::tabulated: {
    if (t <= table.front().first) return table.front().second;
    if (t >= table.back().first) return table.back().second;
    const auto it = std::upper_bound(table.begin(), table.end(), t,
                                     [](double x, const auto& node) { return x < node.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (t - lo.first) / (hi.first - lo.first);
    return std::min(lo.second, lo.second + w * (hi.second - lo.second));
  }
  }
  return 0.0;
}

double Profile::support_end() const noexcept {
  switch (kind) {
  case Kind::indicator: return theta;
  case Kind::polynomial: return inf;
  case Kind::tabulated:
    for (const auto& [t, v] : table)
      if (v == 0.0) return t;
    return inf;
  }
  return inf;
}

std::vector<double> Profile::breakpoints() const {
  switch (kind) {
  case Kind::indicator: return {theta};
  case Kind::polynomial: return {1.0};
  case Kind::tabulated: {
    std::vector<double> out;
    for (const auto& node : table) out.push_back(node.first);
    return out;
  }
  }
  return {};
}

std::string Profile::describe() const {
  switch (kind) {
  case Kind::indicator: return "rho(t) = 1{t <= " + fmt(theta) + "}";
  case Kind::polynomial: return "rho(t) = min(1, t^-" + fmt(delta) + ")";
  case Kind::tabulated: {
    std::string s = "rho tabulated:";
    for (const auto& [t, v] : table) s += " " + fmt(t) + ":" + fmt(v);
    return s;
  }
  }
  return {};
}

const char* variant_name(Variant v) noexcept {
  switch (v) {
  case Variant::boolean: return "boolean";
  case Variant::classical: return "classical";
  case Variant::generalized: return "generalized";
  }
  return "?";
}

ModelSpec ModelSpec::boolean(int dim, RadiusLaw radius) {
  check_dim(dim);
  return ModelSpec(dim, BooleanModel{radius});
}

ModelSpec ModelSpec::classical(int dim, KernelKind kernel, Profile profile, double tau, double beta) {
  check_dim(dim);
  ClassicalModel m{kernel, std::move(profile), tau, beta};
  check_classical(m);
  return ModelSpec(dim, std::move(m));
}

ModelSpec ModelSpec::generalized(int dim, ClassicalModel base, double damping_radius, double damping_factor) {
  check_dim(dim);
  check_classical(base);
  if (!(damping_radius >= 0.0) || !std::isfinite(damping_radius)) throw ConfigError("damping radius must be >= 0");
  if (!(damping_factor >= 0.0 && damping_factor <= 1.0)) throw ConfigError("damping factor must lie in [0,1]");
  return ModelSpec(dim, GeneralizedModel{std::move(base), damping_radius, damping_factor});
}

namespace {

const ClassicalModel& classical_part(const ModelSpec& m) {
  if (const auto* c = m.as_classical()) return *c;
  return m.as_generalized()->base;
}

double classical_phi(const ClassicalModel& m, int dim, double s, double t, double r) noexcept {
  double g = 1.0;
  if (m.kernel != KernelKind::plain) {
    const double e = -1.0 / (m.tau - 1.0);
    g = kernel_value(m.kernel, std::pow(s, e), std::pow(t, e));
  }
  return m.profile(g * std::pow(r, dim) / m.beta);
}

} // namespace

double ModelSpec::phi(double s, double t, double r) const noexcept {
  if (const auto* b = as_boolean()) return r < b->radius.radius(s) + b->radius.radius(t) ? 1.0 : 0.0;
  return classical_phi(classical_part(*this), dim_, s, t, r);
}

double ModelSpec::mark_key(double u) const noexcept {
  if (const auto* b = as_boolean()) return b->radius.radius(u);
  const auto& c = classical_part(*this);
  if (c.kernel == KernelKind::plain) return 1.0;
  return std::pow(u, -1.0 / (c.tau - 1.0));
}

double ModelSpec::reach(double ka, double kb) const noexcept {
  if (as_boolean()) return ka + kb;
  const auto& c = classical_part(*this);
  const double end = c.profile.support_end();
  if (!std::isfinite(end)) return inf;
  const double g = kernel_value(c.kernel, ka, kb);
  if (!(g > 0.0)) return inf;
  return std::pow(end * c.beta / g, 1.0 / dim_);
}

bool ModelSpec::has_finite_reach() const noexcept {
  if (const auto* b = as_boolean()) return std::isfinite(b->radius.max_radius());
  const auto& c = classical_part(*this);
  return c.kernel == KernelKind::plain && std::isfinite(c.profile.support_end());
}

double ModelSpec::characteristic_length() const noexcept {
  double len = 0.0;
  if (const auto* b = as_boolean()) {
    len = 2.0 * b->radius.radius(0.5);
  } else {
    const auto& c = classical_part(*this);
    const double end = c.profile.support_end();
    const double scale = std::isfinite(end) && end > 0.0 ? end : 1.0;
    const double k = mark_key(0.5);
    len = std::pow(scale * c.beta / kernel_value(c.kernel, k, k), 1.0 / dim_);
  }
  return len > 0.0 && std::isfinite(len) ? len : 1.0;
}

std::vector<double> ModelSpec::distance_breakpoints() const {
  std::vector<double> out;
  if (const auto* b = as_boolean()) {
    const auto& law = b->radius;
    switch (law.kind) {
    case RadiusLaw::Kind::deterministic: out = {2.0 * law.a}; break;
    case RadiusLaw::Kind::uniform: out = {2.0 * law.a, law.a + law.b, 2.0 * law.b}; break;
    case RadiusLaw::Kind::pareto: out = {2.0 * law.b}; break;
    }
  } else {
    const auto& c = classical_part(*this);
    if (c.kernel == KernelKind::plain) {
      for (double t : c.profile.breakpoints()) out.push_back(std::pow(t * c.beta, 1.0 / dim_));
    }
  }
  std::erase_if(out, [](double x) { return !(x > 0.0) || !std::isfinite(x); });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string ModelSpec::describe() const {
  std::string s = std::string(variant_name(variant())) + " d=" + std::to_string(dim_);
  if (const auto* b = as_boolean()) return s + "; connect iff |x-y| < R_x + R_y; " + b->radius.describe();
  const auto& c = classical_part(*this);
  s += "; phi = rho(g(W_x,W_y) |x-y|^d / beta); " + std::string(kernel_formula(c.kernel)) + "; " +
       c.profile.describe() + "; beta = " + fmt(c.beta);
  if (c.kernel != KernelKind::plain) s += "; W = u^(-1/(tau-1)), tau = " + fmt(c.tau);
  if (const auto* g = as_generalized()) {
    s += "; damping factor " + fmt(g->damping_factor) + " per other point within " + fmt(g->damping_radius) +
         " of the pair midpoint";
  }
  return s;
}

double weight_from_mark(double u, double tau) {
  if (!(tau > 1.0)) throw ConfigError("weight exponent tau must be > 1");
  if (!(u > 0.0 && u < 1.0)) throw ConfigError("mark must lie in (0,1)");
  return std::pow(u, -1.0 / (tau - 1.0));
}

double connection_prob(const ModelSpec& model, PointRef a, PointRef b) {
  if (!model.is_pairwise()) {
    throw ContractError("connection_prob needs a pairwise model; use connection_prob_ctx for generalized models");
  }
  return model.phi(a.mark, b.mark, distance(a.position, b.position));
}

int count_near_midpoint(PointRef a, PointRef b, std::span<const PointRef> context, double radius) {
  const std::size_t d = a.position.size();
  double mid[max_dimension];
  for (std::size_t k = 0; k < d; ++k) mid[k] = 0.5 * (a.position[k] + b.position[k]);
  const std::span<const double> m(mid, d);
  int n = 0;
  for (const auto& z : context)
    if (distance(z.position, m) <= radius) ++n;
  return n;
}

double connection_prob_ctx(const ModelSpec& model, PointRef a, PointRef b, std::span<const PointRef> context) {
  const double base = model.phi(a.mark, b.mark, distance(a.position, b.position));
  const auto* g = model.as_generalized();
  if (!g) return base;
  const int n = count_near_midpoint(a, b, context, g->damping_radius);
  return base * std::pow(g->damping_factor, n);
}

} // namespace perco
