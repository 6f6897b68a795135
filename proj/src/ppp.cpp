#include "ppp.hpp"

#include "errors.hpp"
#include "rng.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib> // std::getenv
#include <numbers>
#include <random> // std::poisson_distribution
#include <string>

namespace perco {

double distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return std::sqrt(s);
}

double norm(std::span<const double> a) noexcept {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

double unit_ball_volume(int dim) {
  const double h = 0.5 * dim;
  return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0);
}

double unit_sphere_area(int dim) {
  return dim * unit_ball_volume(dim);
}

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > max_dimension) {
    throw ConfigError("dimension must be in [1, " + std::to_string(max_dimension) + "], got " +
                      std::to_string(dim));
  }
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

} // namespace

Window Window::ball(std::vector<double> center, double radius) {
  check_dim(static_cast<int>(center.size()));
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ConfigError("ball window radius must be positive and finite");
  }
  if (!all_finite(center)) throw ConfigError("ball window center must be finite");
  Window w;
  w.kind_ = WindowKind::ball;
  w.center_ = std::move(center);
  w.radius_ = radius;
  w.lower_.resize(w.center_.size());
  w.upper_.resize(w.center_.size());
  for (std::size_t k = 0; k < w.center_.size(); ++k) {
    w.lower_[k] = w.center_[k] - radius;
    w.upper_[k] = w.center_[k] + radius;
  }
  return w;
}

Window Window::centered_ball(int dim, double radius) {
  check_dim(dim);
  return ball(std::vector<double>(static_cast<std::size_t>(dim), 0.0), radius);
}

Window Window::box(std::vector<double> lower, std::vector<double> upper) {
  check_dim(static_cast<int>(lower.size()));
  if (lower.size() != upper.size()) throw ConfigError("box corners differ in dimension");
  if (!all_finite(lower) || !all_finite(upper)) throw ConfigError("box corners must be finite");
  for (std::size_t k = 0; k < lower.size(); ++k) {
    if (!(lower[k] < upper[k])) throw ConfigError("box window needs lower < upper in every coordinate");
  }
  Window w;
  w.kind_ = WindowKind::box;
  w.center_.resize(lower.size());
  for (std::size_t k = 0; k < lower.size(); ++k) w.center_[k] = 0.5 * (lower[k] + upper[k]);
  w.lower_ = std::move(lower);
  w.upper_ = std::move(upper);
  return w;
}

double Window::volume() const noexcept {
  if (kind_ == WindowKind::ball) return unit_ball_volume(dim()) * std::pow(radius_, dim());
  double v = 1.0;
  for (std::size_t k = 0; k < lower_.size(); ++k) v *= upper_[k] - lower_[k];
  return v;
}

bool Window::contains(std::span<const double> p) const noexcept {
  if (kind_ == WindowKind::ball) return distance(p, center_) < radius_;
  for (std::size_t k = 0; k < lower_.size(); ++k) {
    if (p[k] < lower_[k] || p[k] >= upper_[k]) return false;
  }
  return true;
}

bool Window::contains_ball(std::span<const double> c, double r) const noexcept {
  // Small relative slack so a window built as B(0, m r) covers B(0, m r).
  const double slack = 1e-12 * (1.0 + std::abs(r));
  if (kind_ == WindowKind::ball) return distance(c, center_) + r <= radius_ * (1.0 + 1e-12) + slack;
  for (std::size_t k = 0; k < lower_.size(); ++k) {
    if (c[k] - r < lower_[k] - slack || c[k] + r > upper_[k] + slack) return false;
  }
  return true;
}

double window_volume(const Window& window) noexcept {
  return window.volume();
}

double point_budget() {
  if (const char* env = std::getenv("PERCO_BUDGET_POINTS")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0.0) return v;
  }
  return 5e6;
}

PointCloud::PointCloud(Window window, double intensity, std::uint64_t seed, std::vector<double> coords,
                       std::vector<double> marks, std::vector<std::uint64_t> ids)
    : window_(std::move(window)), intensity_(intensity), seed_(seed), coords_(std::move(coords)),
      marks_(std::move(marks)), ids_(std::move(ids)) {
  if (!(intensity_ >= 0.0) || !std::isfinite(intensity_)) throw ConfigError("intensity must be >= 0");
  const auto d = static_cast<std::size_t>(dim());
  if (coords_.size() != marks_.size() * d || ids_.size() != marks_.size()) {
    throw ConfigError("point cloud arrays have inconsistent sizes");
  }
  for (std::size_t i = 0; i < marks_.size(); ++i) {
    if (!(marks_[i] > 0.0 && marks_[i] < 1.0)) throw ConfigError("marks must lie in (0,1)");
    if (!window_.contains(position(i))) throw ConfigError("point outside window");
  }
}

PointCloud PointCloud::subset(const std::vector<bool>& keep, double intensity) const {
  std::vector<double> coords;
  std::vector<double> marks;
  std::vector<std::uint64_t> ids;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!keep[i]) continue;
    const auto p = position(i);
    coords.insert(coords.end(), p.begin(), p.end());
    marks.push_back(marks_[i]);
    ids.push_back(ids_[i]);
  }
  return PointCloud(window_, intensity, seed_, std::move(coords), std::move(marks), std::move(ids));
}

PointCloud sample_ppp(const Window& window, double intensity, std::uint64_t seed, std::optional<double> budget) {
  if (!(intensity >= 0.0) || !std::isfinite(intensity)) throw ConfigError("intensity must be >= 0 and finite");
  const double mean = intensity * window.volume();
  const double cap = budget.value_or(point_budget());
  if (mean > cap) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "expected point count %.6g exceeds the point budget %.6g", mean, cap);
    throw ResourceError(buf);
  }

  CounterRng rng(seed);
  std::size_t count = 0;
  if (mean > 0.0) {
    std::poisson_distribution<std::int64_t> poisson(mean);
    count = static_cast<std::size_t>(poisson(rng));
  }

  const auto d = static_cast<std::size_t>(window.dim());
  const auto lo = window.lower();
  const auto hi = window.upper();
  std::vector<double> coords(count * d);
  std::vector<double> marks(count);
  std::vector<std::uint64_t> ids(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::span<double> p(coords.data() + i * d, d);
    // rejection from the bounding box; a single pass for box windows
    do {
      for (std::size_t k = 0; k < d; ++k) p[k] = lo[k] + (hi[k] - lo[k]) * rng.uniform();
    } while (!window.contains(p));
    marks[i] = rng.uniform();
    ids[i] = i;
  }
  return PointCloud(window, intensity, seed, std::move(coords), std::move(marks), std::move(ids));
}

} // namespace perco
