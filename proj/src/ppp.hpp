#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace perco {

inline constexpr int max_dimension = 8;

// Non-owning view of one marked point.
struct PointRef {
  std::span<const double> position;
  double mark;
};

struct MarkedPoint {
  std::vector<double> position;
  double mark;

  PointRef ref() const noexcept { return {position, mark}; }
};

double distance(std::span<const double> a, std::span<const double> b) noexcept;
double norm(std::span<const double> a) noexcept;

// Volume of the unit ball in R^d.
double unit_ball_volume(int dim);
// Surface area of the unit sphere in R^d (2 for d = 1).
double unit_sphere_area(int dim);

enum class WindowKind { ball, box };

// Finite observation window: an open ball or an axis-aligned box.
class Window {
public:
  static Window ball(std::vector<double> center, double radius);
  static Window centered_ball(int dim, double radius);
  static Window box(std::vector<double> lower, std::vector<double> upper);

  int dim() const noexcept { return static_cast<int>(lower_.size()); }
  WindowKind kind() const noexcept { return kind_; }
  double volume() const noexcept;

  // Only meaningful for ball windows.
  std::span<const double> center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }

  // Bounding box (equal to the window for boxes).
  std::span<const double> lower() const noexcept { return lower_; }
  std::span<const double> upper() const noexcept { return upper_; }

  bool contains(std::span<const double> p) const noexcept;
  // True when the closed ball B(center, radius) lies inside the window.
  bool contains_ball(std::span<const double> center, double radius) const noexcept;

  bool operator==(const Window&) const = default;

private:
  Window() = default;

  WindowKind kind_ = WindowKind::box;
  std::vector<double> center_;
  double radius_ = 0.0;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

double window_volume(const Window& window) noexcept;

// Largest expected per-replicate point count a sampler accepts. Read from
// PERCO_BUDGET_POINTS, default 5e6.
double point_budget();

// Realisation of a marked PPP restricted to a window. Immutable once built.
// Every point carries an id; sampled clouds use 0..n-1 and thinned clouds
// inherit the ids of their parent so pair randomness survives thinning.
class PointCloud {
public:
  PointCloud(Window window, double intensity, std::uint64_t seed, std::vector<double> coords,
             std::vector<double> marks, std::vector<std::uint64_t> ids);

  const Window& window() const noexcept { return window_; }
  int dim() const noexcept { return window_.dim(); }
  double intensity() const noexcept { return intensity_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t size() const noexcept { return marks_.size(); }
  bool empty() const noexcept { return marks_.empty(); }

  std::span<const double> position(std::size_t i) const noexcept {
    return {coords_.data() + i * static_cast<std::size_t>(dim()), static_cast<std::size_t>(dim())};
  }
  double mark(std::size_t i) const noexcept { return marks_[i]; }
  std::uint64_t id(std::size_t i) const noexcept { return ids_[i]; }
  PointRef point(std::size_t i) const noexcept { return {position(i), marks_[i]}; }

  std::span<const double> coords() const noexcept { return coords_; }
  std::span<const double> marks() const noexcept { return marks_; }
  std::span<const std::uint64_t> ids() const noexcept { return ids_; }

  // Sub-cloud of the points with keep[i] true; ids are inherited.
  PointCloud subset(const std::vector<bool>& keep, double intensity) const;

  bool operator==(const PointCloud&) const = default;

private:
  Window window_;
  double intensity_;
  std::uint64_t seed_;
  std::vector<double> coords_;
  std::vector<double> marks_;
  std::vector<std::uint64_t> ids_;
};

// Samples a PPP of intensity `intensity` on window x (0,1). Deterministic in
// (window, intensity, seed). Throws ResourceError when intensity * volume
// exceeds the budget.
PointCloud sample_ppp(const Window& window, double intensity, std::uint64_t seed,
                      std::optional<double> budget = std::nullopt);

} // namespace perco
