#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "cylapprox/errors.hpp"

namespace cylapprox {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform periodic grid on [0, 2pi): node_j = 2 pi j / n, trapezoid weight 2 pi / n.
class UniformGrid {
 public:
  explicit UniformGrid(std::size_t n_points) : n_(n_points), weight_(kTwoPi / static_cast<double>(n_points)) {
    if (n_points < 2) {
      throw InvalidArgument("UniformGrid: n_points must be >= 2, got " + std::to_string(n_points));
    }
    nodes_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      nodes_[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(n_);
    }
  }

  std::size_t size() const noexcept { return n_; }
  double weight() const noexcept { return weight_; }
  double node(std::size_t j) const { return nodes_[j]; }
  std::span<const double> nodes() const noexcept { return nodes_; }

  friend bool operator==(const UniformGrid& a, const UniformGrid& b) noexcept { return a.n_ == b.n_; }

 private:
  std::size_t n_;
  double weight_;
  std::vector<double> nodes_;
};

inline UniformGrid make_grid(std::size_t n_points) { return UniformGrid(n_points); }

/// Real samples of a periodic function on a UniformGrid.
struct GridFunction {
  UniformGrid grid;
  std::vector<double> values;

  GridFunction(UniformGrid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size()) {
      throw InvalidArgument("GridFunction: " + std::to_string(values.size()) + " values for a grid of " +
                            std::to_string(grid.size()) + " points");
    }
  }

  explicit GridFunction(UniformGrid g) : grid(std::move(g)), values(grid.size(), 0.0) {}

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t j) const { return values[j]; }
  double& operator[](std::size_t j) { return values[j]; }
};

/// Samples `f` on every node of `grid`.
template <class Fn>
GridFunction sample(const UniformGrid& grid, Fn&& f) {
  GridFunction out(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) out.values[j] = f(grid.node(j));
  return out;
}

inline void require_same_grid(const GridFunction& f, const GridFunction& g, const char* who) {
  if (!(f.grid == g.grid)) {
    throw InvalidArgument(std::string(who) + ": grid mismatch (" + std::to_string(f.grid.size()) + " vs " +
                          std::to_string(g.grid.size()) + " points)");
  }
}

/// Periodic trapezoid rule for (f, g) in L2([0, 2pi]).
inline double inner_product(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g, "inner_product");
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) acc += f.values[j] * g.values[j];
  return f.grid.weight() * acc;
}

inline double l2_norm(const GridFunction& f) { return std::sqrt(inner_product(f, f)); }

inline GridFunction operator-(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g, "operator-");
  GridFunction out(f.grid);
  for (std::size_t j = 0; j < f.size(); ++j) out.values[j] = f.values[j] - g.values[j];
  return out;
}

inline GridFunction operator+(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g, "operator+");
  GridFunction out(f.grid);
  for (std::size_t j = 0; j < f.size(); ++j) out.values[j] = f.values[j] + g.values[j];
  return out;
}

inline GridFunction operator*(double s, const GridFunction& f) {
  GridFunction out(f.grid);
  for (std::size_t j = 0; j < f.size(); ++j) out.values[j] = s * f.values[j];
  return out;
}

}  // namespace cylapprox
