#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "cylapprox/errors.hpp"
#include "cylapprox/grid.hpp"

namespace cylapprox {

enum class BasisKind {
  TrigCardinal,  // Dirichlet-kernel cardinal functions centred on m+1 equispaced points
  RealFourier,   // 1/sqrt(2pi), sin(kx)/sqrt(pi), cos(kx)/sqrt(pi), k = 1..m/2
};

inline const char* to_string(BasisKind k) { return k == BasisKind::TrigCardinal ? "cardinal" : "fourier"; }

inline BasisKind parse_basis_kind(const std::string& s) {
  if (s == "cardinal") return BasisKind::TrigCardinal;
  if (s == "fourier") return BasisKind::RealFourier;
  throw InvalidArgument("unknown basis '" + s + "' (expected cardinal|fourier)");
}

/// Orthonormal basis phi_0..phi_m of D_m. Both families need m even and span
/// the trigonometric polynomials of degree <= m/2.
class BasisSpec {
 public:
  BasisSpec(BasisKind kind, std::size_t m) : kind_(kind), m_(m) {
    if (m % 2 != 0) {
      throw InvalidArgument(std::string(to_string(kind)) + " basis requires even m, got " + std::to_string(m));
    }
  }

  BasisKind kind() const noexcept { return kind_; }
  std::size_t m() const noexcept { return m_; }
  std::size_t size() const noexcept { return m_ + 1; }
  /// Highest harmonic present in the span.
  std::size_t max_harmonic() const noexcept { return m_ / 2; }

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;

 private:
  BasisKind kind_;
  std::size_t m_;
};

/// Default oversampled quadrature size for a basis index m; also the minimum
/// accepted by project().
inline std::size_t default_quadrature_points(std::size_t m) { return std::max<std::size_t>(8 * (m + 1), 256); }

namespace detail {

inline constexpr double kCardinalSingularity = 1e-8;

inline void check_index(const BasisSpec& b, std::size_t k) {
  if (k >= b.size()) {
    throw InvalidArgument("basis index " + std::to_string(k) + " out of range for " + std::to_string(b.size()) +
                          " functions");
  }
}

inline double cardinal_center(const BasisSpec& b, std::size_t k) {
  return kTwoPi * static_cast<double>(k) / static_cast<double>(b.m() + 1);
}

}  // namespace detail

/// Harmonic index and parity of RealFourier element k: 0 -> constant, 2l-1 -> sin(l x), 2l -> cos(l x).
struct FourierMode {
  std::size_t harmonic;
  bool is_sin;
};

inline FourierMode fourier_mode(std::size_t k) {
  if (k == 0) return {0, false};
  return {(k + 1) / 2, k % 2 == 1};
}

inline std::size_t fourier_index(std::size_t harmonic, bool is_sin) {
  if (harmonic == 0) return 0;
  return is_sin ? 2 * harmonic - 1 : 2 * harmonic;
}

inline double eval_basis(const BasisSpec& b, std::size_t k, double x) {
  detail::check_index(b, k);
  if (b.kind() == BasisKind::TrigCardinal) {
    const double np1 = static_cast<double>(b.m() + 1);
    const double half = 0.5 * (x - detail::cardinal_center(b, k));
    const double den = std::sin(half);
    if (std::abs(den) < detail::kCardinalSingularity) {
      return std::sqrt(np1 / kTwoPi) * std::cos(np1 * half) / std::cos(half);
    }
    return std::sin(np1 * half) / den / std::sqrt(kTwoPi * np1);
  }
  const auto [l, is_sin] = fourier_mode(k);
  if (l == 0) return 1.0 / std::sqrt(kTwoPi);
  const double lx = static_cast<double>(l) * x;
  return (is_sin ? std::sin(lx) : std::cos(lx)) / std::sqrt(std::numbers::pi);
}

/// d phi_k / dx. The cardinal function is differentiated through its cosine-sum
/// form sqrt(1/(2pi(m+1))) (1 + 2 sum_l cos(l y)), which has no removable singularity.
inline double eval_basis_derivative(const BasisSpec& b, std::size_t k, double x) {
  detail::check_index(b, k);
  if (b.kind() == BasisKind::TrigCardinal) {
    const double y = x - detail::cardinal_center(b, k);
    double acc = 0.0;
    for (std::size_t l = 1; l <= b.max_harmonic(); ++l) {
      acc += static_cast<double>(l) * std::sin(static_cast<double>(l) * y);
    }
    return -2.0 * acc / std::sqrt(kTwoPi * static_cast<double>(b.m() + 1));
  }
  const auto [l, is_sin] = fourier_mode(k);
  if (l == 0) return 0.0;
  const double ll = static_cast<double>(l);
  return (is_sin ? ll * std::cos(ll * x) : -ll * std::sin(ll * x)) / std::sqrt(std::numbers::pi);
}

/// phi_k(x_j) (and optionally phi_k'(x_j)) as a (basis size) x (grid size) matrix.
inline Eigen::MatrixXd basis_table(const BasisSpec& b, const UniformGrid& grid, bool derivative = false) {
  Eigen::MatrixXd t(b.size(), grid.size());
  for (std::size_t k = 0; k < b.size(); ++k) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      t(k, j) = derivative ? eval_basis_derivative(b, k, grid.node(j)) : eval_basis(b, k, grid.node(j));
    }
  }
  return t;
}

}  // namespace cylapprox
