#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "cylapprox/basis.hpp"
#include "cylapprox/errors.hpp"
#include "cylapprox/grid.hpp"
#include "cylapprox/spectrum.hpp"

namespace cylapprox {

/// Coordinates a_k = (theta, phi_k) of P_m theta.
struct CoefficientVector {
  BasisSpec basis;
  Eigen::VectorXd a;

  explicit CoefficientVector(BasisSpec b) : basis(b), a(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.size()))) {}
  CoefficientVector(BasisSpec b, Eigen::VectorXd coeffs) : basis(b), a(std::move(coeffs)) {
    if (static_cast<std::size_t>(a.size()) != basis.size()) {
      throw InvalidArgument("CoefficientVector: " + std::to_string(a.size()) + " coefficients for a basis of " +
                            std::to_string(basis.size()));
    }
  }

  std::size_t size() const noexcept { return static_cast<std::size_t>(a.size()); }
  double operator[](std::size_t k) const { return a[static_cast<Eigen::Index>(k)]; }
};

inline void require_quadrature(const BasisSpec& b, const UniformGrid& quad) {
  const std::size_t floor = default_quadrature_points(b.m());
  if (quad.size() < floor) {
    throw InvalidArgument("quadrature grid of " + std::to_string(quad.size()) + " points is below the floor of " +
                          std::to_string(floor) + " for m=" + std::to_string(b.m()));
  }
}

/// The projection P_m for one (basis, quadrature grid) pair, with phi_k(x_j)
/// tabulated once. Columns of the batch methods are independent functions.
class Projector {
 public:
  Projector(BasisSpec basis, UniformGrid quad) : basis_(basis), grid_(std::move(quad)) {
    require_quadrature(basis_, grid_);
    table_ = basis_table(basis_, grid_);
  }

  const BasisSpec& basis() const noexcept { return basis_; }
  const UniformGrid& grid() const noexcept { return grid_; }
  const Eigen::MatrixXd& table() const noexcept { return table_; }

  CoefficientVector project(const GridFunction& theta) const {
    if (!(theta.grid == grid_)) {
      throw InvalidArgument("project: theta sampled on " + std::to_string(theta.grid.size()) +
                            " points, quadrature grid has " + std::to_string(grid_.size()));
    }
    const Eigen::Map<const Eigen::VectorXd> v(theta.values.data(), static_cast<Eigen::Index>(theta.size()));
    return CoefficientVector(basis_, grid_.weight() * (table_ * v));
  }

  CoefficientVector project(const FourierSpectrum& theta) const { return project(eval_on_grid(theta, grid_)); }

  GridFunction synthesize(const CoefficientVector& a) const {
    if (!(a.basis == basis_)) throw InvalidArgument("synthesize: coefficient basis differs from projector basis");
    GridFunction out(grid_);
    Eigen::Map<Eigen::VectorXd>(out.values.data(), static_cast<Eigen::Index>(out.size())) = table_.transpose() * a.a;
    return out;
  }

  /// samples: (grid size) x S  ->  coefficients: (basis size) x S.
  Eigen::MatrixXd project_columns(const Eigen::MatrixXd& samples) const {
    return grid_.weight() * (table_ * samples);
  }

  /// coefficients: (basis size) x S  ->  samples: (grid size) x S.
  Eigen::MatrixXd synthesize_columns(const Eigen::MatrixXd& coeffs) const { return table_.transpose() * coeffs; }

 private:
  BasisSpec basis_;
  UniformGrid grid_;
  Eigen::MatrixXd table_;
};

inline CoefficientVector project(const GridFunction& theta, const BasisSpec& basis, const UniformGrid& quad) {
  return Projector(basis, quad).project(theta);
}

inline CoefficientVector project(const FourierSpectrum& theta, const BasisSpec& basis, const UniformGrid& quad) {
  return Projector(basis, quad).project(theta);
}

/// sum_k a_k phi_k sampled on an arbitrary grid.
inline GridFunction synthesize(const CoefficientVector& a, const UniformGrid& grid) {
  GridFunction out(grid);
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double ak = a[k];
    if (ak == 0.0) continue;
    for (std::size_t j = 0; j < grid.size(); ++j) out.values[j] += ak * eval_basis(a.basis, k, grid.node(j));
  }
  return out;
}

/// ||theta||^2_{H^s} = c_0^2 + 2 sum_k (1 + k^2 + ... + k^{2s}) |c_k|^2.
inline double sobolev_norm_sq(const FourierSpectrum& s, unsigned order) {
  if (order < 1) throw InvalidArgument("sobolev_norm_sq: order must be >= 1");
  double acc = 0.0;
  for (std::size_t k = 1; k < s.c.size(); ++k) {
    const double k2 = static_cast<double>(k) * static_cast<double>(k);
    double weight = 1.0, power = 1.0;
    for (unsigned j = 1; j <= order; ++j) {
      power *= k2;
      weight += power;
    }
    acc += weight * std::norm(s.c[k]);
  }
  const double c0 = s.c[0].real();
  return c0 * c0 + 2.0 * acc;
}

namespace detail {

/// Tail energy = norm_sq - captured. Rounding may push it slightly below zero;
/// anything beyond a 1e-12 relative guard means Bessel's inequality failed.
inline double clamp_tail(double norm_sq, double captured) {
  const double v = norm_sq - captured;
  if (v >= 0.0) return v;
  if (v < -1e-12 * std::max(1.0, norm_sq)) {
    throw NumericFailure("tail_energy: projection captured more energy than theta holds (" + std::to_string(v) +
                         "); quadrature grid too coarse for theta");
  }
  return 0.0;
}

}  // namespace detail

/// ||theta||^2 - sum_k a_k^2, the energy outside D_m.
inline double tail_energy(const GridFunction& theta, const BasisSpec& basis, const UniformGrid& quad) {
  const auto a = project(theta, basis, quad);
  return detail::clamp_tail(inner_product(theta, theta), a.a.squaredNorm());
}

inline double tail_energy(const FourierSpectrum& theta, const BasisSpec& basis, const UniformGrid& quad) {
  const auto a = project(theta, basis, quad);
  return detail::clamp_tail(l2_norm_sq(theta), a.a.squaredNorm());
}

/// ||theta - P_m theta|| by quadrature.
inline double l2_projection_error(const GridFunction& theta, const BasisSpec& basis, const UniformGrid& quad) {
  const Projector p(basis, quad);
  return l2_norm(theta - p.synthesize(p.project(theta)));
}

inline double l2_projection_error(const FourierSpectrum& theta, const BasisSpec& basis, const UniformGrid& quad) {
  return l2_projection_error(eval_on_grid(theta, quad), basis, quad);
}

}  // namespace cylapprox
