#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

#include "cylapprox/basis.hpp"
#include "cylapprox/errors.hpp"
#include "cylapprox/functionals.hpp"
#include "cylapprox/projection.hpp"
#include "cylapprox/spectrum.hpp"

// Cylindrical approximation of the advection Hopf equation
//
//   dF/dt = int theta(x) d/dx (dF/dtheta(x)) dx,   F([theta], 0) = F_0([theta]),
//
// whose exact solution is F_0([theta(x - t)]). Restricted to D_m it becomes the
// first-order PDE
//
//   df/dt = sum_{j,k} a_j C_jk df/da_k,   C_jk = int phi_j dphi_k/dx dx,
//
// solved by characteristics: f(a, t) = f_0(a(t)) with a(t) = exp(tC)^T a.
// exp(tC)^T = exp(-tC) moves the coordinates of theta to those of theta(x - t);
// this is the orientation that reproduces the exact solution on D_m.

namespace cylapprox {

/// C_jk = (phi_j, phi_k'), skew-symmetric for periodic bases.
struct CoefficientMatrix {
  BasisSpec basis;
  Eigen::MatrixXd C;
};

inline CoefficientMatrix assemble_C(const BasisSpec& basis, const UniformGrid& quad) {
  require_quadrature(basis, quad);
  const Eigen::MatrixXd values = basis_table(basis, quad);
  const Eigen::MatrixXd slopes = basis_table(basis, quad, /*derivative=*/true);
  return {basis, quad.weight() * values * slopes.transpose()};
}

/// exp(tC) for one time.
struct PropagatorCache {
  double t = 0.0;
  Eigen::MatrixXd E;

  /// Coordinates of the advected function: exp(tC)^T a.
  Eigen::VectorXd propagate(const Eigen::VectorXd& a) const {
    if (a.size() != E.rows()) {
      throw InvalidArgument("propagate: " + std::to_string(a.size()) + " coordinates for a propagator of size " +
                            std::to_string(E.rows()));
    }
    return E.transpose() * a;
  }

  Eigen::MatrixXd propagate_columns(const Eigen::MatrixXd& a) const { return E.transpose() * a; }
};

inline PropagatorCache matrix_exponential(const CoefficientMatrix& C, double t) {
  if (!std::isfinite(t) || !C.C.allFinite()) throw NumericFailure("matrix_exponential: non-finite input");
  PropagatorCache p{t, (t * C.C).exp()};
  if (!p.E.allFinite()) throw NumericFailure("matrix_exponential: non-finite result at t=" + std::to_string(t));
  return p;
}

/// f(a, t) = f_0(exp(tC)^T a) for any callable f_0 taking an Eigen::VectorXd.
template <class F0>
double solve_cylindrical(const F0& f0, const PropagatorCache& propagator, const Eigen::VectorXd& a) {
  return f0(Eigen::VectorXd(propagator.propagate(a)));
}

template <class F0>
double solve_cylindrical(const F0& f0, const CoefficientMatrix& C, const CoefficientVector& a, double t) {
  if (!(a.basis == C.basis)) throw InvalidArgument("solve_cylindrical: coefficient basis differs from C");
  return solve_cylindrical(f0, matrix_exponential(C, t), a.a);
}

/// |df/dt - sum_{j,k} a_j C_jk df/da_k| for f(a, t) = f_0(exp(tC)^T a), all
/// derivatives by central differences with step h.
template <class F0>
double verify_pde_residual(const F0& f0, const CoefficientMatrix& C, const Eigen::VectorXd& a, double t, double h) {
  if (!(h > 0.0)) throw InvalidArgument("verify_pde_residual: h must be positive");
  if (a.size() != C.C.rows()) throw InvalidArgument("verify_pde_residual: dimension mismatch");

  const auto prop_plus = matrix_exponential(C, t + h);
  const auto prop_minus = matrix_exponential(C, t - h);
  const auto prop = matrix_exponential(C, t);

  const double dfdt = (solve_cylindrical(f0, prop_plus, a) - solve_cylindrical(f0, prop_minus, a)) / (2.0 * h);

  Eigen::VectorXd grad(a.size());
  Eigen::VectorXd probe = a;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    probe[k] = a[k] + h;
    const double up = solve_cylindrical(f0, prop, probe);
    probe[k] = a[k] - h;
    const double down = solve_cylindrical(f0, prop, probe);
    probe[k] = a[k];
    grad[k] = (up - down) / (2.0 * h);
  }
  return std::abs(dfdt - a.dot(C.C * grad));
}

/// Default number of extension functions summed by residual_tail.
inline std::size_t default_tail_modes(const BasisSpec& basis) { return 4 * (basis.m() + 1); }

/// |R_m| = |sum_{k > m} (dF([P_m theta])/dtheta, psi_k) int psi_k' P_m theta dx|,
/// truncated to `tail_modes` extension functions psi_k: the RealFourier modes
/// sin(lx)/sqrt(pi), cos(lx)/sqrt(pi) with l above the highest harmonic of the basis.
inline double residual_tail(const FunctionalModel& model, const FourierSpectrum& theta, const BasisSpec& basis,
                            std::size_t tail_modes, const UniformGrid& quad) {
  if (tail_modes == 0) throw InvalidArgument("residual_tail: tail_modes must be positive");
  const std::size_t top_harmonic = basis.max_harmonic() + (tail_modes + 1) / 2;
  if (quad.size() <= 2 * top_harmonic) {
    throw InvalidArgument("residual_tail: quadrature grid of " + std::to_string(quad.size()) +
                          " points cannot resolve harmonic " + std::to_string(top_harmonic));
  }
  const Projector p(basis, quad);
  const GridFunction projected = p.synthesize(p.project(theta));
  const GridFunction field = model.derivative_field(projected);

  const double norm = 1.0 / std::sqrt(std::numbers::pi);
  double sum = 0.0;
  for (std::size_t i = 0; i < tail_modes; ++i) {
    const double l = static_cast<double>(basis.max_harmonic() + 1 + i / 2);
    const bool is_sin = i % 2 == 0;
    double field_coeff = 0.0, transport = 0.0;
    for (std::size_t j = 0; j < quad.size(); ++j) {
      const double lx = l * quad.node(j);
      const double psi = norm * (is_sin ? std::sin(lx) : std::cos(lx));
      const double dpsi = norm * l * (is_sin ? std::cos(lx) : -std::sin(lx));
      field_coeff += field.values[j] * psi;
      transport += dpsi * projected.values[j];
    }
    sum += quad.weight() * field_coeff * quad.weight() * transport;
  }
  return std::abs(sum);
}

inline double residual_tail(const FunctionalModel& model, const FourierSpectrum& theta, const BasisSpec& basis,
                            const UniformGrid& quad) {
  return residual_tail(model, theta, basis, default_tail_modes(basis), quad);
}

/// |L F([theta]) - L_m f(a)| with L F = int theta d/dx(dF/dtheta) dx = -int theta' dF/dtheta dx
/// and L_m f(a) = sum_{j,k} a_j C_jk df/da_k: the generator defect of the cylindrical scheme
/// at t = 0 on a single theta.
inline double consistency_defect(const FunctionalModel& model, const FourierSpectrum& theta,
                                 const CoefficientMatrix& C, const UniformGrid& quad) {
  const GridFunction values = eval_on_grid(theta, quad);
  const GridFunction slope = eval_on_grid(derivative(theta), quad);
  const double exact = -inner_product(slope, model.derivative_field(values));

  const Projector p(C.basis, quad);
  const CoefficientVector a = p.project(values);
  const Eigen::VectorXd grad = p.project(model.derivative_field(p.synthesize(a))).a;
  return std::abs(exact - a.a.dot(C.C * grad));
}

}  // namespace cylapprox
