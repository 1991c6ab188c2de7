#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cylapprox/basis.hpp"
#include "cylapprox/errors.hpp"
#include "cylapprox/grid.hpp"
#include "cylapprox/projection.hpp"
#include "cylapprox/spectrum.hpp"

namespace cylapprox {

/// A nonlinear functional F([theta]) on L2([0, 2pi]) with its Frechet
/// derivative and the L2 kernel (functional derivative) representing it:
///   F'([theta]) eta = (dF/dtheta, eta).
class FunctionalModel {
 public:
  virtual ~FunctionalModel() = default;

  virtual std::string_view name() const = 0;
  virtual double evaluate(const GridFunction& theta) const = 0;
  virtual GridFunction derivative_field(const GridFunction& theta) const = 0;

  virtual double frechet_apply(const GridFunction& theta, const GridFunction& eta) const {
    return inner_product(derivative_field(theta), eta);
  }

  /// An upper bound on sup |F|, when one is known.
  virtual std::optional<double> sup_bound() const { return std::nullopt; }

  /// Coordinates of `basis` that F([P_m theta]) actually depends on; nullopt means all.
  virtual std::optional<std::vector<std::size_t>> active_coordinates(const BasisSpec&) const {
    return std::nullopt;
  }
};

using ModelPtr = std::shared_ptr<const FunctionalModel>;

/// F([theta]) = int sin(x) sin^2(theta(x)) dx.
class SinSquaredModel final : public FunctionalModel {
 public:
  std::string_view name() const override { return "sinsq"; }

  double evaluate(const GridFunction& theta) const override {
    double acc = 0.0;
    for (std::size_t j = 0; j < theta.size(); ++j) {
      const double s = std::sin(theta.values[j]);
      acc += std::sin(theta.grid.node(j)) * s * s;
    }
    return theta.grid.weight() * acc;
  }

  double frechet_apply(const GridFunction& theta, const GridFunction& eta) const override {
    require_same_grid(theta, eta, "sinsq frechet_apply");
    double acc = 0.0;
    for (std::size_t j = 0; j < theta.size(); ++j) {
      acc += std::sin(theta.grid.node(j)) * std::sin(2.0 * theta.values[j]) * eta.values[j];
    }
    return theta.grid.weight() * acc;
  }

  GridFunction derivative_field(const GridFunction& theta) const override {
    GridFunction out(theta.grid);
    for (std::size_t j = 0; j < theta.size(); ++j) {
      out.values[j] = std::sin(theta.grid.node(j)) * std::sin(2.0 * theta.values[j]);
    }
    return out;
  }

  // int |sin x| dx = 4; the looser 2 pi is the bound quoted for the FDE initial condition
  std::optional<double> sup_bound() const override { return kTwoPi; }
};

/// F([theta]) = int sin^2(theta(x)) dx, invariant under translations of theta.
class SinSquaredInvariantModel final : public FunctionalModel {
 public:
  std::string_view name() const override { return "sinsq-invariant"; }

  double evaluate(const GridFunction& theta) const override {
    double acc = 0.0;
    for (double v : theta.values) {
      const double s = std::sin(v);
      acc += s * s;
    }
    return theta.grid.weight() * acc;
  }

  GridFunction derivative_field(const GridFunction& theta) const override {
    GridFunction out(theta.grid);
    for (std::size_t j = 0; j < theta.size(); ++j) out.values[j] = std::sin(2.0 * theta.values[j]);
    return out;
  }

  std::optional<double> sup_bound() const override { return kTwoPi; }
};

/// F([theta]) = pi / (pi + (theta, sin x)^2). A cylinder functional: on the
/// RealFourier basis it reduces to 1 / (1 + a_1^2), a_1 the sin(x)/sqrt(pi) coordinate.
class CauchySinModel final : public FunctionalModel {
 public:
  std::string_view name() const override { return "cauchy-sin"; }

  static double sin_moment(const GridFunction& theta) {
    double acc = 0.0;
    for (std::size_t j = 0; j < theta.size(); ++j) acc += std::sin(theta.grid.node(j)) * theta.values[j];
    return theta.grid.weight() * acc;
  }

  static double reduced(double a1) { return 1.0 / (1.0 + a1 * a1); }

  double evaluate(const GridFunction& theta) const override {
    const double p = sin_moment(theta);
    return std::numbers::pi / (std::numbers::pi + p * p);
  }

  GridFunction derivative_field(const GridFunction& theta) const override {
    const double p = sin_moment(theta);
    const double den = std::numbers::pi + p * p;
    const double scale = -2.0 * std::numbers::pi * p / (den * den);
    GridFunction out(theta.grid);
    for (std::size_t j = 0; j < theta.size(); ++j) out.values[j] = scale * std::sin(theta.grid.node(j));
    return out;
  }

  std::optional<double> sup_bound() const override { return 1.0; }

  std::optional<std::vector<std::size_t>> active_coordinates(const BasisSpec& basis) const override {
    if (basis.kind() != BasisKind::RealFourier) return std::nullopt;
    if (basis.max_harmonic() < 1) return std::vector<std::size_t>{};
    return std::vector<std::size_t>{fourier_index(1, true)};
  }
};

inline std::vector<std::string> model_names() { return {"sinsq", "sinsq-invariant", "cauchy-sin"}; }

inline ModelPtr make_model(std::string_view name) {
  if (name == "sinsq") return std::make_shared<SinSquaredModel>();
  if (name == "sinsq-invariant") return std::make_shared<SinSquaredInvariantModel>();
  if (name == "cauchy-sin") return std::make_shared<CauchySinModel>();
  throw InvalidArgument("unknown model '" + std::string(name) + "' (expected sinsq|sinsq-invariant|cauchy-sin)");
}

// Convenience entry points for the shipped sin(x) sin^2(theta) functional.

inline double eval_F(const GridFunction& theta) { return SinSquaredModel{}.evaluate(theta); }

inline double frechet_apply_F(const GridFunction& theta, const GridFunction& eta) {
  return SinSquaredModel{}.frechet_apply(theta, eta);
}

inline GridFunction derivative_field_F(const GridFunction& theta) { return SinSquaredModel{}.derivative_field(theta); }

/// F([theta], t) = F_0([theta(x - t)]), the exact solution of the advection Hopf equation.
inline double exact_fde_solution(const FunctionalModel& f0, const FourierSpectrum& theta, double t,
                                 const UniformGrid& grid) {
  return f0.evaluate(eval_on_grid(shift(theta, t), grid));
}

inline double exact_fde_solution(const FourierSpectrum& theta, double t, const UniformGrid& grid) {
  return exact_fde_solution(SinSquaredModel{}, theta, t, grid);
}

/// f(a) = F([sum_k a_k phi_k]): the restriction of a functional to D_m.
class CylindricalFunction {
 public:
  CylindricalFunction(ModelPtr model, Projector projector)
      : model_(std::move(model)), projector_(std::make_shared<const Projector>(std::move(projector))) {}

  CylindricalFunction(ModelPtr model, const BasisSpec& basis, const UniformGrid& quad)
      : CylindricalFunction(std::move(model), Projector(basis, quad)) {}

  const FunctionalModel& model() const noexcept { return *model_; }
  const Projector& projector() const noexcept { return *projector_; }
  const BasisSpec& basis() const noexcept { return projector_->basis(); }
  std::size_t dimension() const noexcept { return basis().size(); }

  double operator()(const Eigen::VectorXd& a) const { return model_->evaluate(synthesize(a)); }
  double operator()(const CoefficientVector& a) const { return model_->evaluate(projector_->synthesize(a)); }

  GridFunction synthesize(const Eigen::VectorXd& a) const {
    if (static_cast<std::size_t>(a.size()) != dimension()) {
      throw InvalidArgument("cylindrical function of dimension " + std::to_string(dimension()) + " called with " +
                            std::to_string(a.size()) + " coordinates");
    }
    return projector_->synthesize(CoefficientVector(basis(), a));
  }

  /// df/da_k = (dF/dtheta([P_m theta]), phi_k).
  Eigen::VectorXd gradient(const Eigen::VectorXd& a) const {
    const GridFunction field = model_->derivative_field(synthesize(a));
    return projector_->project(field).a;
  }

 private:
  ModelPtr model_;
  std::shared_ptr<const Projector> projector_;
};

inline Eigen::VectorXd gradient_wrt_coeffs(const CylindricalFunction& f, const CoefficientVector& a) {
  if (!(a.basis == f.basis())) throw InvalidArgument("gradient_wrt_coeffs: basis mismatch");
  return f.gradient(a.a);
}

inline Eigen::VectorXd gradient_wrt_coeffs(ModelPtr model, const BasisSpec& basis, const CoefficientVector& a,
                                           const UniformGrid& quad) {
  return gradient_wrt_coeffs(CylindricalFunction(std::move(model), basis, quad), a);
}

}  // namespace cylapprox
