#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cylapprox/basis.hpp"
#include "cylapprox/errors.hpp"
#include "cylapprox/functionals.hpp"
#include "cylapprox/spectrum.hpp"

namespace cylapprox {

/// Nodes and weights for E[g(Z)], Z ~ N(0, 1): sum_i w_i g(x_i), sum_i w_i = 1.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t order() const noexcept { return nodes.size(); }
};

namespace detail {

/// Orthonormal Hermite polynomials for the weight e^{-x^2}: returns (p_n(x), p_{n-1}(x)).
inline std::pair<double, double> hermite_orthonormal(std::size_t n, double x) {
  double prev = 0.0;
  double cur = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double next = std::sqrt(2.0 / (kk + 1.0)) * x * cur - std::sqrt(kk / (kk + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

}  // namespace detail

/// Gauss-Hermite rule in the probabilists' convention.
///
/// The classic rule integrates against e^{-x^2}: nodes are the eigenvalues of the
/// Jacobi matrix with off-diagonal sqrt(k/2) (Golub-Welsch), polished by Newton on
/// the orthonormal recurrence, with Christoffel weights 1 / (n p_{n-1}(x)^2).
/// Substituting x = a / sqrt(2) maps that to the weight e^{-a^2/2} / sqrt(2 pi):
/// nodes scale by sqrt(2) and weights by 1 / sqrt(pi).
inline GaussHermiteRule gauss_hermite(std::size_t order) {
  if (order == 0) throw InvalidArgument("gauss_hermite: order must be positive");
  const auto n = static_cast<Eigen::Index>(order);
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k) / 2.0);
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi, Eigen::EigenvaluesOnly);
  std::vector<double> x(eig.eigenvalues().data(), eig.eigenvalues().data() + n);

  for (double& xi : x) {
    for (int it = 0; it < 4; ++it) {
      const auto [pn, pn1] = detail::hermite_orthonormal(order, xi);
      const double dpn = std::sqrt(2.0 * static_cast<double>(order)) * pn1;
      if (dpn == 0.0) break;
      xi -= pn / dpn;
    }
  }
  std::sort(x.begin(), x.end());
  for (std::size_t i = 0; i < order / 2; ++i) {  // the rule is symmetric
    const double s = 0.5 * (x[order - 1 - i] - x[i]);
    x[i] = -s;
    x[order - 1 - i] = s;
  }
  if (order % 2 == 1) x[order / 2] = 0.0;

  GaussHermiteRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (std::size_t i = 0; i < order; ++i) {
    const auto [pn, pn1] = detail::hermite_orthonormal(order, x[i]);
    const double w = 1.0 / (static_cast<double>(order) * pn1 * pn1);
    rule.nodes[i] = std::sqrt(2.0) * x[i];
    rule.weights[i] = w / std::sqrt(std::numbers::pi);
  }
  return rule;
}

struct IntegralResult {
  double estimate = 0.0;
  double std_error = 0.0;  // 0 for deterministic quadrature
};

namespace detail {

inline void require_finite(double v, const char* who) {
  if (!std::isfinite(v)) throw NumericFailure(std::string(who) + ": non-finite integrand sample");
}

}  // namespace detail

inline constexpr std::size_t kMaxTensorDimensions = 6;

/// (2 pi)^{-d/2} int f(a) e^{-|a|^2/2} da by a tensor Gauss-Hermite rule over the
/// `active` coordinates; the integrand must not depend on the others, which are
/// pinned at 0 (the exact one-point rule for a constant direction).
template <class Fn>
IntegralResult integrate_gauss_hermite(const Fn& f, std::size_t dimension, const std::vector<std::size_t>& active,
                                       std::size_t order) {
  if (active.size() > kMaxTensorDimensions) {
    throw InvalidArgument("tensor Gauss-Hermite limited to " + std::to_string(kMaxTensorDimensions) +
                          " integrated coordinates, got " + std::to_string(active.size()));
  }
  for (std::size_t k : active) {
    if (k >= dimension) throw InvalidArgument("active coordinate out of range");
  }
  const GaussHermiteRule rule = gauss_hermite(order);
  Eigen::VectorXd a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension));
  std::vector<std::size_t> idx(active.size(), 0);
  double sum = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t i = 0; i < active.size(); ++i) {
      a[static_cast<Eigen::Index>(active[i])] = rule.nodes[idx[i]];
      w *= rule.weights[idx[i]];
    }
    const double v = f(static_cast<const Eigen::VectorXd&>(a));
    detail::require_finite(v, "integrate_gauss_hermite");
    sum += w * v;

    std::size_t d = 0;
    for (; d < idx.size(); ++d) {
      if (++idx[d] < order) break;
      idx[d] = 0;
    }
    if (d == idx.size()) break;
  }
  return {sum, 0.0};
}

inline constexpr std::size_t kMonteCarloBlock = 4096;

/// Plain Monte Carlo over all `dimension` coordinates. Block b of kMonteCarloBlock
/// samples draws from sub-stream (seed, MonteCarlo, b); block moments are merged
/// in block order, so the estimate does not depend on how blocks are scheduled.
template <class Fn>
IntegralResult integrate_monte_carlo(const Fn& f, std::size_t dimension, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw InvalidArgument("Monte Carlo needs at least 2 samples");
  Eigen::VectorXd a(static_cast<Eigen::Index>(dimension));
  double count = 0.0, mean = 0.0, m2 = 0.0;
  for (std::size_t block = 0; block * kMonteCarloBlock < samples; ++block) {
    Rng rng = Rng::substream(seed, StreamTag::MonteCarlo, block);
    const std::size_t n = std::min(kMonteCarloBlock, samples - block * kMonteCarloBlock);
    double b_mean = 0.0, b_m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < a.size(); ++k) a[k] = rng.normal();
      const double v = f(static_cast<const Eigen::VectorXd&>(a));
      detail::require_finite(v, "integrate_monte_carlo");
      const double delta = v - b_mean;
      b_mean += delta / static_cast<double>(i + 1);
      b_m2 += delta * (v - b_mean);
    }
    const double nb = static_cast<double>(n);
    const double delta = b_mean - mean;
    const double total = count + nb;
    mean += delta * nb / total;
    m2 += b_m2 + delta * delta * count * nb / total;
    count = total;
  }
  const double variance = m2 / (count - 1.0);
  return {mean, std::sqrt(variance / count)};
}

enum class IntegrationMethod { TensorGaussHermite, MonteCarlo };

inline const char* to_string(IntegrationMethod m) {
  return m == IntegrationMethod::TensorGaussHermite ? "gauss-hermite" : "monte-carlo";
}

inline IntegrationMethod parse_integration_method(const std::string& s) {
  if (s == "gauss-hermite" || s == "gh") return IntegrationMethod::TensorGaussHermite;
  if (s == "monte-carlo" || s == "mc") return IntegrationMethod::MonteCarlo;
  throw InvalidArgument("unknown integration method '" + s + "' (expected gh|mc)");
}

struct CylinderIntegralSpec {
  std::string model = "cauchy-sin";
  BasisSpec basis{BasisKind::RealFourier, 2};
  IntegrationMethod method = IntegrationMethod::TensorGaussHermite;
  std::size_t order = 64;         // Gauss-Hermite points per integrated coordinate
  std::size_t samples = 100000;   // Monte Carlo
  std::uint64_t seed = 0;
  std::optional<std::size_t> quad_points;  // grid used to synthesize P_m theta
};

/// Integral of F([P_m theta]) against the standard Gaussian product measure on D_m.
/// The integrand goes through the generic path: synthesize theta from a, then evaluate F.
inline IntegralResult integrate_cylinder(const CylinderIntegralSpec& spec) {
  const ModelPtr model = make_model(spec.model);
  const UniformGrid quad = make_grid(spec.quad_points.value_or(default_quadrature_points(spec.basis.m())));
  const CylindricalFunction f(model, spec.basis, quad);
  const std::size_t d = spec.basis.size();

  if (spec.method == IntegrationMethod::MonteCarlo) return integrate_monte_carlo(f, d, spec.samples, spec.seed);

  std::vector<std::size_t> active;
  if (auto declared = model->active_coordinates(spec.basis)) {
    active = *declared;
  } else {
    active.resize(d);
    std::iota(active.begin(), active.end(), std::size_t{0});
  }
  return integrate_gauss_hermite(f, d, active, spec.order);
}

/// |I(order) - I(order / 2)| for a Gauss-Hermite spec.
inline double gauss_hermite_doubling_delta(CylinderIntegralSpec spec) {
  if (spec.method != IntegrationMethod::TensorGaussHermite) {
    throw InvalidArgument("order doubling applies to Gauss-Hermite only");
  }
  const double fine = integrate_cylinder(spec).estimate;
  spec.order = std::max<std::size_t>(1, spec.order / 2);
  return std::abs(fine - integrate_cylinder(spec).estimate);
}

/// Closed form of the "cauchy-sin" integral: -sqrt(e pi / 2) (erf(sqrt(2)/2) - 1).
inline double cauchy_sin_reference() {
  return -std::sqrt(std::numbers::e * std::numbers::pi / 2.0) * (std::erf(std::sqrt(2.0) / 2.0) - 1.0);
}

struct DimensionCheck {
  std::vector<std::size_t> harmonics;
  std::vector<IntegralResult> results;
  double max_deviation = 0.0;
  /// max |I_i - I_j| / sqrt(se_i^2 + se_j^2) over pairs with nonzero error; 0 otherwise.
  double max_sigma = 0.0;
};

/// Integrates at each entry of `harmonics` via `integrate(h)` and compares pairwise.
template <class Integrator>
DimensionCheck dimension_independence_check(const Integrator& integrate, const std::vector<std::size_t>& harmonics) {
  DimensionCheck out;
  out.harmonics = harmonics;
  for (std::size_t h : harmonics) out.results.push_back(integrate(h));
  for (std::size_t i = 0; i < out.results.size(); ++i) {
    for (std::size_t j = i + 1; j < out.results.size(); ++j) {
      const double dev = std::abs(out.results[i].estimate - out.results[j].estimate);
      out.max_deviation = std::max(out.max_deviation, dev);
      const double se = std::hypot(out.results[i].std_error, out.results[j].std_error);
      if (se > 0.0) out.max_sigma = std::max(out.max_sigma, dev / se);
    }
  }
  return out;
}

/// Model version: each entry M of `harmonics` integrates over the RealFourier
/// basis with harmonics 1..M (2M + 1 coordinates); `base` supplies method settings.
inline DimensionCheck dimension_independence_check(const CylinderIntegralSpec& base,
                                                   const std::vector<std::size_t>& harmonics) {
  return dimension_independence_check(
      [&](std::size_t h) {
        CylinderIntegralSpec s = base;
        s.basis = BasisSpec(BasisKind::RealFourier, 2 * h);
        return integrate_cylinder(s);
      },
      harmonics);
}

}  // namespace cylapprox
