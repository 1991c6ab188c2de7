#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cylapprox/cylapprox.hpp"
#include "test_support.hpp"

using namespace cylapprox;
using cylapprox::testing::exact_grid;
using cylapprox::testing::random_spectrum;

namespace {

constexpr double kPi = std::numbers::pi;

// F(1 + sin x), frozen from a 50-digit evaluation of the integral.
constexpr double kFOfOnePlusSin = 1.64749637520547023375100321806;

SpectrumLaw law_of(SpectrumKind kind, double param, std::size_t modes, std::uint64_t seed) {
  SpectrumLaw law;
  law.kind = kind;
  law.param = param;
  law.max_mode = modes;
  law.seed = seed;
  return law;
}

GridFunction constant(const UniformGrid& g, double c) {
  return sample(g, [c](double) { return c; });
}

}  // namespace

TEST(EvalF, ClosedFormValues) {
  const UniformGrid g = make_grid(256);
  EXPECT_EQ(eval_F(constant(g, 0.0)), 0.0);
  EXPECT_NEAR(eval_F(constant(g, kPi / 2)), 0.0, 1e-13);
  EXPECT_NEAR(eval_F(sample(g, [](double x) { return std::sin(x); })), 0.0, 1e-10);
}

TEST(EvalF, RegressionOnePlusSin) {
  const auto f = [](double x) { return 1.0 + std::sin(x); };
  EXPECT_NEAR(eval_F(sample(make_grid(8192), f)), kFOfOnePlusSin, 1e-13);
  EXPECT_NEAR(eval_F(sample(make_grid(256), f)), kFOfOnePlusSin, 1e-12);
}

TEST(FrechetApply, ZeroAtZeroTheta) {
  const UniformGrid g = make_grid(128);
  const GridFunction eta = eval_on_grid(random_spectrum(10, 3), g);
  EXPECT_EQ(frechet_apply_F(constant(g, 0.0), eta), 0.0);
}

TEST(FrechetApply, CentralDifferencesWithRichardsonRatio) {
  const UniformGrid g = make_grid(256);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GridFunction theta = eval_on_grid(random_spectrum(12, 100 + seed), g);
    const GridFunction eta = eval_on_grid(random_spectrum(12, 200 + seed), g);
    const double exact = frechet_apply_F(theta, eta);
    auto fd = [&](double h) { return (eval_F(theta + h * eta) - eval_F(theta - h * eta)) / (2 * h); };
    const double e3 = std::abs(fd(1e-3) - exact);
    const double e4 = std::abs(fd(1e-4) - exact);
    EXPECT_LT(e3, 1e-4 * std::max(1.0, std::abs(exact)));
    const double ratio = e3 / e4;
    EXPECT_GE(ratio, 50.0) << "seed " << seed;
    EXPECT_LE(ratio, 200.0) << "seed " << seed;
  }
}

TEST(FrechetApply, NormBound) {
  const UniformGrid g = make_grid(512);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto law = law_of(SpectrumKind::Algebraic, 2.0, 100, 77);
    const GridFunction theta = eval_on_grid(sample_spectrum(law, StreamTag::Theta, s), g);
    const GridFunction eta = eval_on_grid(sample_spectrum(law, StreamTag::Eta, s), g);
    EXPECT_LE(std::abs(frechet_apply_F(theta, eta)), std::sqrt(kPi) * l2_norm(eta) * (1 + 1e-12));
  }
}

TEST(FrechetApply, LinearInEta) {
  const UniformGrid g = make_grid(128);
  const GridFunction theta = eval_on_grid(random_spectrum(8, 1), g);
  const GridFunction e1 = eval_on_grid(random_spectrum(8, 2), g);
  const GridFunction e2 = eval_on_grid(random_spectrum(8, 3), g);
  const double lhs = frechet_apply_F(theta, 2.5 * e1 + (-1.5) * e2);
  const double rhs = 2.5 * frechet_apply_F(theta, e1) - 1.5 * frechet_apply_F(theta, e2);
  EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, std::abs(rhs)));
}

TEST(FrechetApply, MismatchedGridsThrow) {
  EXPECT_THROW(frechet_apply_F(constant(make_grid(16), 1.0), constant(make_grid(32), 1.0)), InvalidArgument);
}

TEST(DerivativeField, ClosedForms) {
  const UniformGrid g = make_grid(64);
  for (double v : derivative_field_F(constant(g, 0.0)).values) EXPECT_EQ(v, 0.0);
  const GridFunction f = derivative_field_F(constant(g, kPi / 4));
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(f.values[j], std::sin(g.node(j)), 1e-15);
}

TEST(DerivativeField, RieszConsistencyForEveryModel) {
  const UniformGrid g = make_grid(512);
  const auto law = law_of(SpectrumKind::Algebraic, 1.5, 200, 5);
  for (const auto& name : model_names()) {
    const ModelPtr model = make_model(name);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const GridFunction theta = eval_on_grid(sample_spectrum(law, StreamTag::Theta, s), g);
      const GridFunction eta = eval_on_grid(sample_spectrum(law, StreamTag::Eta, s), g);
      const double direct = model->frechet_apply(theta, eta);
      const double riesz = inner_product(model->derivative_field(theta), eta);
      EXPECT_NEAR(direct, riesz, 1e-9 * std::max(1.0, std::abs(riesz))) << name;
    }
  }
}

TEST(DerivativeField, ConvergesUnderProjection) {
  ExperimentConfig c;
  c.law = law_of(SpectrumKind::Exponential, 2.0, 200, 0);
  c.n_theta_samples = 20;
  c.m_values = {8, 16, 32, 64};
  c.seed = 21;
  const auto records = run_derivative_field_convergence(c);
  for (std::size_t i = 1; i < records.size(); ++i) EXPECT_LE(records[i].error, records[i - 1].error * 1.05);
  EXPECT_LT(records.back().error, 1e-3);
}

TEST(Models, RegistryAndValues) {
  const UniformGrid g = make_grid(256);
  EXPECT_THROW(make_model("nope"), InvalidArgument);
  for (const auto& name : model_names()) EXPECT_EQ(make_model(name)->name(), name);

  // sinsq-invariant: int sin^2(theta) dx
  EXPECT_NEAR(make_model("sinsq-invariant")->evaluate(constant(g, kPi / 2)), kTwoPi, 1e-12);
  // cauchy-sin: pi / (pi + (theta, sin x)^2); theta = c sin x gives (theta, sin x) = c pi
  const GridFunction theta = sample(g, [](double x) { return 0.5 * std::sin(x); });
  EXPECT_NEAR(make_model("cauchy-sin")->evaluate(theta), kPi / (kPi + 0.25 * kPi * kPi), 1e-12);
}

TEST(ExactFdeSolution, InitialConditionAndPeriod) {
  const UniformGrid g = exact_grid(30, 0);
  const FourierSpectrum s = random_spectrum(30, 9);
  const double f0 = eval_F(eval_on_grid(s, g));
  EXPECT_EQ(exact_fde_solution(s, 0.0, g), f0);
  EXPECT_NEAR(exact_fde_solution(s, kTwoPi, g), f0, 1e-10);

  FourierSpectrum flat(0);
  flat.c[0] = 0.7;
  for (double t : {0.0, 1.0, 2.0, kPi}) EXPECT_NEAR(exact_fde_solution(flat, t, g), 0.0, 1e-13);
}

TEST(ExactFdeSolution, TranslationInvariantModelIsConstant) {
  const UniformGrid g = make_grid(1024);
  const FourierSpectrum s = random_spectrum(8, 12, 0.3);
  const SinSquaredInvariantModel model;
  const double f0 = exact_fde_solution(model, s, 0.0, g);
  for (double t : {0.3, 1.1, kPi, 5.0}) EXPECT_NEAR(exact_fde_solution(model, s, t, g), f0, 1e-10);
}

TEST(CylindricalFunction, RestrictsTheModel) {
  const BasisSpec basis(BasisKind::TrigCardinal, 16);
  const UniformGrid g = exact_grid(40, 16);
  const FourierSpectrum s = random_spectrum(40, 4);
  const CylindricalFunction f(make_model("sinsq"), basis, g);
  const CoefficientVector a = project(s, basis, g);
  const GridFunction projected = synthesize(a, g);
  EXPECT_NEAR(f(a), eval_F(projected), 1e-13);
  EXPECT_NEAR(f(a.a), eval_F(projected), 1e-13);
  EXPECT_THROW(f(Eigen::VectorXd::Zero(3)), InvalidArgument);
}

TEST(Gradient, ZeroAtOrigin) {
  const BasisSpec basis(BasisKind::TrigCardinal, 8);
  const UniformGrid g = make_grid(default_quadrature_points(8));
  const Eigen::VectorXd grad =
      gradient_wrt_coeffs(make_model("sinsq"), basis, CoefficientVector(basis, Eigen::VectorXd::Zero(9)), g);
  EXPECT_EQ(grad.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Gradient, MatchesFiniteDifferencesAndEulerIdentity) {
  for (BasisKind kind : {BasisKind::TrigCardinal, BasisKind::RealFourier}) {
    const BasisSpec basis(kind, 12);
    const UniformGrid g = exact_grid(30, 12);
    const CylindricalFunction f(make_model("sinsq"), basis, g);
    const CoefficientVector a = project(random_spectrum(30, 31), basis, g);
    const Eigen::VectorXd grad = gradient_wrt_coeffs(f, a);

    const double h = 1e-4;
    for (Eigen::Index k = 0; k < a.a.size(); ++k) {
      Eigen::VectorXd up = a.a, down = a.a;
      up[k] += h;
      down[k] -= h;
      EXPECT_NEAR(grad[k], (f(up) - f(down)) / (2 * h), 1e-6) << to_string(kind) << " k=" << k;
    }

    const GridFunction projected = synthesize(a, g);
    EXPECT_NEAR(a.a.dot(grad), frechet_apply_F(projected, projected), 1e-9);
  }
}

TEST(MeanValueBound, HoldsOnSampledEnsemble) {
  const auto law = law_of(SpectrumKind::Algebraic, 1.5, 300, 13);
  const UniformGrid g = exact_grid(300, 64);
  for (std::size_t m : {8, 16, 32, 64}) {
    const Projector p(BasisSpec(BasisKind::TrigCardinal, m), g);
    for (std::uint64_t s = 0; s < 20; ++s) {
      const GridFunction theta = eval_on_grid(sample_spectrum(law, StreamTag::Theta, s), g);
      const GridFunction projected = p.synthesize(p.project(theta));
      const double lhs = std::abs(eval_F(theta) - eval_F(projected));
      EXPECT_LE(lhs, std::sqrt(kPi) * l2_norm(theta - projected) + 1e-9) << "m=" << m;
    }
  }
}
