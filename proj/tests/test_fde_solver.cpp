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

CoefficientMatrix matrix_for(BasisKind kind, std::size_t m) {
  return assemble_C(BasisSpec(kind, m), make_grid(default_quadrature_points(m)));
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

FourierSpectrum band_limited(std::size_t harmonics, std::uint64_t seed) { return random_spectrum(harmonics, seed); }

}  // namespace

TEST(AssembleC, SkewSymmetric) {
  for (BasisKind kind : {BasisKind::TrigCardinal, BasisKind::RealFourier}) {
    for (std::size_t m : {2, 8, 16, 32, 64, 128}) {
      const CoefficientMatrix C = matrix_for(kind, m);
      EXPECT_LE(max_abs(C.C + C.C.transpose()), 1e-10) << to_string(kind) << " m=" << m;
      EXPECT_LE(C.C.diagonal().cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(AssembleC, RealFourierBlocks) {
  const std::size_t harmonics = 5;
  const CoefficientMatrix C = matrix_for(BasisKind::RealFourier, 2 * harmonics);
  EXPECT_LE(C.C.row(0).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LE(C.C.col(0).cwiseAbs().maxCoeff(), 1e-13);
  for (std::size_t k = 1; k <= harmonics; ++k) {
    const auto s = static_cast<Eigen::Index>(fourier_index(k, true));
    const auto c = static_cast<Eigen::Index>(fourier_index(k, false));
    // (cos kx, d/dx sin kx) / pi = k
    EXPECT_NEAR(C.C(c, s), double(k), 1e-12);
    EXPECT_NEAR(C.C(s, c), -double(k), 1e-12);
  }
  Eigen::MatrixXd off = C.C;
  for (std::size_t k = 1; k <= harmonics; ++k) {
    off(static_cast<Eigen::Index>(fourier_index(k, false)), static_cast<Eigen::Index>(fourier_index(k, true))) = 0;
    off(static_cast<Eigen::Index>(fourier_index(k, true)), static_cast<Eigen::Index>(fourier_index(k, false))) = 0;
  }
  EXPECT_LE(max_abs(off), 1e-12);
}

TEST(AssembleC, RequiresOversampledQuadrature) {
  EXPECT_THROW(assemble_C(BasisSpec(BasisKind::TrigCardinal, 64), make_grid(64)), InvalidArgument);
}

TEST(MatrixExponential, IdentityAtZero) {
  const CoefficientMatrix C = matrix_for(BasisKind::TrigCardinal, 16);
  EXPECT_LE(max_abs(matrix_exponential(C, 0.0).E - Eigen::MatrixXd::Identity(17, 17)), 1e-15);
}

TEST(MatrixExponential, RotationBlocks) {
  const CoefficientMatrix C = matrix_for(BasisKind::RealFourier, 6);
  const double t = 0.83;
  const Eigen::MatrixXd E = matrix_exponential(C, t).E;
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto s = static_cast<Eigen::Index>(fourier_index(k, true));
    const auto c = static_cast<Eigen::Index>(fourier_index(k, false));
    const double angle = double(k) * t;
    // C restricted to (sin, cos) is [[0, -k], [k, 0]]
    EXPECT_NEAR(E(s, s), std::cos(angle), 1e-12);
    EXPECT_NEAR(E(c, c), std::cos(angle), 1e-12);
    EXPECT_NEAR(E(s, c), -std::sin(angle), 1e-12);
    EXPECT_NEAR(E(c, s), std::sin(angle), 1e-12);
  }
  EXPECT_NEAR(E(0, 0), 1.0, 1e-14);
}

TEST(MatrixExponential, FullPeriodIsIdentity) {
  for (std::size_t m : {4, 16, 64}) {
    const CoefficientMatrix C = matrix_for(BasisKind::RealFourier, m);
    EXPECT_LE(max_abs(matrix_exponential(C, kTwoPi).E - Eigen::MatrixXd::Identity(C.C.rows(), C.C.cols())), 1e-8);
  }
}

TEST(MatrixExponential, OrthogonalIsometricAndSemigroup) {
  for (BasisKind kind : {BasisKind::TrigCardinal, BasisKind::RealFourier}) {
    for (std::size_t m : {8, 32, 128}) {
      const CoefficientMatrix C = matrix_for(kind, m);
      const auto I = Eigen::MatrixXd::Identity(C.C.rows(), C.C.cols());
      for (double t : {0.4, kPi, kTwoPi}) {
        const Eigen::MatrixXd E = matrix_exponential(C, t).E;
        EXPECT_LE(max_abs(E.transpose() * E - I), 1e-9) << to_string(kind) << " m=" << m << " t=" << t;
      }
      const Eigen::MatrixXd product = matrix_exponential(C, 0.7).E * matrix_exponential(C, 1.9).E;
      EXPECT_LE(max_abs(product - matrix_exponential(C, 2.6).E), 1e-8);

      const Eigen::VectorXd a = Eigen::VectorXd::LinSpaced(C.C.rows(), -1.0, 2.0);
      EXPECT_NEAR(matrix_exponential(C, 1.3).propagate(a).norm(), a.norm(), 1e-9);
    }
  }
}

TEST(MatrixExponential, NonFiniteInputThrows) {
  CoefficientMatrix C = matrix_for(BasisKind::RealFourier, 4);
  EXPECT_THROW(matrix_exponential(C, std::nan("")), NumericFailure);
  C.C(1, 2) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(matrix_exponential(C, 1.0), NumericFailure);
}

TEST(Propagation, ReproducesShiftOnTheSubspace) {
  for (BasisKind kind : {BasisKind::TrigCardinal, BasisKind::RealFourier}) {
    const std::size_t m = 16;
    const BasisSpec basis(kind, m);
    const UniformGrid g = make_grid(default_quadrature_points(m));
    const CoefficientMatrix C = assemble_C(basis, g);
    const FourierSpectrum theta = band_limited(m / 2, 41);
    const CoefficientVector a = project(theta, basis, g);
    for (double t : {0.5, kPi, 4.2}) {
      const CoefficientVector moved(basis, matrix_exponential(C, t).propagate(a.a));
      const GridFunction got = synthesize(moved, g);
      const GridFunction want = eval_on_grid(shift(theta, t), g);
      for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(got.values[j], want.values[j], 1e-8);
    }
  }
}

TEST(SolveCylindrical, MatchesExactSolutionOnTheSubspace) {
  const std::size_t m = 20;
  const BasisSpec basis(BasisKind::TrigCardinal, m);
  const UniformGrid g = make_grid(default_quadrature_points(m));
  const CoefficientMatrix C = assemble_C(basis, g);
  const CylindricalFunction f0(make_model("sinsq"), basis, g);
  const FourierSpectrum theta = band_limited(m / 2, 5);
  const CoefficientVector a = project(theta, basis, g);
  EXPECT_NEAR(solve_cylindrical(f0, C, a, 0.0), f0(a), 1e-14);
  for (double t : {0.3, 1.0, kPi, 5.5}) {
    EXPECT_NEAR(solve_cylindrical(f0, C, a, t), exact_fde_solution(theta, t, g), 1e-10) << "t=" << t;
  }
}

TEST(SolveCylindrical, PeriodicAndStable) {
  const BasisSpec basis(BasisKind::RealFourier, 16);
  const UniformGrid g = exact_grid(60, 16);
  const CoefficientMatrix C = assemble_C(basis, g);
  const CylindricalFunction f0(make_model("sinsq"), basis, g);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CoefficientVector a = project(random_spectrum(60, seed, 3.0), basis, g);
    EXPECT_NEAR(solve_cylindrical(f0, C, a, kTwoPi), f0(a), 1e-8);
    for (double t : {0.0, 1.0, 2.0, 3.0}) EXPECT_LE(std::abs(solve_cylindrical(f0, C, a, t)), kTwoPi);
  }
}

TEST(SolveCylindrical, DimensionAndBasisChecks) {
  const BasisSpec basis(BasisKind::RealFourier, 4);
  const UniformGrid g = make_grid(256);
  const CoefficientMatrix C = assemble_C(basis, g);
  const CylindricalFunction f0(make_model("sinsq"), basis, g);
  const CoefficientVector other(BasisSpec(BasisKind::TrigCardinal, 4), Eigen::VectorXd::Zero(5));
  EXPECT_THROW(solve_cylindrical(f0, C, other, 1.0), InvalidArgument);
  EXPECT_THROW(matrix_exponential(C, 1.0).propagate(Eigen::VectorXd::Zero(3)), InvalidArgument);
}

TEST(PdeResidual, SmallForRandomPoints) {
  const BasisSpec basis(BasisKind::TrigCardinal, 8);
  const UniformGrid g = make_grid(default_quadrature_points(8));
  const CoefficientMatrix C = assemble_C(basis, g);
  const CylindricalFunction f0(make_model("sinsq"), basis, g);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Rng rng(seed);
    Eigen::VectorXd a(9);
    for (auto& v : a) v = rng.uniform(-1.0, 1.0);
    const double t = rng.uniform(0.0, kTwoPi);
    const double r4 = verify_pde_residual(f0, C, a, t, 1e-4);
    EXPECT_LE(r4, 1e-5);
    const double r2 = verify_pde_residual(f0, C, a, t, 1e-2);
    const double r3 = verify_pde_residual(f0, C, a, t, 1e-3);
    // O(h^2): a tenfold smaller step shrinks the residual by about 100
    EXPECT_GT(r2 / r3, 50.0);
    EXPECT_LT(r2 / r3, 200.0);
  }
}

TEST(PdeResidual, ConstantAndLinearInitialData) {
  const BasisSpec basis(BasisKind::RealFourier, 6);
  const CoefficientMatrix C = assemble_C(basis, make_grid(256));
  Eigen::VectorXd a(7);
  a << 0.3, -1.0, 0.5, 2.0, 0.1, -0.7, 1.2;
  const auto flat = [](const Eigen::VectorXd&) { return 4.0; };
  EXPECT_LE(verify_pde_residual(flat, C, a, 1.1, 1e-4), 1e-12);

  // Linear f0: df/da = w exactly, so the only error is the O(h^2 |C|^3) time difference;
  // one harmonic keeps |C| = 1.
  const CoefficientMatrix C1 = assemble_C(BasisSpec(BasisKind::RealFourier, 2), make_grid(256));
  Eigen::VectorXd a1(3), w(3);
  a1 << 0.3, -0.6, 0.5;
  w << 0.4, 0.8, -0.5;
  const auto linear = [&w](const Eigen::VectorXd& x) { return w.dot(x); };
  EXPECT_LE(verify_pde_residual(linear, C1, a1, 0.0, 1e-4), 1e-8);
  EXPECT_THROW(verify_pde_residual(linear, C1, a1, 0.0, 0.0), InvalidArgument);
}

TEST(ResidualTail, VanishesOnTheSubspace) {
  const std::size_t m = 16;
  const BasisSpec basis(BasisKind::TrigCardinal, m);
  const UniformGrid g = make_grid(1024);
  EXPECT_LE(residual_tail(SinSquaredModel{}, band_limited(m / 2, 3), basis, g), 1e-10);
}

TEST(ResidualTail, NonIncreasingAndTruncationStable) {
  SpectrumLaw law;
  law.kind = SpectrumKind::Exponential;
  law.param = 1.5;
  law.max_mode = 200;
  law.seed = 2;
  const FourierSpectrum theta = sample_spectrum(law, StreamTag::Theta, 0);
  const UniformGrid g = make_grid(2048);
  const SinSquaredModel model;

  double previous = std::numeric_limits<double>::infinity();
  double previous_defect = std::numeric_limits<double>::infinity();
  for (std::size_t m : {8, 16, 32, 64}) {
    const BasisSpec basis(BasisKind::TrigCardinal, m);
    const double tail = residual_tail(model, theta, basis, g);
    EXPECT_LE(tail, previous + 1e-9) << "m=" << m;
    previous = tail;

    const double defect = consistency_defect(model, theta, assemble_C(basis, g), g);
    EXPECT_LT(defect, previous_defect) << "m=" << m;
    previous_defect = defect;
  }
  EXPECT_LT(previous_defect, 1e-6);

  const BasisSpec b32(BasisKind::TrigCardinal, 32);
  const double base = residual_tail(model, theta, b32, default_tail_modes(b32), g);
  const double doubled = residual_tail(model, theta, b32, 2 * default_tail_modes(b32), g);
  EXPECT_LE(std::abs(doubled - base), 0.1 * base + 1e-10);
}

TEST(ResidualTail, RejectsUnresolvedTail) {
  const BasisSpec basis(BasisKind::TrigCardinal, 64);
  EXPECT_THROW(residual_tail(SinSquaredModel{}, band_limited(4, 1), basis, 1000, make_grid(default_quadrature_points(64))),
               InvalidArgument);
}
