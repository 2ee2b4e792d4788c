#include <random>

#include <gtest/gtest.h>

#include "symcap/closed_curve.hpp"

using namespace symcap;

namespace {

Matrix random_coefficients(Eigen::Index d, int modes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix c(d, 2 * modes + 1);
  for (Eigen::Index j = 0; j < c.cols(); ++j)
    for (Eigen::Index i = 0; i < d; ++i) c(i, j) = n(rng) / static_cast<double>(1 + (j + 1) / 2);
  return c;
}

SymplecticSpace skewed_space() {
  Matrix j0(4, 4);
  j0 << 0, -2, 0.5, 0.1, 2, 0, -0.3, 1, -0.5, 0.3, 0, -1.5, -0.1, -1, 1.5, 0;
  return SymplecticSpace::from_form(j0.transpose());
}

// Signed area enclosed by a planar loop, by the shoelace formula on dense samples.
double shoelace(const ClosedCurve& c, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vector a = c(static_cast<double>(i) / n);
    const Vector b = c(static_cast<double>(i + 1) / n);
    s += a(0) * b(1) - a(1) * b(0);
  }
  return 0.5 * s;
}

}  // namespace

TEST(ClosedCurveTest, ValidatesShape) {
  EXPECT_THROW(ClosedCurve(Matrix::Zero(2, 4), 16), InvalidInput);
  EXPECT_THROW(ClosedCurve(Matrix::Zero(2, 9), 15), InvalidInput);  // M < 4K
  Matrix bad = Matrix::Zero(2, 3);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(ClosedCurve(bad, 8), InvalidInput);
  EXPECT_NO_THROW(ClosedCurve(Matrix::Zero(2, 9), 16));
}

TEST(ClosedCurveTest, SpectralDerivativeMatchesFiniteDifferences) {
  const ClosedCurve c(random_coefficients(3, 5, 1), 32);
  const double h = 1e-6;
  for (double t : {0.0, 0.13, 0.5, 0.91}) {
    const Vector fd = (c(t + h) - c(t - h)) / (2 * h);
    EXPECT_LE((fd - c.derivative(t)).norm(), 1e-6 * c.derivative(t).norm());
  }
  const Matrix samples = c.derivative_samples();
  EXPECT_LE((samples.col(3) - c.derivative(3.0 / 32)).norm(), 1e-12);
}

TEST(ClosedCurveTest, SampleProjectionRoundTrips) {
  const ClosedCurve c(random_coefficients(2, 6, 2), 32);
  const auto back = ClosedCurve::from_samples(c.samples(), 6, 32);
  EXPECT_LE(inf_norm(back.coefficients() - c.coefficients()), 1e-12);
  EXPECT_THROW((void)ClosedCurve::from_samples(Matrix::Zero(2, 10), 6, 32), InvalidInput);
}

TEST(Action, PositiveCircleHasAreaPiRSquared) {
  const auto space = SymplecticSpace::canonical(2);
  Vector x0 = Vector::Zero(4);
  x0(1) = 1.0;
  for (double r : {0.5, 1.0, 3.0}) {
    EXPECT_NEAR(action(primal_circle(r * x0, space, 4, 16), space), kPi * r * r, 1e-12);
    // the opposite orientation e^{-2πtJ}x0 has negative action
    const auto reversed = ClosedCurve::harmonic(r * x0, -r * space.complex_structure() * x0, 1, 4, 16);
    EXPECT_NEAR(action(reversed, space), -kPi * r * r, 1e-12);
  }
}

TEST(Action, ConstantCurveHasZeroAction) {
  const auto space = SymplecticSpace::canonical(1);
  Matrix c = Matrix::Zero(2, 9);
  c.col(0) << 3.0, -2.0;
  EXPECT_EQ(action(ClosedCurve(c, 16), space), 0.0);
  EXPECT_EQ(dual_action(ClosedCurve(c, 16), space), 0.0);
}

TEST(Action, PlanarActionIsShoelaceArea) {
  const auto space = SymplecticSpace::canonical(1);
  // figure-eight: two lobes of opposite orientation
  Matrix eight = Matrix::Zero(2, 9);
  eight(0, 2) = 1.0;  // sin 2πt
  eight(1, 4) = 0.5;  // ½ sin 4πt
  const ClosedCurve fig(eight, 16);
  EXPECT_NEAR(shoelace(fig, 20000), 0.0, 1e-9);
  EXPECT_NEAR(action(fig, space), 0.0, 1e-14);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ClosedCurve c(random_coefficients(2, 4, seed), 16);
    EXPECT_NEAR(action(c, space), shoelace(c, 20000), 1e-6);
  }
}

TEST(Action, InvariantUnderTranslationScalingAndSymplecticMaps) {
  const auto space = skewed_space();
  const ClosedCurve c(random_coefficients(4, 6, 3), 32);
  const double a = action(c, space);
  Vector v(4);
  v << 1, -2, 0.5, 3;
  EXPECT_NEAR(action(c.translated(v), space), a, 1e-10);
  EXPECT_NEAR(action(c.scaled(3.0), space), 9.0 * a, 1e-10 * std::abs(9 * a));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto phi = random_symplectic(space, seed, 0.7);
    EXPECT_NEAR(action(c.mapped(phi.matrix()), space), a, 1e-10 * std::max(1.0, std::abs(a)) * 10);
  }
}

TEST(DualAction, DualCircleHasActionPiNormSquared) {
  for (const auto& space : {SymplecticSpace::canonical(2), skewed_space()}) {
    Vector xi0(4);
    xi0 << 0.3, -1.0, 0.2, 0.7;
    const auto c = dual_circle(xi0, space, 3, 12);
    EXPECT_NEAR(dual_action(c, space), kPi * std::pow(space.dual_norm(xi0), 2), 1e-12);
  }
}

TEST(DualAction, MinusOmegaCarriesActionToDualAction) {
  for (const auto& space : {SymplecticSpace::canonical(2), skewed_space()}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const ClosedCurve x(random_coefficients(4, 5, 10 + seed), 20);
      const ClosedCurve xi = x.mapped(-space.omega());
      EXPECT_NEAR(dual_action(xi, space), action(x, space), 1e-10 * std::max(1.0, std::abs(action(x, space))));
    }
  }
}

TEST(DualAction, GradientMatchesFiniteDifferences) {
  const auto space = skewed_space();
  const Matrix c = random_coefficients(4, 3, 7);
  const Matrix g = dual_action_gradient(c, space);
  const double h = 1e-6;
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      Matrix cp = c, cm = c;
      cp(i, j) += h;
      cm(i, j) -= h;
      const double fd =
          (dual_action(ClosedCurve(cp, 12), space) - dual_action(ClosedCurve(cm, 12), space)) / (2 * h);
      EXPECT_NEAR(g(i, j), fd, 1e-7);
    }
}

TEST(Action, DimensionMismatchThrows) {
  const auto space = SymplecticSpace::canonical(2);
  EXPECT_THROW((void)action(ClosedCurve::zero(2, 2, 8), space), DimensionMismatch);
  EXPECT_THROW((void)dual_action(ClosedCurve::zero(6, 2, 8), space), DimensionMismatch);
}

TEST(ClosedCurveTest, ModeEnergyAndResampling) {
  const auto space = SymplecticSpace::canonical(1);
  const auto c = dual_circle((Vector(2) << 1, 0).finished(), space, 4, 16);
  const auto e = c.mode_energy();
  ASSERT_EQ(e.size(), 4u);
  EXPECT_DOUBLE_EQ(e[0], 1.0);
  const auto padded = c.with_modes(8, 32);
  EXPECT_EQ(padded.modes(), 8);
  EXPECT_NEAR(dual_action(padded, space), dual_action(c, space), 1e-14);
}
