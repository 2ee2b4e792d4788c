#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace symcap;

namespace {

struct NamedBody {
  std::string name;
  SymplecticSpace space;
  ConvexBody body;
  bool smooth;
};

SymplecticSpace skewed_space() {
  Matrix j0(4, 4);
  j0 << 0, -2, 0.5, 0.1, 2, 0, -0.3, 1, -0.5, 0.3, 0, -1.5, -0.1, -1, 1.5, 0;
  return SymplecticSpace::from_form(j0.transpose());
}

Matrix cross_polytope_4d() {
  Matrix v(4, 9);
  v << 1.2, -1, 0, 0, 0, 0, 0, 0, 0.5,
       0, 0, 1, -0.8, 0, 0, 0, 0, 0.5,
       0, 0, 0, 0, 1.1, -1, 0, 0, 0.5,
       0, 0, 0, 0, 0, 0, 0.9, -1, 0.5;
  return v;
}

std::vector<NamedBody> all_bodies() {
  std::mt19937_64 rng(123);
  const auto c1 = SymplecticSpace::canonical(1);
  const auto c2 = SymplecticSpace::canonical(2);
  const auto sk = skewed_space();
  std::vector<NamedBody> out;
  out.push_back({"ball", c2, ball(c2, 1.3), true});
  out.push_back({"ball_skewed", sk, ball(sk), true});
  out.push_back({"ellipsoid", c2, ellipsoid(oracle::random_spd(4, 0.5, 3.0, rng), c2), true});
  out.push_back({"ellipsoid_skewed", sk, ellipsoid(oracle::random_spd(4, 0.5, 3.0, rng), sk), true});
  out.push_back({"square", c1, smoothed_polytope(oracle::square_vertices(), 0.05, c1), false});
  out.push_back({"hexagon", c1, smoothed_polytope(oracle::random_hexagon(4), 0.01, c1), false});
  out.push_back({"polytope4", c2, smoothed_polytope(cross_polytope_4d(), 0.02, c2), false});
  out.push_back({"image", c2, linear_image(random_symplectic(c2, 3, 0.6), ellipsoid(oracle::random_spd(4, 0.5, 2.0, rng), c2)), true});
  Vector v(4);
  v << 0.2, -0.1, 0.15, 0.05;
  out.push_back({"translate", c2, translate(ellipsoid(oracle::complex_diagonal({1.0, 2.0}), c2), v), true});
  out.push_back({"scale", c2, scale(ball(c2), 0.7), true});
  out.push_back({"translated_square", c1, translate(smoothed_polytope(oracle::square_vertices(), 0.05, c1), (Vector(2) << 0.3, -0.2).finished()), false});
  return out;
}

// Top-two vertex scores differ clearly: ξ is away from the tie set of the polytope support.
bool off_ties(const ConvexBody& body, const Vector& xi) {
  if (!body.vertices()) return true;
  Vector s = body.vertices()->transpose() * xi;
  std::sort(s.data(), s.data() + s.size(), std::greater<>());
  return s(0) - s(1) > 1e-2 * xi.norm();
}

}  // namespace

TEST(Ball, GaugeAndSupport) {
  const auto space = SymplecticSpace::canonical(2);
  Vector e = Vector::Zero(4);
  e(1) = 1.0;
  EXPECT_DOUBLE_EQ(ball(space).gauge(e), 1.0);
  EXPECT_DOUBLE_EQ(ball(space, 2.0).support(e), 2.0);
  EXPECT_EQ(ball(space, 2.0).inradius(), 2.0);
  EXPECT_THROW((void)ball(space, 0.0), InvalidInput);
  EXPECT_THROW((void)ball(space, -1.0), InvalidInput);
}

TEST(Ball, LegendreRoundTrip) {
  const auto space = SymplecticSpace::canonical(2);
  const auto b = ball(space, 1.7);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const Vector x = oracle::gaussian(4, rng);
    EXPECT_LE((b.dual_hamiltonian_gradient(b.hamiltonian_gradient(x)) - x).norm(), 1e-10 * x.norm());
  }
}

TEST(Ellipsoid, IdentityMatchesUnitBallAndAxes) {
  const auto space = SymplecticSpace::canonical(2);
  std::mt19937_64 rng(2);
  const auto e = ellipsoid(Matrix::Identity(4, 4), space);
  const auto b = ball(space);
  for (int i = 0; i < 20; ++i) {
    const Vector x = oracle::gaussian(4, rng);
    EXPECT_NEAR(e.gauge(x), b.gauge(x), 1e-14);
    EXPECT_NEAR(e.support(x), b.support(x), 1e-14);
  }
  const auto axes = ellipsoid(Vector((Vector(4) << 1, 1, 4, 4).finished()).asDiagonal(), space);
  Vector e3 = Vector::Zero(4);
  e3(2) = 1.0;
  EXPECT_NEAR(axes.support(e3), 0.5, 1e-15);
  EXPECT_NEAR(axes.inradius(), 0.5, 1e-14);
  EXPECT_NEAR(axes.circumradius(), 1.0, 1e-14);
}

TEST(Ellipsoid, DualHamiltonianGradientMatchesFiniteDifferences) {
  const auto space = SymplecticSpace::canonical(2);
  std::mt19937_64 rng(3);
  const Matrix a = oracle::random_spd(4, 0.3, 4.0, rng);
  const auto e = ellipsoid(a, space);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector xi = oracle::gaussian(4, rng);
    Vector fd(4);
    const double h = 1e-6;
    for (int i = 0; i < 4; ++i) {
      Vector p = xi, m = xi;
      p(i) += h;
      m(i) -= h;
      fd(i) = (e.dual_hamiltonian(p) - e.dual_hamiltonian(m)) / (2 * h);
    }
    const Vector g = e.dual_hamiltonian_gradient(xi);
    EXPECT_LE((g - fd).norm(), 1e-6 * g.norm());
    EXPECT_LE((g - a.inverse() * xi).norm(), 1e-12 * g.norm());
  }
}

TEST(Ellipsoid, RejectsNonSpd) {
  const auto space = SymplecticSpace::canonical(1);
  EXPECT_THROW((void)ellipsoid((Matrix(2, 2) << 1, 0, 0, -1).finished(), space), InvalidInput);
  EXPECT_THROW((void)ellipsoid((Matrix(2, 2) << 1, 2, 0, 1).finished(), space), InvalidInput);
  EXPECT_THROW((void)ellipsoid(Matrix::Identity(4, 4), space), DimensionMismatch);
}

TEST(SmoothedPolytope, SquareSupportAndGauge) {
  const auto space = SymplecticSpace::canonical(1);
  const auto sq = smoothed_polytope(oracle::square_vertices(), 0.01, space);
  EXPECT_NEAR(sq.support((Vector(2) << 1, 0).finished()), 1.01, 1e-15);
  const double g = sq.gauge((Vector(2) << 2, 0).finished());
  EXPECT_NEAR(g, 2.0 / 1.01, 1e-10);
  EXPECT_GE(g, 2.0 / 1.01 - 1e-10);
  EXPECT_LE(g, 2.0);
  EXPECT_NEAR(sq.inradius(), 1.01, 1e-12);
  EXPECT_NEAR(sq.circumradius(), std::sqrt(2.0) + 0.01, 1e-12);
}

TEST(SmoothedPolytope, TiesBreakTowardLowestIndex) {
  const auto space = SymplecticSpace::canonical(1);
  const auto sq = smoothed_polytope(oracle::square_vertices(), 0.01, space);
  // e1 is maximised by vertices 0 (1,1) and 3 (1,-1)
  const Vector g = sq.support_gradient((Vector(2) << 1, 0).finished());
  EXPECT_NEAR(g(0), 1.01, 1e-15);
  EXPECT_NEAR(g(1), 1.0, 1e-15);
}

TEST(SmoothedPolytope, RejectsBadInput) {
  const auto space = SymplecticSpace::canonical(1);
  EXPECT_THROW((void)smoothed_polytope(oracle::square_vertices(), 0.0, space), InvalidInput);
  Matrix shifted = oracle::square_vertices();
  shifted.row(0).array() += 1.0;  // origin on the boundary
  EXPECT_THROW((void)smoothed_polytope(shifted, 0.01, space), OriginNotInterior);
  shifted.row(0).array() += 1.0;  // origin outside
  EXPECT_THROW((void)smoothed_polytope(shifted, 0.01, space), OriginNotInterior);
}

TEST(LinearImage, IdentityAndDoubling) {
  const auto space = SymplecticSpace::canonical(2);
  std::mt19937_64 rng(4);
  const auto e = ellipsoid(oracle::random_spd(4, 0.5, 2.0, rng), space);
  const auto same = linear_image(Matrix::Identity(4, 4), e);
  const auto big = linear_image(2.0 * Matrix::Identity(4, 4), ball(space));
  for (int i = 0; i < 20; ++i) {
    const Vector x = oracle::gaussian(4, rng);
    EXPECT_NEAR(same.gauge(x), e.gauge(x), 1e-14);
    EXPECT_NEAR(same.support(x), e.support(x), 1e-14);
    EXPECT_NEAR(big.support(x), 2.0 * x.norm(), 1e-13);
  }
  EXPECT_NEAR(big.inradius(), 2.0, 1e-13);
  EXPECT_NEAR(big.circumradius(), 2.0, 1e-13);
  EXPECT_THROW((void)linear_image(Matrix::Zero(4, 4), e), InvalidInput);
}

TEST(LinearImage, SupportMatchesSampledBoundary) {
  // h_{ΦC}(ξ) against the max of ⟨ξ, Φx⟩ over 1e5 boundary points x of C
  const auto space = SymplecticSpace::canonical(1);
  const auto phi = random_symplectic(space, 17, 0.8);
  const Matrix a = (Matrix(2, 2) << 2.0, 0.3, 0.3, 0.7).finished();
  const auto img = linear_image(phi, ellipsoid(a, space));
  const Matrix a_inv_sqrt = spd_inverse_sqrt(a);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector xi = oracle::gaussian(2, rng);
    double best = -1e300;
    for (int i = 0; i < 100000; ++i) {
      const double t = 2.0 * kPi * i / 100000.0;
      const Vector x = a_inv_sqrt * (Vector(2) << std::cos(t), std::sin(t)).finished();
      best = std::max(best, xi.dot(phi.matrix() * x));
    }
    const double h = img.support(xi);
    EXPECT_GE(h - best, 0.0);
    EXPECT_LE(h - best, 1e-3);
  }
}

TEST(Translate, ShiftedBallGeometry) {
  const auto space = SymplecticSpace::canonical(2);
  const auto b = ball(space);
  Vector v = Vector::Zero(4);
  const auto same = translate(b, v);
  std::mt19937_64 rng(6);
  const Vector x = oracle::gaussian(4, rng);
  EXPECT_DOUBLE_EQ(same.gauge(x), b.gauge(x));

  v << 0.3, 0, 0, 0;
  const auto t = translate(b, v);
  double min_h = 1e300;
  for (int i = 0; i < 2000; ++i) {
    Vector xi = oracle::gaussian(4, rng);
    xi.normalize();
    EXPECT_NEAR(t.support(xi), 1.0 + xi.dot(v), 1e-15);
    min_h = std::min(min_h, t.support(xi));
  }
  EXPECT_NEAR(t.support(-v / 0.3), 0.7, 1e-15);
  EXPECT_GE(min_h, 0.7 - 1e-15);
  EXPECT_NEAR(t.inradius(), 0.7, 1e-15);
  // gauge of the shifted ball in closed form: |x/μ - v| = 1
  const Vector y = oracle::gaussian(4, rng);
  const double bq = y.dot(v), cq = v.squaredNorm() - 1.0, aq = y.squaredNorm();
  const double inv_mu = (bq + std::sqrt(bq * bq - aq * cq)) / aq;  // largest s with |s y - v| = 1
  EXPECT_NEAR(t.gauge(y), 1.0 / inv_mu, 1e-12);

  v << 1.0, 0, 0, 0;
  EXPECT_THROW((void)translate(b, v), OriginNotInterior);
  v << 0.8, 0.8, 0, 0;
  EXPECT_THROW((void)translate(b, v), OriginNotInterior);
}

TEST(Scale, SupportAndGaugeScaling) {
  const auto space = SymplecticSpace::canonical(2);
  std::mt19937_64 rng(7);
  const auto e = ellipsoid(oracle::random_spd(4, 0.5, 2.0, rng), space);
  const auto one = scale(e, 1.0);
  const auto two = scale(ball(space), 2.0);
  const auto s = scale(e, 2.5);
  for (int i = 0; i < 20; ++i) {
    const Vector x = oracle::gaussian(4, rng);
    const Vector xi = oracle::gaussian(4, rng);
    EXPECT_DOUBLE_EQ(one.gauge(x), e.gauge(x));
    EXPECT_NEAR(two.support(xi), 2.0 * xi.norm(), 1e-13);
    EXPECT_NEAR(s.gauge(x) * s.support(xi), e.gauge(x) * e.support(xi), 1e-12 * e.gauge(x) * e.support(xi));
  }
  EXPECT_THROW((void)scale(e, 0.0), InvalidInput);
  EXPECT_THROW((void)scale(e, -2.0), InvalidInput);
}

TEST(Projected, EllipsoidClosedFormMatchesFibreMinimisation) {
  const auto space = SymplecticSpace::canonical(2);
  std::mt19937_64 rng(8);
  const auto e = ellipsoid(oracle::random_spd(4, 0.5, 3.0, rng), space);
  Matrix basis(4, 2);
  basis << 1, 0.2, 0, 0.5, 0.1, 1, 0.3, 0;
  const SymplecticSubspace sub(space, basis);
  const auto sub_space = sub.coordinate_space();
  const auto closed = projected(sub.coordinate_map(), e, sub_space.metric());
  const auto generic = projected(sub.coordinate_map(), e, sub_space.metric(), true);
  EXPECT_EQ(closed.kind(), "ellipsoid");
  EXPECT_EQ(generic.kind(), "projection");
  for (int i = 0; i < 20; ++i) {
    const Vector y = oracle::gaussian(2, rng);
    EXPECT_NEAR(closed.gauge(y), generic.gauge(y), 1e-8 * closed.gauge(y));
    EXPECT_NEAR(closed.support(y), generic.support(y), 1e-12 * closed.support(y));
    EXPECT_LE((closed.gauge_gradient(y) - generic.gauge_gradient(y)).norm(), 1e-6 * closed.gauge_gradient(y).norm());
  }
}

TEST(BodyProperties, HomogeneitySandwichFenchelYoung) {
  for (const auto& nb : all_bodies()) {
    SCOPED_TRACE(nb.name);
    const auto& b = nb.body;
    std::mt19937_64 rng(9);
    const int samples = nb.smooth ? 1000 : 300;
    for (int i = 0; i < samples; ++i) {
      const Vector x = oracle::gaussian(b.dim(), rng);
      const Vector xi = oracle::gaussian(b.dim(), rng);
      const double mu = b.gauge(x);
      const double h = b.support(xi);
      EXPECT_NEAR(b.gauge(2.5 * x), 2.5 * mu, 1e-8 * mu);
      EXPECT_NEAR(b.support(0.4 * xi), 0.4 * h, 1e-8 * h);
      EXPECT_GE(mu, b.norm(x) / b.circumradius() - 1e-8);
      EXPECT_LE(mu, b.norm(x) / b.inradius() + 1e-8);
      EXPECT_GE(h, b.inradius() * b.dual_norm(xi) - 1e-8);
      EXPECT_LE(h, b.circumradius() * b.dual_norm(xi) + 1e-8);
      EXPECT_LE(xi.dot(x), mu * h + 1e-8);
    }
  }
}

TEST(BodyProperties, LegendreReciprocityAndComposition) {
  for (const auto& nb : all_bodies()) {
    SCOPED_TRACE(nb.name);
    const auto& b = nb.body;
    std::mt19937_64 rng(10);
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
      const Vector xi = oracle::gaussian(b.dim(), rng);
      if (!off_ties(b, xi)) continue;
      ++checked;
      const Vector x = b.dual_hamiltonian_gradient(xi);
      // dH_C(dH_{C^0}(ξ)) = ξ and H_C(dH_{C^0}(ξ)) = H_{C^0}(ξ)
      EXPECT_LE((b.hamiltonian_gradient(x) - xi).norm(), 1e-6 * xi.norm());
      EXPECT_NEAR(b.hamiltonian(x), b.dual_hamiltonian(xi), 1e-6 * b.dual_hamiltonian(xi));
      if (nb.smooth) {
        const Vector y = oracle::gaussian(b.dim(), rng);
        const Vector eta = b.hamiltonian_gradient(y);
        EXPECT_LE((b.dual_hamiltonian_gradient(eta) - y).norm(), 1e-6 * y.norm());
        EXPECT_NEAR(b.dual_hamiltonian(eta), b.hamiltonian(y), 1e-6 * b.hamiltonian(y));
      }
    }
    EXPECT_GT(checked, 100);
  }
}

TEST(BodyProperties, SupportGradientMatchesFiniteDifferences) {
  for (const auto& nb : all_bodies()) {
    SCOPED_TRACE(nb.name);
    const auto& b = nb.body;
    std::mt19937_64 rng(11);
    for (int i = 0; i < 30; ++i) {
      const Vector xi = oracle::gaussian(b.dim(), rng);
      if (!off_ties(b, xi)) continue;
      const double h = 1e-6;
      Vector fd(b.dim());
      for (Eigen::Index k = 0; k < b.dim(); ++k) {
        Vector p = xi, m = xi;
        p(k) += h;
        m(k) -= h;
        fd(k) = (b.support(p) - b.support(m)) / (2 * h);
      }
      const Vector g = b.support_gradient(xi);
      EXPECT_LE((g - fd).norm(), 1e-5 * g.norm());
    }
  }
}

TEST(BodyProperties, GaugeGradientMatchesFiniteDifferences) {
  for (const auto& nb : all_bodies()) {
    SCOPED_TRACE(nb.name);
    const auto& b = nb.body;
    std::mt19937_64 rng(12);
    for (int i = 0; i < 10; ++i) {
      const Vector x = oracle::gaussian(b.dim(), rng);
      const double h = 1e-5;
      Vector fd(b.dim());
      for (Eigen::Index k = 0; k < b.dim(); ++k) {
        Vector p = x, m = x;
        p(k) += h;
        m(k) -= h;
        fd(k) = (b.gauge(p) - b.gauge(m)) / (2 * h);
      }
      const Vector g = b.gauge_gradient(x);
      EXPECT_LE((g - fd).norm(), 1e-4 * g.norm());
    }
  }
}

TEST(BodyProperties, BoundaryNormalsSeeTheInradius) {
  for (const auto& nb : all_bodies()) {
    SCOPED_TRACE(nb.name);
    const auto& b = nb.body;
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
      Vector x = oracle::gaussian(b.dim(), rng);
      x /= b.gauge(x);
      const Vector n = b.unit_normal(x);
      EXPECT_GE(x.dot(b.metric() * n), b.inradius() - 1e-8);
    }
  }
}

TEST(BodyProperties, ZeroVectorIsHandled) {
  const auto space = SymplecticSpace::canonical(1);
  const auto sq = smoothed_polytope(oracle::square_vertices(), 0.01, space);
  const Vector z = Vector::Zero(2);
  EXPECT_EQ(sq.gauge(z), 0.0);
  EXPECT_EQ(sq.support(z), 0.0);
  EXPECT_EQ(sq.dual_hamiltonian_gradient(z), z);
  EXPECT_THROW((void)sq.gauge(Vector::Zero(4)), DimensionMismatch);
}
