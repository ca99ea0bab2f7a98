#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cgmt/ensembles.hpp"
#include "cgmt/geometry.hpp"
#include "expect_error.hpp"
#include "oracles.hpp"
#include "random_cones.hpp"

using namespace cgmt;
using testing_support::ConeKind;

namespace {

ConeSpec example_l1() { return ConeSpec::l1_descent({0}, {1}, 2); }

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST(ConeSpec, FactoriesValidate) {
  EXPECT_EQ(error_kind_of([] { ConeSpec::full_space(0); }), ErrorKind::InvalidDimension);
  EXPECT_EQ(error_kind_of([] { ConeSpec::single_ray(vec({1.0, 1.0})); }),
            ErrorKind::InvalidArgument);
  EXPECT_EQ(error_kind_of([] { ConeSpec::l1_descent({0, 0}, {1, 1}, 3); }),
            ErrorKind::InvalidArgument);
  EXPECT_EQ(error_kind_of([] { ConeSpec::l1_descent({3}, {1}, 3); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(error_kind_of([] { ConeSpec::l1_descent({1}, {2}, 3); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(error_kind_of([] { ConeSpec::l1_descent({1}, {}, 3); }), ErrorKind::InvalidArgument);

  const auto cone = ConeSpec::l1_descent_at(vec({0.0, -2.0, 0.0, 1.0}));
  const auto& l1 = std::get<L1Descent>(cone.kind());
  EXPECT_EQ(l1.support, (std::vector<Eigen::Index>{1, 3}));
  EXPECT_EQ(l1.signs, (std::vector<int>{-1, 1}));
  EXPECT_EQ(cone.ambient_dim(), 4);
  EXPECT_STREQ(cone.kind_name(), "l1_descent");
}

TEST(ProjectCone, FullSpaceIsIdentity) {
  const Vector v = vec({1.5, -2.0, 0.25});
  EXPECT_EQ(project_cone(v, ConeSpec::full_space(3)), v);
}

TEST(ProjectCone, L1ExampleHandKkt) {
  const Vector p = project_cone(vec({-1.0, 3.0}), example_l1());
  EXPECT_NEAR(p[0], -2.0, 1e-12);
  EXPECT_NEAR(p[1], 2.0, 1e-12);
  const Vector grid = oracle::project_l1_cone_2d_grid(vec({-1.0, 3.0}), {0}, {1});
  EXPECT_NEAR((p - grid).norm(), 0.0, 1e-4);
}

TEST(ProjectCone, L1ExampleToOrigin) {
  const Vector p = project_cone(vec({1.0, 0.0}), example_l1());
  EXPECT_NEAR(p.norm(), 0.0, 1e-12);
  const Vector grid = oracle::project_l1_cone_2d_grid(vec({1.0, 0.0}), {0}, {1});
  EXPECT_NEAR(grid.norm(), 0.0, 1e-9);
}

TEST(ProjectCone, OrthantAndRayClosedForms) {
  const Vector p = project_cone(vec({3.0, -4.0}), ConeSpec::nonnegative_orthant(2));
  EXPECT_EQ(p, vec({3.0, 0.0}));
  const auto ray = ConeSpec::single_ray(vec({0.6, 0.8}));
  EXPECT_NEAR((project_cone(vec({1.0, 1.0}), ray) - 1.4 * vec({0.6, 0.8})).norm(), 0.0, 1e-12);
  EXPECT_NEAR(project_cone(vec({-1.0, -1.0}), ray).norm(), 0.0, 1e-15);
}

TEST(ProjectCone, EmptySupportIsOrigin) {
  const auto zero_cone = ConeSpec::l1_descent({}, {}, 3);
  EXPECT_NEAR(project_cone(vec({1.0, -2.0, 3.0}), zero_cone).norm(), 0.0, 1e-12);
}

TEST(ProjectCone, ShapeMismatch) {
  EXPECT_EQ(error_kind_of([] { project_cone(vec({1.0}), ConeSpec::full_space(2)); }),
            ErrorKind::Shape);
  EXPECT_EQ(error_kind_of([] { restricted_sup(vec({1.0}), ConeSpec::full_space(2)); }),
            ErrorKind::Shape);
  EXPECT_EQ(error_kind_of([] { membership_residual(vec({1.0}), ConeSpec::full_space(2)); }),
            ErrorKind::Shape);
}

TEST(ProjectCone, MatchesPolarOracleForL1) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const long n = 1 + trial % 12;
    std::uniform_int_distribution<long> kd(0, n);
    const auto pattern = testing_support::random_l1_pattern(rng, n, kd(rng));
    const auto cone = testing_support::l1_cone(pattern, n);
    const Vector v = oracle::randn(rng, n) * 3.0;
    const auto polar = oracle::project_l1_polar(v, pattern.support, pattern.signs);
    EXPECT_NEAR((project_cone(v, cone) - (v - polar.point)).norm(), 0.0, 1e-6 * (1 + v.norm()))
        << "n=" << n;
  }
}

TEST(ProjectCone, PropertySuite) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> nd(1, 40);
  std::uniform_real_distribution<double> td(0.01, 100.0);
  for (ConeKind kind : testing_support::kAllKinds) {
    for (int trial = 0; trial < 300; ++trial) {
      const long n = nd(rng);
      const auto cone = testing_support::random_cone(rng, kind, n);
      const Vector v = oracle::randn(rng, n) * 2.0;
      const Vector u = oracle::randn(rng, n) * 2.0;
      const Vector p = project_cone(v, cone);
      const Vector r = v - p;
      const double v2 = v.squaredNorm();
      SCOPED_TRACE(testing_support::name(kind));
      EXPECT_NEAR(p.squaredNorm() + r.squaredNorm(), v2, 1e-8 * v2);
      EXPECT_LE(std::abs(p.dot(r)), 1e-8 * v2);
      EXPECT_LE((project_cone(p, cone) - p).norm(), 1e-9 * (1 + p.norm()));
      EXPECT_LE((project_cone(u, cone) - p).norm(), (u - v).norm() * (1 + 1e-12) + 1e-12);
      const double t = td(rng);
      EXPECT_LE((project_cone(Vector(t * v), cone) - t * p).norm(), 1e-9 * t * (1 + p.norm()));
      EXPECT_EQ(membership_residual(p, cone), 0.0);
    }
  }
}

TEST(RestrictedSup, Examples) {
  EXPECT_NEAR(restricted_sup(vec({3.0, 4.0}), ConeSpec::full_space(2)), 5.0, 1e-15);
  EXPECT_NEAR(restricted_sup(vec({3.0, -4.0}), ConeSpec::nonnegative_orthant(2)), 3.0, 1e-15);
  EXPECT_NEAR(restricted_sup(vec({0.0, 1.0}), example_l1()), std::sqrt(0.5), 1e-12);
  const Vector p = project_cone(vec({0.0, 1.0}), example_l1());
  EXPECT_NEAR(p[0], -0.5, 1e-12);
  EXPECT_NEAR(p[1], 0.5, 1e-12);
}

TEST(RestrictedSup, MatchesDenseAngularGridInPlane) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pattern = testing_support::random_l1_pattern(rng, 2, 1 + trial % 2);
    const auto cone = testing_support::l1_cone(pattern, 2);
    const Vector h = oracle::randn(rng, 2);
    double best = 0.0;
    const int angles = 2'000'000;
    for (int i = 0; i < angles; ++i) {
      const double th = 2.0 * 3.14159265358979323846 * i / angles;
      const Vector u(Eigen::Vector2d(std::cos(th), std::sin(th)));
      if (oracle::l1_constraint(u, pattern.support, pattern.signs) <= 0.0) {
        best = std::max(best, h.dot(u));
      }
    }
    // The sup sits on a boundary ray, so the grid misses it by at most
    // ||h|| times the angular step.
    const double rs = restricted_sup(h, cone);
    EXPECT_GE(rs, best - 1e-12);
    EXPECT_LE(rs - best, h.norm() * 2.0 * 3.14159265358979323846 / angles + 1e-12);
  }
}

TEST(RestrictedSup, SampledUnitVectorsNeverExceedIt) {
  std::mt19937_64 rng(8);
  for (long n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 6; ++trial) {
      const auto pattern = testing_support::random_l1_pattern(rng, n, 1 + trial % n);
      const auto cone = testing_support::l1_cone(pattern, n);
      const Vector h = oracle::randn(rng, n);
      const double D = restricted_sup(h, cone);
      double sampled = -1.0;
      int accepted = 0;
      while (accepted < 100'000) {
        const Vector u = oracle::randn(rng, n).normalized();
        if (oracle::l1_constraint(u, pattern.support, pattern.signs) > 0.0) continue;
        ++accepted;
        sampled = std::max(sampled, h.dot(u));
      }
      EXPECT_LE(sampled, D + 1e-9);
      // Equality against the polar-distance oracle.
      EXPECT_NEAR(D, oracle::l1_restricted_sup(h, pattern.support, pattern.signs), 1e-6);
    }
  }
}

TEST(MembershipResidual, Examples) {
  EXPECT_EQ(membership_residual(vec({-5.0, 7.0}), ConeSpec::full_space(2)), 0.0);
  EXPECT_EQ(membership_residual(vec({-2.0, 2.0}), example_l1()), 0.0);
  EXPECT_NEAR(membership_residual(vec({1.0, -0.3}), ConeSpec::nonnegative_orthant(2)), 0.3,
              1e-15);
  EXPECT_NEAR(membership_residual(vec({1.0, 1.0}), example_l1()), 2.0, 1e-15);
  const auto ray = ConeSpec::single_ray(vec({1.0, 0.0}));
  EXPECT_NEAR(membership_residual(vec({2.0, 0.5}), ray), 0.5, 1e-15);
}

TEST(GaussianWidth, FullSpaceMatchesGamma) {
  for (long n : {1L, 5L, 50L}) {
    const auto w = gaussian_width(ConeSpec::full_space(n), {12, 0}, 20'000);
    EXPECT_NEAR(w.omega, gamma_m(static_cast<int>(n)).value, 4.0 * w.omega_stderr) << n;
    EXPECT_GT(w.omega_stderr, 0.0);
    EXPECT_EQ(w.n_samples, 20'000);
  }
}

TEST(GaussianWidth, SingleRayIsHalfNormalMean) {
  std::mt19937_64 rng(1);
  const auto ray = ConeSpec::single_ray(oracle::randn(rng, 7).normalized());
  const auto w = gaussian_width(ray, {4, 0}, 100'000);
  EXPECT_NEAR(w.omega, 1.0 / std::sqrt(2.0 * 3.14159265358979323846), 3.0 * w.omega_stderr);
}

TEST(GaussianWidth, L1BelowWidthBound) {
  const auto w = gaussian_width(ConeSpec::l1_descent({0, 1, 2, 3, 4, 5, 6, 7, 8, 9},
                                                     std::vector<int>(10, 1), 1000),
                                {6, 0}, 2'000);
  EXPECT_LE(w.omega, l1_width_upper_bound(10, 1000));
}

TEST(GaussianWidth, NeedsTwoSamples) {
  EXPECT_EQ(error_kind_of([] { gaussian_width(ConeSpec::full_space(2), {0, 0}, 1); }),
            ErrorKind::InsufficientSamples);
}

TEST(GaussianWidth, Deterministic) {
  const auto cone = ConeSpec::nonnegative_orthant(9);
  EXPECT_EQ(gaussian_width(cone, {3, 7}, 500).omega, gaussian_width(cone, {3, 7}, 500).omega);
}

TEST(L1WidthUpperBound, Values) {
  EXPECT_NEAR(l1_width_upper_bound(7, 7), std::sqrt(14.0 * std::log(2.0)), 1e-13);
  // Reference values evaluated in 50-digit arithmetic.
  EXPECT_NEAR(l1_width_upper_bound(10, 1000), 10.2939957, 1e-6);
  EXPECT_NEAR(l1_width_upper_bound(1, 2), 1.6651092, 1e-6);
  EXPECT_EQ(error_kind_of([] { l1_width_upper_bound(0, 5); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(error_kind_of([] { l1_width_upper_bound(6, 5); }), ErrorKind::InvalidArgument);
}

TEST(GeometryStats, LinearRegime) {
  const auto stats = geometry_stats(ConeSpec::l1_descent({0}, {1}, 100), 64, {1, 0}, 1000);
  EXPECT_EQ(stats.m, 64);
  EXPECT_EQ(stats.ambient_dim, 100);
  EXPECT_NEAR(stats.gamma_m, gamma_m(64).value, 0.0);
  EXPECT_TRUE(stats.in_linear_regime(0.05));
  EXPECT_FALSE(stats.in_linear_regime(0.49));
}
