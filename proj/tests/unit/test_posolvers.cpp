#include <cmath>
#include <limits>
#include <random>

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "cgmt/posolvers.hpp"
#include "expect_error.hpp"
#include "oracles.hpp"

using namespace cgmt;

namespace {

ProblemInstance lasso(Matrix A, Vector z, Vector x0, double lambda,
                      LossKind loss = LossKind::HalfSquaredL2) {
  return ProblemInstance::make(std::move(A), std::move(z), std::move(x0), 1.0, LossSpec{loss},
                               RegularizerSpec::make(RegularizerKind::L1Norm, lambda));
}

ProblemInstance cone_problem(Matrix A, Vector z, ConeSpec cone) {
  const auto n = A.cols();
  return ProblemInstance::make(std::move(A), std::move(z), Vector::Zero(n), 0.1,
                               LossSpec{LossKind::L2Norm}, RegularizerSpec{}, std::move(cone));
}

}  // namespace

TEST(ProblemInstance, ValidatesAndAppliesDefaults) {
  const Matrix A = Matrix::Identity(3, 4);
  EXPECT_EQ(error_kind_of([&] {
              ProblemInstance::make(A, Vector::Zero(2), Vector::Zero(4), 1.0, {}, {});
            }),
            ErrorKind::Shape);
  EXPECT_EQ(error_kind_of([&] {
              ProblemInstance::make(A, Vector::Zero(3), Vector::Zero(3), 1.0, {}, {});
            }),
            ErrorKind::Shape);
  EXPECT_EQ(error_kind_of([&] {
              ProblemInstance::make(A, Vector::Zero(3), Vector::Zero(4), 0.0, {}, {});
            }),
            ErrorKind::InvalidArgument);
  EXPECT_EQ(error_kind_of([&] {
              ProblemInstance::make(A, Vector::Zero(3), Vector::Zero(4), 1.0, {}, {},
                                    ConeSpec::full_space(3));
            }),
            ErrorKind::Shape);
  const auto inst = ProblemInstance::make(A, Vector::Ones(3), Vector::Zero(4), 0.5, {}, {});
  EXPECT_DOUBLE_EQ(inst.bounds.K_w, 10.0 * 0.5 * 2.0);
  EXPECT_NEAR(inst.bounds.K_u, 10.0 * (std::sqrt(3.0) + inst.bounds.K_w * 1.0), 1e-6);
}

TEST(OperatorNorm, MatchesSvd) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const Matrix A = oracle::randn(rng, 30, 50);
    Eigen::BDCSVD<Matrix> svd(A);
    // 100 power iterations approach the top singular value from below.
    const double top = svd.singularValues()(0);
    EXPECT_LE(operator_norm_estimate(A), top * (1.0 + 1e-12));
    EXPECT_GE(operator_norm_estimate(A), top * (1.0 - 1e-4));
  }
}

TEST(SolveConeLasso, ZeroNoiseGivesZero) {
  std::mt19937_64 rng(2);
  const auto inst = cone_problem(oracle::randn(rng, 20, 40), Vector::Zero(20),
                                 ConeSpec::l1_descent({0, 1}, {1, -1}, 40));
  const auto r = solve_cone_lasso(inst);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.w_hat.norm(), 0.0, 1e-12);
  EXPECT_NEAR(r.objective, 0.0, 1e-12);
}

TEST(SolveConeLasso, FullSpaceIsLeastSquares) {
  std::mt19937_64 rng(3);
  const Matrix A = oracle::randn(rng, 60, 20);
  const Vector z = oracle::randn(rng, 60);
  const auto r = solve_cone_lasso(cone_problem(A, z, ConeSpec::full_space(20)));
  const Vector ls = oracle::least_squares(A, z);
  EXPECT_TRUE(r.converged);
  EXPECT_LE((r.w_hat - ls).norm(), 1e-6 * ls.norm());
  EXPECT_NEAR(r.objective, (A * ls - z).norm(), 1e-9 * (A * ls - z).norm());
}

TEST(SolveConeLasso, TinyInstanceMatchesBoundaryGrid) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 5; ++t) {
    const Matrix A = oracle::randn(rng, 3, 3);
    const Vector z = oracle::randn(rng, 3);
    const int s = t % 2 == 0 ? 1 : -1;
    const auto cone = ConeSpec::l1_descent({0}, {s}, 3);
    const auto r = solve_cone_lasso(cone_problem(A, z, cone));

    // The cone is {s w0 + |w1| + |w2| <= 0}. A full-rank A has an
    // unconstrained zero-residual solution; if it is infeasible the
    // optimum lies on the boundary w0 = -s (|w1| + |w2|).
    const Vector ls = A.fullPivLu().solve(z);
    double best = std::numeric_limits<double>::infinity();
    if (s * ls[0] + std::abs(ls[1]) + std::abs(ls[2]) <= 0.0) best = 0.0;
    auto residual = [&](double a, double b) {
      Vector w(3);
      w << -s * (std::abs(a) + std::abs(b)), a, b;
      return (A * w - z).norm();
    };
    double ca = 0.0, cb = 0.0, radius = 3.0 * (ls.norm() + 1.0);
    for (int zoom = 0; zoom < 6; ++zoom) {
      double ba = ca, bb = cb, bv = residual(ca, cb);
      const int N = 200;
      for (int i = -N; i <= N; ++i)
        for (int j = -N; j <= N; ++j) {
          const double a = ca + radius * i / N, b = cb + radius * j / N;
          const double v = residual(a, b);
          if (v < bv) {
            bv = v;
            ba = a;
            bb = b;
          }
        }
      ca = ba;
      cb = bb;
      radius *= 0.05;
      best = std::min(best, bv);
    }
    EXPECT_NEAR(r.objective, best, 1e-3);
    EXPECT_LE(r.objective, best + 1e-9);
  }
}

TEST(SolveConeLasso, Invariants) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const Matrix A = oracle::randn(rng, 40, 80);
    const Vector z = 0.1 * oracle::randn(rng, 40);
    std::vector<Eigen::Index> support{0, 3, 7};
    const auto cone = ConeSpec::l1_descent(support, {1, -1, 1}, 80);
    const auto inst = cone_problem(A, z, cone);
    const auto r = solve_cone_lasso(inst);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(membership_residual(r.w_hat, cone), 1e-6 * (1 + r.w_hat.norm()));
    EXPECT_NEAR(r.objective, (A * r.w_hat - z).norm(), 1e-9 * (1 + r.objective));
    EXPECT_LE(r.objective, z.norm() + 1e-9);
    // -A'(A w - z) in the polar cone at w: its projection onto the cone
    // after a gradient step is w itself up to the KKT residual.
    EXPECT_LE(r.kkt_residual, 1e-6 * (1 + (A.transpose() * z).norm()));
    EXPECT_FALSE(r.norm_bound_exceeded);
  }
}

TEST(SolveConeLasso, RequiresCone) {
  const auto inst = ProblemInstance::make(Matrix::Identity(2, 2), Vector::Ones(2), Vector::Zero(2),
                                          1.0, {}, {});
  EXPECT_EQ(error_kind_of([&] { solve_cone_lasso(inst); }), ErrorKind::InvalidArgument);
}

TEST(SolveConeLasso, IterationCapReportsBestIterate) {
  std::mt19937_64 rng(6);
  const auto inst = cone_problem(oracle::randn(rng, 30, 60), oracle::randn(rng, 30),
                                 ConeSpec::nonnegative_orthant(60));
  const auto r = solve_cone_lasso(inst, {1e-8, 3});
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3);
  EXPECT_LE(r.objective, inst.z.norm());
}

TEST(SolveSaddlePdhg, SquareInvertibleLeastSquares) {
  std::mt19937_64 rng(7);
  const Matrix A = Matrix::Identity(10, 10) + 0.3 * oracle::randn(rng, 10, 10) / std::sqrt(10.0);
  const Vector z = oracle::randn(rng, 10);
  const auto r = solve_saddle_pdhg(lasso(A, z, Vector::Zero(10), 0.0));
  EXPECT_TRUE(r.converged);
  EXPECT_LE((A * r.w_hat - z).norm(), 1e-6);
}

TEST(SolveSaddlePdhg, IdentitySoftThreshold) {
  Vector y(2);
  y << 2.0, -0.5;
  const auto r =
      solve_saddle_pdhg(lasso(Matrix::Identity(2, 2), y, Vector::Zero(2), 1.0), {1e-11, 0});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.w_hat[0], 1.0, 1e-9);
  EXPECT_NEAR(r.w_hat[1], 0.0, 1e-9);
}

TEST(SolveSaddlePdhg, L2LassoMatchesSubgradientOracle) {
  std::mt19937_64 rng(8);
  const Matrix A = oracle::randn(rng, 6, 4);
  const Vector x0 = oracle::randn(rng, 4);
  const Vector z = 0.5 * oracle::randn(rng, 6);
  const double lambda = 0.4;
  const auto inst = lasso(A, z, x0, lambda, LossKind::L2Norm);
  const auto r = solve_saddle_pdhg(inst);
  auto f = [&](const Vector& w, Vector& g) {
    const Vector res = A * w - z;
    const Vector x = x0 + w;
    g = lambda * x.cwiseSign();
    if (res.norm() > 0) g += A.transpose() * res / res.norm();
    return res.norm() + lambda * x.lpNorm<1>();
  };
  const double ref = oracle::subgradient_min(f, Vector::Zero(4), 1'000'000, 1.0);
  EXPECT_NEAR(r.objective, ref, 1e-4);
}

TEST(SolveSaddlePdhg, LadRunsAndBeatsZero) {
  std::mt19937_64 rng(9);
  const Matrix A = oracle::randn(rng, 30, 10);
  const Vector z = oracle::randn(rng, 30);
  const auto inst = lasso(A, z, Vector::Zero(10), 0.2, LossKind::L1Norm);
  const auto r = solve_saddle_pdhg(inst, {1e-6, 0});
  EXPECT_LE(r.objective, penalized_objective(inst, Vector::Zero(10)) + 1e-9);
  EXPECT_NEAR(r.objective, penalized_objective(inst, r.w_hat), 1e-9 * (1 + r.objective));
}

TEST(SolveLassoFista, LargeLambdaGivesZeroEstimate) {
  std::mt19937_64 rng(10);
  const Matrix A = oracle::randn(rng, 20, 50);
  const Vector y = oracle::randn(rng, 20);
  const double lambda = (A.transpose() * y).lpNorm<Eigen::Infinity>() * 1.01;
  const auto r = solve_lasso_fista(lasso(A, y, Vector::Zero(50), lambda));
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.w_hat.norm(), 1e-9);
}

TEST(SolveLassoFista, ZeroLambdaOverdeterminedIsLeastSquares) {
  std::mt19937_64 rng(11);
  const Matrix A = oracle::randn(rng, 50, 10);
  const Vector z = oracle::randn(rng, 50);
  const auto r = solve_lasso_fista(lasso(A, z, Vector::Zero(10), 0.0));
  const Vector ls = oracle::least_squares(A, z);
  EXPECT_LE((r.w_hat - ls).norm(), 1e-6 * ls.norm());
}

TEST(SolveLassoFista, AgreesWithPdhg) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 5; ++t) {
    const Matrix A = oracle::randn(rng, 20, 50);
    const Vector x0 = oracle::randn(rng, 50);
    const Vector z = oracle::randn(rng, 20);
    const auto inst = lasso(A, z, x0, 1.0);
    const auto f = solve_lasso_fista(inst);
    const auto p = solve_saddle_pdhg(inst);
    EXPECT_TRUE(f.converged);
    EXPECT_NEAR(f.objective, p.objective, 1e-6 * std::abs(f.objective));
  }
}

TEST(SolveLassoFista, RequiresHalfSquaredLoss) {
  const auto inst =
      lasso(Matrix::Identity(2, 2), Vector::Ones(2), Vector::Zero(2), 1.0, LossKind::L2Norm);
  EXPECT_EQ(error_kind_of([&] { solve_lasso_fista(inst); }), ErrorKind::Capability);
}

TEST(SminViaPo, Examples) {
  EXPECT_NEAR(smin_via_po(Matrix::Identity(5, 5)), 1.0, 1e-15);
  Matrix D = Matrix::Zero(4, 2);
  D(0, 0) = 3.0;
  D(1, 1) = 2.0;
  EXPECT_NEAR(smin_via_po(D), 2.0, 1e-15);
  std::mt19937_64 rng(13);
  const Matrix G = oracle::randn(rng, 100, 50);
  EXPECT_NEAR(smin_via_po(G), oracle::smin_inverse_iteration(G), 1e-8);
  EXPECT_EQ(smin_via_po(Matrix::Ones(2, 3)), 0.0);
  EXPECT_EQ(error_kind_of([] { smin_via_po(Matrix(0, 0)); }), ErrorKind::Shape);
}
