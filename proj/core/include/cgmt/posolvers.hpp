#pragma once

// First-order solvers for the primary problems, all posed in the error
// variable w = x - x0 with measurements y = A x0 + z:
//
//   cone LASSO   min ||A w - z||_2            s.t. w in cone
//   LASSO        min 1/2 ||A w - z||^2 + lambda ||x0 + w||_1
//   saddle form  min_w max_u u'(A w - z) - L*(u) + lambda f(x0 + w)

#include <cstdint>
#include <optional>

#include "cgmt/geometry.hpp"
#include "cgmt/proxcalc.hpp"

namespace cgmt {

struct SolverBounds {
  double K_w = 0.0;
  double K_u = 0.0;
};

struct ProblemInstance {
  Matrix A;
  Vector z;
  Vector x0;
  double sigma = 1.0;
  LossSpec loss;
  RegularizerSpec reg;
  std::optional<ConeSpec> cone;
  SolverBounds bounds;

  /// Validates dimensions and positivity. Nonpositive bounds are replaced
  /// by the defaults K_w = 10 sigma sqrt(n), K_u = 10 (||z|| + K_w ||A||_2).
  static ProblemInstance make(Matrix A, Vector z, Vector x0, double sigma, LossSpec loss,
                              RegularizerSpec reg, std::optional<ConeSpec> cone = std::nullopt,
                              SolverBounds bounds = {});

  Eigen::Index rows() const noexcept { return A.rows(); }
  Eigen::Index cols() const noexcept { return A.cols(); }
};

struct POResult {
  Vector w_hat;
  double objective = 0.0;
  double residual_norm = 0.0;  // ||A w_hat - z||_2
  std::int64_t iterations = 0;
  bool converged = false;
  double kkt_residual = 0.0;
  /// ||w_hat|| > K_w. Reported, never clipped.
  bool norm_bound_exceeded = false;
};

struct SolverOptions {
  double rel_tol = 1e-8;            // residual <= rel_tol * (1 + ||z||)
  std::int64_t max_iterations = 0;  // 0 selects the per-solver default
};

/// Largest singular value by power iteration on A'A (100 iterations,
/// relative tolerance 1e-8).
double operator_norm_estimate(const Matrix& A);

POResult solve_cone_lasso(const ProblemInstance& instance, SolverOptions options = {});
POResult solve_lasso_fista(const ProblemInstance& instance, SolverOptions options = {});
POResult solve_saddle_pdhg(const ProblemInstance& instance, SolverOptions options = {});

/// min_{||a||=1} ||G a||_2 via singular values (0 when G has more columns
/// than rows).
double smin_via_po(const Matrix& G);

/// loss(A w - z) + reg(x0 + w) for the unconstrained forms.
double penalized_objective(const ProblemInstance& instance, const Vector& w);

}  // namespace cgmt
