#include "cgmt/posolvers.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

#include "cgmt/errors.hpp"

namespace cgmt {
namespace {

constexpr std::int64_t kGradientMaxIterations = 50'000;
constexpr std::int64_t kPdhgMaxIterations = 200'000;

struct AcceleratedResult {
  Vector w;
  double step = 0.0;
  std::int64_t iterations = 0;
  bool converged = false;
};

// Accelerated proximal gradient on 1/2 ||A w - z||^2 + g(w), with
// gradient-mapping restart and a backtracking guard in case the power
// iteration underestimates ||A||_2. Returns the best iterate seen.
template <class Prox, class NonSmooth>
AcceleratedResult accelerated_prox_gradient(const Matrix& A, const Vector& z, Prox&& prox,
                                            NonSmooth&& g, double step, double tol,
                                            std::int64_t max_iterations) {
  const Eigen::Index n = A.cols();
  Vector w = Vector::Zero(n);
  Vector Aw = Vector::Zero(A.rows());
  Vector best = w;
  double best_F = 0.5 * z.squaredNorm() + g(w);

  Vector y = w;
  Vector Ay = Aw;
  double t = 1.0;

  AcceleratedResult out;
  for (std::int64_t k = 1; k <= max_iterations; ++k) {
    const Vector ry = Ay - z;
    const Vector grad = A.transpose() * ry;
    const double fy = 0.5 * ry.squaredNorm();

    Vector w_new, Aw_new, d;
    double f_new = 0.0;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      w_new = prox(Vector(y - step * grad), step);
      Aw_new.noalias() = A * w_new;
      f_new = 0.5 * (Aw_new - z).squaredNorm();
      d = w_new - y;
      const double model = fy + grad.dot(d) + d.squaredNorm() / (2.0 * step);
      if (f_new <= model + 1e-12 * (1.0 + std::abs(fy))) break;
      step /= 1.5;
    }
    out.iterations = k;

    const double F_new = f_new + g(w_new);
    if (F_new < best_F) {
      best_F = F_new;
      best = w_new;
    }
    if (d.norm() / step <= tol) {
      out.converged = true;
      w = std::move(w_new);
      break;
    }

    if (d.dot(w_new - w) < 0.0) {
      // Momentum points against the latest step: restart from w_new.
      t = 1.0;
      y = w_new;
      Ay = Aw_new;
      w = std::move(w_new);
      Aw = std::move(Aw_new);
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_next;
    y = w_new + beta * (w_new - w);
    Ay = Aw_new + beta * (Aw_new - Aw);
    w = std::move(w_new);
    Aw = std::move(Aw_new);
    t = t_next;
  }

  const double final_F = 0.5 * (A * w - z).squaredNorm() + g(w);
  out.w = final_F <= best_F ? w : best;
  out.step = step;
  return out;
}

double step_size_for(const Matrix& A) {
  const double norm = operator_norm_estimate(A);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    fail(ErrorKind::Numeric, "operator norm estimate failed");
  }
  return 1.0 / (norm * norm);
}

void finish(const ProblemInstance& instance, POResult& result) {
  result.residual_norm = (instance.A * result.w_hat - instance.z).norm();
  result.norm_bound_exceeded = result.w_hat.norm() > instance.bounds.K_w;
}

}  // namespace

ProblemInstance ProblemInstance::make(Matrix A, Vector z, Vector x0, double sigma, LossSpec loss,
                                      RegularizerSpec reg, std::optional<ConeSpec> cone,
                                      SolverBounds bounds) {
  if (A.rows() < 1 || A.cols() < 1) fail(ErrorKind::Shape, "measurement matrix is empty");
  if (z.size() != A.rows()) fail(ErrorKind::Shape, "noise length must equal rows of A");
  if (x0.size() != A.cols()) fail(ErrorKind::Shape, "signal length must equal columns of A");
  if (cone && cone->ambient_dim() != A.cols()) {
    fail(ErrorKind::Shape, "cone dimension must equal columns of A");
  }
  if (!(sigma > 0.0)) fail(ErrorKind::InvalidArgument, "sigma must be positive");
  if (!(reg.weight >= 0.0)) fail(ErrorKind::InvalidArgument, "lambda must be >= 0");

  if (!(bounds.K_w > 0.0)) {
    bounds.K_w = 10.0 * sigma * std::sqrt(static_cast<double>(A.cols()));
  }
  if (!(bounds.K_u > 0.0)) {
    bounds.K_u = 10.0 * (z.norm() + bounds.K_w * operator_norm_estimate(A));
  }
  return {std::move(A), std::move(z), std::move(x0), sigma, loss, reg, std::move(cone), bounds};
}

double operator_norm_estimate(const Matrix& A) {
  if (A.size() == 0) fail(ErrorKind::Shape, "operator norm of an empty matrix");
  // Deterministic, generically non-degenerate start.
  Vector v(A.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = 1.0 + 0.1 * std::sin(1.0 + i);
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < 100; ++it) {
    const Vector Av = A * v;
    const double next = Av.norm();
    if (next == 0.0) return 0.0;
    Vector w = A.transpose() * Av;
    const double wn = w.norm();
    if (wn == 0.0) return next;
    v = w / wn;
    if (std::abs(next - estimate) <= 1e-8 * next) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  return (A * v).norm();
}

POResult solve_cone_lasso(const ProblemInstance& instance, SolverOptions options) {
  if (!instance.cone) fail(ErrorKind::InvalidArgument, "solve_cone_lasso requires a cone");
  const ConeSpec& cone = *instance.cone;
  const double tol = options.rel_tol * (1.0 + instance.z.norm());
  const auto max_it = options.max_iterations > 0 ? options.max_iterations : kGradientMaxIterations;

  auto run = accelerated_prox_gradient(
      instance.A, instance.z, [&](const Vector& v, double) { return project_cone(v, cone); },
      [](const Vector&) { return 0.0; }, step_size_for(instance.A), tol, max_it);

  POResult result;
  result.w_hat = std::move(run.w);
  result.iterations = run.iterations;
  result.converged = run.converged;
  finish(instance, result);
  result.objective = result.residual_norm;
  const Vector grad = instance.A.transpose() * (instance.A * result.w_hat - instance.z);
  result.kkt_residual =
      (result.w_hat - project_cone(Vector(result.w_hat - run.step * grad), cone)).norm() /
      run.step;
  return result;
}

POResult solve_lasso_fista(const ProblemInstance& instance, SolverOptions options) {
  if (instance.loss.kind != LossKind::HalfSquaredL2) {
    fail(ErrorKind::Capability, "solve_lasso_fista requires the half_sq_l2 loss");
  }
  const double tol = options.rel_tol * (1.0 + instance.z.norm());
  const auto max_it = options.max_iterations > 0 ? options.max_iterations : kGradientMaxIterations;
  const Vector& x0 = instance.x0;
  const RegularizerSpec& reg = instance.reg;

  auto prox = [&](const Vector& v, double step) -> Vector {
    return prox_regularizer(reg, Vector(x0 + v), step) - x0;
  };
  auto run = accelerated_prox_gradient(
      instance.A, instance.z, prox,
      [&](const Vector& w) { return regularizer_value(reg, Vector(x0 + w)); },
      step_size_for(instance.A), tol, max_it);

  POResult result;
  result.w_hat = std::move(run.w);
  result.iterations = run.iterations;
  result.converged = run.converged;
  finish(instance, result);
  result.objective = penalized_objective(instance, result.w_hat);
  const Vector grad = instance.A.transpose() * (instance.A * result.w_hat - instance.z);
  result.kkt_residual =
      (result.w_hat - prox(Vector(result.w_hat - run.step * grad), run.step)).norm() / run.step;
  return result;
}

POResult solve_saddle_pdhg(const ProblemInstance& instance, SolverOptions options) {
  const Matrix& A = instance.A;
  const double norm = operator_norm_estimate(A);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    fail(ErrorKind::Numeric, "operator norm estimate failed");
  }
  const double tau = 0.99 / norm;
  const double sigma_d = 0.99 / norm;
  const double tol = options.rel_tol * (1.0 + instance.z.norm());
  const auto max_it = options.max_iterations > 0 ? options.max_iterations : kPdhgMaxIterations;
  const Vector& x0 = instance.x0;

  Vector w = Vector::Zero(A.cols());
  Vector u = Vector::Zero(A.rows());
  Vector Aw = Vector::Zero(A.rows());
  Vector Atu = Vector::Zero(A.cols());

  POResult result;
  double residual = std::numeric_limits<double>::infinity();
  for (std::int64_t k = 1; k <= max_it; ++k) {
    Vector w_new = prox_regularizer(instance.reg, Vector(x0 + w - tau * Atu), tau) - x0;
    Vector Aw_new = A * w_new;
    Vector u_new =
        prox_conjugate(instance.loss, Vector(u + sigma_d * (2.0 * Aw_new - Aw)), sigma_d,
                       instance.z);
    Vector Atu_new = A.transpose() * u_new;

    const Vector primal = (w - w_new) / tau - (Atu - Atu_new);
    const Vector dual = (u - u_new) / sigma_d - (Aw - Aw_new);
    residual = primal.norm() + dual.norm();

    w = std::move(w_new);
    u = std::move(u_new);
    Aw = std::move(Aw_new);
    Atu = std::move(Atu_new);
    result.iterations = k;
    if (residual <= tol) {
      result.converged = true;
      break;
    }
  }

  result.w_hat = std::move(w);
  finish(instance, result);
  result.objective = penalized_objective(instance, result.w_hat);
  result.kkt_residual = residual;
  return result;
}

double penalized_objective(const ProblemInstance& instance, const Vector& w) {
  return loss_value(instance.loss, Vector(instance.A * w - instance.z)) +
         regularizer_value(instance.reg, Vector(instance.x0 + w));
}

double smin_via_po(const Matrix& G) {
  if (G.rows() < 1 || G.cols() < 1) fail(ErrorKind::Shape, "smin_via_po on an empty matrix");
  if (G.rows() < G.cols()) return 0.0;
  Eigen::BDCSVD<Matrix> svd(G);
  return svd.singularValues().minCoeff();
}

}  // namespace cgmt
