#pragma once

// Auxiliary-optimization side: per-sample AO values, the scalarized
// deterministic curve
//
//   d(alpha) = sqrt(alpha^2 + sigma^2) gamma_m / sqrt(m) - alpha omega / sqrt(m)
//
// on [0, K] and its closed-form minimizer.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cgmt/errors.hpp"
#include "cgmt/geometry.hpp"

namespace cgmt {

class DCurve {
 public:
  /// Requires gamma_m > omega >= 0, sigma > 0, m >= 1, K > 0.
  static DCurve make(double gamma_m, double omega, double sigma, int m, double K);

  double gamma_m() const noexcept { return gamma_m_; }
  double omega() const noexcept { return omega_; }
  double sigma() const noexcept { return sigma_; }
  int m() const noexcept { return m_; }
  double K() const noexcept { return K_; }

  /// Lower bound on d'' over [0, K]: sigma^2 gamma_m / (sqrt(m) (K^2 + sigma^2)^{3/2}).
  double strong_convexity_modulus() const noexcept;

  /// d evaluated in extended precision, without the domain check. Used to
  /// resolve the minimizer below the double-precision flat spot.
  long double eval_extended(long double alpha) const noexcept;

 private:
  DCurve(double gamma_m, double omega, double sigma, int m, double K)
      : gamma_m_(gamma_m), omega_(omega), sigma_(sigma), m_(m), K_(K) {}
  double gamma_m_, omega_, sigma_;
  int m_;
  double K_;
};

double d_value(const DCurve& curve, double alpha);

struct ScalarMinimum {
  double argmin = 0.0;
  double value = 0.0;
};

/// Golden-section search on [lo, hi]. For a unimodal f the returned argmin
/// is within tol of the true minimizer. Endpoints are compared at the end and win
/// ties, so monotone functions report the exact boundary point. f may return any
/// floating type; comparisons happen in that type.
template <class F>
ScalarMinimum minimize_strongly_convex(F&& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) fail(ErrorKind::InvalidTolerance, "tolerance must be positive");
  if (!(lo <= hi)) fail(ErrorKind::Domain, "empty search interval");
  using Value = decltype(f(lo));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  Value fc = f(c);
  Value fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  double best = 0.5 * (a + b);
  Value best_value = f(best);
  for (double candidate : {lo, hi}) {
    const Value value = f(candidate);
    if (value <= best_value) {
      best = candidate;
      best_value = value;
    }
  }
  return {best, static_cast<double>(best_value)};
}

enum class PredictionMethod { ClosedForm, Numeric };

struct Prediction {
  double alpha_star = 0.0;
  double d_star = 0.0;
  double nse = 0.0;
  PredictionMethod method = PredictionMethod::ClosedForm;
};

const char* to_string(PredictionMethod method) noexcept;

/// alpha* = sigma omega / sqrt(gamma^2 - omega^2),
/// d*     = sigma sqrt(gamma^2 - omega^2) / sqrt(m),
/// nse    = omega^2 / (gamma^2 - omega^2).
/// Throws Regime if omega >= gamma_m and Domain if K <= alpha*.
Prediction predict(const DCurve& curve);

struct AOSample {
  Vector g;
  Vector h;
  double phi = 0.0;
  double minimizer_norm = 0.0;
  /// The minimizing alpha sits on the upper bound K (undersized K or
  /// ||g|| <= D(-h)).
  bool at_boundary = false;
};

/// Scalarized AO of the cone-constrained least-squares problem, normalized
/// by sqrt(m):
///   min_{0<=alpha<=K} ( sqrt(alpha^2+sigma^2) ||g|| / sqrt(m) - alpha D(-h) / sqrt(m) )_+
AOSample ao_cone_value(const Vector& g, const Vector& h, double sigma, const ConeSpec& cone,
                       double K);

/// ||g||_2 - ||h||_2, the AO of the minimum singular value.
double ao_smin_value(const Vector& g, const Vector& h);

/// Inexact evaluator (best visited point of projected subgradient descent,
/// hence an upper bound on the true minimum) of
///   min_{||w||<=K_w} ( sqrt(||w||^2+sigma^2) ||g|| + h'w )_+ + lambda ||x0 + w||_1.
AOSample ao_l2_lasso_value(const Vector& g, const Vector& h, const Vector& x0, double lambda,
                           double sigma, double K_w, std::int64_t iterations = 100'000);

enum class AOGeneralKind { GenLasso, GenL2Lasso, Lad };

const char* to_string(AOGeneralKind kind) noexcept;

/// First-order surrogate of the regularizer at x0. Only the l1 norm is
/// supported: s_S = signs, s_{S^c} in [-1, 1].
struct SubdifferentialSpec {
  std::string norm = "l1";
  std::vector<Eigen::Index> support;
  std::vector<int> signs;
  Eigen::Index n = 0;

  static SubdifferentialSpec l1_at(const Vector& x0);
};

struct AOGeneralParams {
  double lambda = 0.0;
  double sigma = 1.0;
  double K_w = 1.0;
  double K_u = 1.0;               // gen_lasso only
  Eigen::Index sparse_noise = 0;  // lad only: number of nonzero noise entries
  std::int64_t iterations = 100'000;
};

/// Inner maximizations (over u and s) are solved exactly; the outer
/// minimization over w is projected subgradient descent, so the result is
/// an upper bound like ao_l2_lasso_value. Unnormalized.
AOSample ao_general_value(AOGeneralKind kind, const Vector& g, const Vector& h,
                          const SubdifferentialSpec& subdiff, const AOGeneralParams& params);

/// The objective minimized by ao_general_value, evaluated at w (inner
/// maximizations exact). Exposed for oracles and tests.
double ao_general_objective(AOGeneralKind kind, const Vector& g, const Vector& h,
                            const SubdifferentialSpec& subdiff, const AOGeneralParams& params,
                            const Vector& w);

}  // namespace cgmt
