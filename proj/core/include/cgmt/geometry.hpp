#pragma once

// Closed convex cones used as constraint sets and the Gaussian-width
// machinery built on top of their Euclidean projections.

#include <cstdint>
#include <variant>
#include <vector>

#include "cgmt/ensembles.hpp"

namespace cgmt {

struct FullSpace {
  Eigen::Index n = 0;
};

struct NonnegativeOrthant {
  Eigen::Index n = 0;
};

/// The ray {t * direction : t >= 0}; direction has unit norm.
struct SingleRay {
  Vector direction;
};

/// Descent cone of the l1 norm at a point with signed support S:
/// { w : signs' w_S + ||w_{S^c}||_1 <= 0 }.
struct L1Descent {
  std::vector<Eigen::Index> support;
  std::vector<int> signs;
  Eigen::Index n = 0;
};

class ConeSpec {
 public:
  using Kind = std::variant<FullSpace, NonnegativeOrthant, SingleRay, L1Descent>;

  static ConeSpec full_space(Eigen::Index n);
  static ConeSpec nonnegative_orthant(Eigen::Index n);
  static ConeSpec single_ray(Vector direction);
  static ConeSpec l1_descent(std::vector<Eigen::Index> support, std::vector<int> signs,
                             Eigen::Index n);
  /// l1 descent cone at x0 (support = nonzero entries).
  static ConeSpec l1_descent_at(const Vector& x0);

  Eigen::Index ambient_dim() const noexcept;
  const Kind& kind() const noexcept { return kind_; }
  const char* kind_name() const noexcept;

 private:
  explicit ConeSpec(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Euclidean projection onto the cone. For L1Descent the single KKT
/// multiplier is found exactly from the sorted off-support magnitudes.
Vector project_cone(const Vector& v, const ConeSpec& cone);

/// D(h) = ||Proj_cone(h)||_2: the maximum of h'w over unit vectors of the
/// cone, clamped at zero.
double restricted_sup(const Vector& h, const ConeSpec& cone);

/// 0 when v is in the cone (relative tolerance 1e-10), else the violation.
double membership_residual(const Vector& v, const ConeSpec& cone);

struct WidthEstimate {
  double omega = 0.0;
  double omega_stderr = 0.0;
  std::int64_t n_samples = 0;
};

/// Monte Carlo estimate of E D(h), h ~ N(0, I_n); the h_i are read
/// consecutively from `source`.
WidthEstimate gaussian_width(const ConeSpec& cone, RandomSource source, std::int64_t n_samples);

/// sqrt(2 k ln(2n/k)), the standard upper estimate of the width of the
/// l1 descent cone at a k-sparse point.
double l1_width_upper_bound(std::int64_t k, std::int64_t n);

struct GeometryStats {
  double gamma_m = 0.0;
  double omega = 0.0;
  double omega_stderr = 0.0;
  std::int64_t n_samples = 0;
  int m = 0;
  Eigen::Index ambient_dim = 0;

  /// (1 - eps) gamma_m > omega > eps gamma_m.
  bool in_linear_regime(double eps) const noexcept {
    return (1.0 - eps) * gamma_m > omega && omega > eps * gamma_m;
  }
};

GeometryStats geometry_stats(const ConeSpec& cone, int m, RandomSource source,
                             std::int64_t n_samples);

}  // namespace cgmt
