#pragma once

// Losses, regularizers, their convex conjugates and proximal maps.
//
//   loss            L(v)          L*(u)
//   half_sq_l2      ||v||^2 / 2   ||u||^2 / 2
//   l2              ||v||_2       indicator{ ||u||_2 <= 1 }
//   l1              ||v||_1       indicator{ ||u||_inf <= 1 }

#include "cgmt/ensembles.hpp"

namespace cgmt {

enum class LossKind { HalfSquaredL2, L2Norm, L1Norm };
enum class RegularizerKind { Zero, L1Norm };

struct LossSpec {
  LossKind kind = LossKind::HalfSquaredL2;
};

struct RegularizerSpec {
  RegularizerKind kind = RegularizerKind::Zero;
  double weight = 0.0;

  /// Throws InvalidArgument on a negative weight.
  static RegularizerSpec make(RegularizerKind kind, double weight);
};

const char* to_string(LossKind kind) noexcept;
const char* to_string(RegularizerKind kind) noexcept;

double loss_value(const LossSpec& spec, const Vector& v);

/// +infinity outside dom L*.
double conjugate_value(const LossSpec& spec, const Vector& u);

/// weight * f(x).
double regularizer_value(const RegularizerSpec& spec, const Vector& x);

/// argmin_x 1/2 ||x - v||^2 + step * weight * f(x).
Vector prox_regularizer(const RegularizerSpec& spec, const Vector& v, double step);

/// Prox of (weight * f)^*, an indicator: clipping to [-weight, weight] for
/// l1, the origin for Zero. Independent of the step.
Vector prox_regularizer_conjugate(const RegularizerSpec& spec, const Vector& v);

/// Euclidean projection onto dom L*.
Vector project_dual_ball(const LossSpec& spec, const Vector& u);

/// argmin_p 1/2 ||p - u||^2 + step * (L*(p) + shift' p).
Vector prox_conjugate(const LossSpec& spec, const Vector& u, double step, const Vector& shift);

Vector soft_threshold(const Vector& v, double threshold);

}  // namespace cgmt
