#include "cgmt/proxcalc.hpp"

#include <cmath>
#include <limits>

#include "cgmt/errors.hpp"

namespace cgmt {
namespace {

void require_step(double step) {
  if (!(step > 0.0)) fail(ErrorKind::InvalidArgument, "prox step must be positive");
}

}  // namespace

RegularizerSpec RegularizerSpec::make(RegularizerKind kind, double weight) {
  if (!(weight >= 0.0)) fail(ErrorKind::InvalidArgument, "regularizer weight must be >= 0");
  return {kind, weight};
}

const char* to_string(LossKind kind) noexcept {
  switch (kind) {
    case LossKind::HalfSquaredL2: return "half_sq_l2";
    case LossKind::L2Norm: return "l2";
    case LossKind::L1Norm: return "l1";
  }
  return "?";
}

const char* to_string(RegularizerKind kind) noexcept {
  switch (kind) {
    case RegularizerKind::Zero: return "zero";
    case RegularizerKind::L1Norm: return "l1";
  }
  return "?";
}

double loss_value(const LossSpec& spec, const Vector& v) {
  switch (spec.kind) {
    case LossKind::HalfSquaredL2: return 0.5 * v.squaredNorm();
    case LossKind::L2Norm: return v.norm();
    case LossKind::L1Norm: return v.lpNorm<1>();
  }
  return 0.0;
}

// Points produced by project_dual_ball may overshoot the unit ball by a
// rounding error.
constexpr double kDualBallSlack = 1e-12;

double conjugate_value(const LossSpec& spec, const Vector& u) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (spec.kind) {
    case LossKind::HalfSquaredL2: return 0.5 * u.squaredNorm();
    case LossKind::L2Norm: return u.norm() <= 1.0 + kDualBallSlack ? 0.0 : inf;
    case LossKind::L1Norm:
      return u.size() == 0 || u.lpNorm<Eigen::Infinity>() <= 1.0 + kDualBallSlack ? 0.0 : inf;
  }
  return inf;
}

double regularizer_value(const RegularizerSpec& spec, const Vector& x) {
  return spec.kind == RegularizerKind::L1Norm ? spec.weight * x.lpNorm<1>() : 0.0;
}

Vector soft_threshold(const Vector& v, double threshold) {
  return v.unaryExpr([threshold](double x) {
    const double a = std::abs(x) - threshold;
    return a > 0.0 ? std::copysign(a, x) : 0.0;
  });
}

Vector prox_regularizer(const RegularizerSpec& spec, const Vector& v, double step) {
  require_step(step);
  if (spec.kind == RegularizerKind::Zero || spec.weight == 0.0) return v;
  return soft_threshold(v, step * spec.weight);
}

Vector prox_regularizer_conjugate(const RegularizerSpec& spec, const Vector& v) {
  if (spec.kind == RegularizerKind::Zero) return Vector::Zero(v.size());
  return v.cwiseMax(-spec.weight).cwiseMin(spec.weight);
}

Vector project_dual_ball(const LossSpec& spec, const Vector& u) {
  switch (spec.kind) {
    case LossKind::HalfSquaredL2: return u;
    case LossKind::L2Norm: {
      const double norm = u.norm();
      return norm > 1.0 ? Vector(u / norm) : u;
    }
    case LossKind::L1Norm: return u.cwiseMax(-1.0).cwiseMin(1.0);
  }
  return u;
}

Vector prox_conjugate(const LossSpec& spec, const Vector& u, double step, const Vector& shift) {
  require_step(step);
  if (shift.size() != u.size()) fail(ErrorKind::Shape, "prox_conjugate shift length mismatch");
  if (spec.kind == LossKind::HalfSquaredL2) return (u - step * shift) / (1.0 + step);
  return project_dual_ball(spec, u - step * shift);
}

}  // namespace cgmt
