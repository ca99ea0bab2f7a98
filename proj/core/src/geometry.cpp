#include "cgmt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "cgmt/errors.hpp"

namespace cgmt {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_shape(const Vector& v, const ConeSpec& cone) {
  if (v.size() != cone.ambient_dim()) {
    fail(ErrorKind::Shape, "vector of length " + std::to_string(v.size()) +
                               " does not match cone dimension " +
                               std::to_string(cone.ambient_dim()));
  }
}

double l1_constraint(const Vector& v, const L1Descent& c) {
  double value = v.lpNorm<1>();
  for (std::size_t i = 0; i < c.support.size(); ++i) {
    const double vi = v[c.support[i]];
    value += c.signs[i] * vi - std::abs(vi);
  }
  return value;
}

// w(mu) for the l1 descent cone: support entries shifted against their sign,
// off-support entries soft-thresholded.
void l1_candidate(const Vector& v, const L1Descent& c, const std::vector<char>& on_support,
                  double mu, Vector& out) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!on_support[i]) {
      const double a = std::abs(v[i]) - mu;
      out[i] = a > 0.0 ? std::copysign(a, v[i]) : 0.0;
    }
  }
  for (std::size_t j = 0; j < c.support.size(); ++j) {
    out[c.support[j]] = v[c.support[j]] - mu * c.signs[j];
  }
}

// The constraint at w(mu) is a - k mu + sum_i (u_i - mu)_+ with a = signs'v_S,
// k = |S| and u the off-support magnitudes. It is piecewise linear and
// decreasing, so the root is found exactly after sorting u.
Vector project_l1_descent(const Vector& v, const L1Descent& c) {
  if (l1_constraint(v, c) <= 0.0) return v;

  std::vector<char> on_support(static_cast<std::size_t>(v.size()), 0);
  for (auto idx : c.support) on_support[static_cast<std::size_t>(idx)] = 1;

  double a = 0.0;
  for (std::size_t j = 0; j < c.support.size(); ++j) a += c.signs[j] * v[c.support[j]];
  std::vector<double> u;
  u.reserve(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!on_support[static_cast<std::size_t>(i)]) u.push_back(std::abs(v[i]));
  }
  std::sort(u.begin(), u.end(), std::greater<>());

  const double k = static_cast<double>(c.support.size());
  double mu = 0.0;
  double partial = 0.0;
  for (std::size_t j = 0; j <= u.size(); ++j) {
    if (j > 0) partial += u[j - 1];
    const double slope = k + static_cast<double>(j);
    if (slope == 0.0) continue;
    const double root = (a + partial) / slope;
    const double next = j < u.size() ? u[j] : 0.0;
    if (root >= next) {
      mu = std::max(root, 0.0);
      break;
    }
  }
  Vector w(v.size());
  l1_candidate(v, c, on_support, mu, w);
  return w;
}

}  // namespace

ConeSpec ConeSpec::full_space(Eigen::Index n) {
  if (n < 1) fail(ErrorKind::InvalidDimension, "cone dimension must be >= 1");
  return ConeSpec(FullSpace{n});
}

ConeSpec ConeSpec::nonnegative_orthant(Eigen::Index n) {
  if (n < 1) fail(ErrorKind::InvalidDimension, "cone dimension must be >= 1");
  return ConeSpec(NonnegativeOrthant{n});
}

ConeSpec ConeSpec::single_ray(Vector direction) {
  if (direction.size() < 1) fail(ErrorKind::InvalidDimension, "cone dimension must be >= 1");
  if (std::abs(direction.norm() - 1.0) > 1e-12) {
    fail(ErrorKind::InvalidArgument, "ray direction must have unit norm");
  }
  return ConeSpec(SingleRay{std::move(direction)});
}

ConeSpec ConeSpec::l1_descent(std::vector<Eigen::Index> support, std::vector<int> signs,
                              Eigen::Index n) {
  if (n < 1) fail(ErrorKind::InvalidDimension, "cone dimension must be >= 1");
  if (support.size() != signs.size()) {
    fail(ErrorKind::InvalidArgument, "support and signs must have equal length");
  }
  std::unordered_set<Eigen::Index> seen;
  for (auto idx : support) {
    if (idx < 0 || idx >= n) fail(ErrorKind::InvalidArgument, "support index out of range");
    if (!seen.insert(idx).second) fail(ErrorKind::InvalidArgument, "duplicate support index");
  }
  for (int s : signs) {
    if (s != 1 && s != -1) fail(ErrorKind::InvalidArgument, "signs must be +1 or -1");
  }
  return ConeSpec(L1Descent{std::move(support), std::move(signs), n});
}

ConeSpec ConeSpec::l1_descent_at(const Vector& x0) {
  std::vector<Eigen::Index> support;
  std::vector<int> signs;
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    if (x0[i] != 0.0) {
      support.push_back(i);
      signs.push_back(x0[i] > 0.0 ? 1 : -1);
    }
  }
  return l1_descent(std::move(support), std::move(signs), x0.size());
}

Eigen::Index ConeSpec::ambient_dim() const noexcept {
  return std::visit(overloaded{
                        [](const FullSpace& c) { return c.n; },
                        [](const NonnegativeOrthant& c) { return c.n; },
                        [](const SingleRay& c) { return c.direction.size(); },
                        [](const L1Descent& c) { return c.n; },
                    },
                    kind_);
}

const char* ConeSpec::kind_name() const noexcept {
  return std::visit(overloaded{
                        [](const FullSpace&) { return "full_space"; },
                        [](const NonnegativeOrthant&) { return "nonnegative_orthant"; },
                        [](const SingleRay&) { return "single_ray"; },
                        [](const L1Descent&) { return "l1_descent"; },
                    },
                    kind_);
}

Vector project_cone(const Vector& v, const ConeSpec& cone) {
  check_shape(v, cone);
  return std::visit(overloaded{
                        [&](const FullSpace&) -> Vector { return v; },
                        [&](const NonnegativeOrthant&) -> Vector { return v.cwiseMax(0.0); },
                        [&](const SingleRay& c) -> Vector {
                          return std::max(c.direction.dot(v), 0.0) * c.direction;
                        },
                        [&](const L1Descent& c) -> Vector { return project_l1_descent(v, c); },
                    },
                    cone.kind());
}

double restricted_sup(const Vector& h, const ConeSpec& cone) {
  return project_cone(h, cone).norm();
}

double membership_residual(const Vector& v, const ConeSpec& cone) {
  check_shape(v, cone);
  const double violation = std::visit(
      overloaded{
          [&](const FullSpace&) { return 0.0; },
          [&](const NonnegativeOrthant&) { return (-v).cwiseMax(0.0).maxCoeff(); },
          [&](const SingleRay& c) {
            return (v - std::max(c.direction.dot(v), 0.0) * c.direction).norm();
          },
          [&](const L1Descent& c) { return std::max(l1_constraint(v, c), 0.0); },
      },
      cone.kind());
  return violation <= 1e-10 * (1.0 + v.norm()) ? 0.0 : violation;
}

WidthEstimate gaussian_width(const ConeSpec& cone, RandomSource source, std::int64_t n_samples) {
  if (n_samples < 2) {
    fail(ErrorKind::InsufficientSamples, "gaussian_width needs at least 2 samples");
  }
  GaussianStream stream(source);
  const Eigen::Index n = cone.ambient_dim();
  // Welford running moments.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const double d = restricted_sup(stream.vector(n), cone);
    const double delta = d - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (d - mean);
  }
  const double var = m2 / static_cast<double>(n_samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(n_samples)), n_samples};
}

double l1_width_upper_bound(std::int64_t k, std::int64_t n) {
  if (k < 1 || n < 1 || k > n) {
    fail(ErrorKind::InvalidArgument, "l1_width_upper_bound requires 1 <= k <= n");
  }
  const double kd = static_cast<double>(k);
  return std::sqrt(2.0 * kd * std::log(2.0 * static_cast<double>(n) / kd));
}

GeometryStats geometry_stats(const ConeSpec& cone, int m, RandomSource source,
                             std::int64_t n_samples) {
  const auto width = gaussian_width(cone, source, n_samples);
  return {gamma_m(m).value, width.omega, width.omega_stderr, width.n_samples, m,
          cone.ambient_dim()};
}

}  // namespace cgmt
