#include "cgmt/aoengine.hpp"

#include <algorithm>
#include <limits>

namespace cgmt {
namespace {

struct ValueAndSubgradient {
  double value;
  Vector subgradient;
};

// Projected subgradient descent over the ball ||w|| <= radius, starting at
// w = 0, with normalized steps radius / k^0.75. Returns the best visited
// point.
template <class Objective>
std::pair<Vector, double> minimize_over_ball(Eigen::Index dim, double radius,
                                             std::int64_t iterations, Objective&& objective) {
  Vector w = Vector::Zero(dim);
  auto current = objective(w);
  Vector best = w;
  double best_value = current.value;
  for (std::int64_t k = 1; k <= iterations; ++k) {
    const double gnorm = current.subgradient.norm();
    if (gnorm == 0.0) break;
    const double step = radius / std::pow(static_cast<double>(k), 0.75);
    w -= (step / gnorm) * current.subgradient;
    const double wn = w.norm();
    if (wn > radius) w *= radius / wn;
    current = objective(w);
    if (current.value < best_value) {
      best_value = current.value;
      best = w;
    }
  }
  return {best, best_value};
}

struct L1Surrogate {
  std::vector<char> on_support;
  Vector sign_on_support;  // zero off the support
};

L1Surrogate l1_surrogate(const SubdifferentialSpec& spec) {
  if (spec.norm != "l1") {
    fail(ErrorKind::Capability, "unsupported subdifferential: " + spec.norm);
  }
  if (spec.support.size() != spec.signs.size()) {
    fail(ErrorKind::InvalidArgument, "support and signs must have equal length");
  }
  L1Surrogate out{std::vector<char>(static_cast<std::size_t>(spec.n), 0), Vector::Zero(spec.n)};
  for (std::size_t j = 0; j < spec.support.size(); ++j) {
    const auto idx = spec.support[j];
    if (idx < 0 || idx >= spec.n) fail(ErrorKind::InvalidArgument, "support index out of range");
    out.on_support[idx] = 1;
    out.sign_on_support[idx] = spec.signs[j];
  }
  return out;
}

// max_{s in subdiff} s'w and a maximizing s.
double l1_support_term(const L1Surrogate& s, const Vector& w, Vector& grad) {
  double value = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (s.on_support[i]) {
      value += s.sign_on_support[i] * w[i];
      grad[i] = s.sign_on_support[i];
    } else {
      value += std::abs(w[i]);
      grad[i] = w[i] > 0.0 ? 1.0 : (w[i] < 0.0 ? -1.0 : 0.0);
    }
  }
  return value;
}

// max_{||u||_inf <= 1} a'u + c ||u||_2, returning the maximizer.
double box_max(const Vector& a, double c, Vector& u_star) {
  const Eigen::Index m = a.size();
  if (c >= 0.0) {
    // Convex in u: attained at the vertex sign(a).
    u_star = a.unaryExpr([](double x) { return x >= 0.0 ? 1.0 : -1.0; });
    return a.lpNorm<1>() + c * std::sqrt(static_cast<double>(m));
  }
  // Concave: the maximizer is clip(t a) for some t in [0, 1 / min|a_i|]
  // (KKT), so search that one-parameter path.
  const double amax = a.lpNorm<Eigen::Infinity>();
  if (amax == 0.0) {
    u_star = Vector::Zero(m);
    return 0.0;
  }
  double amin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < m; ++i) {
    if (a[i] != 0.0) amin = std::min(amin, std::abs(a[i]));
  }
  const double t_max = 1.0 / amin;
  auto along = [&](double t) {
    const Vector u = (t * a).cwiseMax(-1.0).cwiseMin(1.0);
    return a.dot(u) + c * u.norm();
  };
  // Coarse scan to bracket, then golden section. Negated for minimization.
  constexpr int kScan = 64;
  int best_i = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScan; ++i) {
    const double v = along(t_max * i / kScan);
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }
  const double lo = t_max * std::max(best_i - 1, 0) / kScan;
  const double hi = t_max * std::min(best_i + 1, kScan) / kScan;
  const auto refined =
      minimize_strongly_convex([&](double t) { return -along(t); }, lo, hi, 1e-12 * t_max);
  const double t = -refined.value >= best_v ? refined.argmin : t_max * best_i / kScan;
  u_star = (t * a).cwiseMax(-1.0).cwiseMin(1.0);
  return a.dot(u_star) + c * u_star.norm();
}

ValueAndSubgradient general_objective(AOGeneralKind kind, const Vector& g, const Vector& h,
                                      const L1Surrogate& s, const AOGeneralParams& p,
                                      const Vector& w) {
  const double wn = w.norm();
  const double root = std::sqrt(wn * wn + p.sigma * p.sigma);
  Vector sub_s(w.size());
  const double reg = p.lambda * l1_support_term(s, w, sub_s);
  Vector grad = p.lambda * sub_s;
  double value = reg;

  switch (kind) {
    case AOGeneralKind::GenLasso:
    case AOGeneralKind::GenL2Lasso: {
      const double b = g.norm();
      const double c = root * b + h.dot(w);
      const Vector dc = (b / root) * w + h;
      if (kind == AOGeneralKind::GenL2Lasso) {
        // max over 0 <= beta <= 1 of beta c.
        if (c > 0.0) {
          value += c;
          grad += dc;
        }
      } else {
        // max over 0 <= beta <= K_u of beta c - beta^2 / 2.
        const double beta = std::clamp(c, 0.0, p.K_u);
        value += beta * c - 0.5 * beta * beta;
        grad += beta * dc;
      }
      break;
    }
    case AOGeneralKind::Lad: {
      const Eigen::Index m = g.size();
      const Eigen::Index s_noise = std::clamp<Eigen::Index>(p.sparse_noise, 0, m);
      Vector a(m);
      a.head(s_noise) = root * g.head(s_noise);
      a.tail(m - s_noise) = wn * g.tail(m - s_noise);
      Vector u;
      value += box_max(a, h.dot(w), u);
      const double on_noise = g.head(s_noise).dot(u.head(s_noise));
      const double off_noise = g.tail(m - s_noise).dot(u.tail(m - s_noise));
      grad += (on_noise / root) * w + u.norm() * h;
      if (wn > 0.0) grad += (off_noise / wn) * w;
      break;
    }
  }
  return {value, std::move(grad)};
}

}  // namespace

DCurve DCurve::make(double gamma_m, double omega, double sigma, int m, double K) {
  if (m < 1) fail(ErrorKind::InvalidDimension, "m must be >= 1");
  if (!(sigma > 0.0)) fail(ErrorKind::InvalidArgument, "sigma must be positive");
  if (!(K > 0.0)) fail(ErrorKind::InvalidArgument, "K must be positive");
  if (!(omega >= 0.0)) fail(ErrorKind::InvalidArgument, "omega must be >= 0");
  if (!(gamma_m > omega)) {
    fail(ErrorKind::Regime, "gamma_m must exceed omega (linear-regime assumption violated)");
  }
  return DCurve(gamma_m, omega, sigma, m, K);
}

double DCurve::strong_convexity_modulus() const noexcept {
  return sigma_ * sigma_ * gamma_m_ /
         (std::sqrt(static_cast<double>(m_)) * std::pow(K_ * K_ + sigma_ * sigma_, 1.5));
}

long double DCurve::eval_extended(long double alpha) const noexcept {
  const long double s = sigma_;
  return (std::sqrt(alpha * alpha + s * s) * gamma_m_ - alpha * omega_) /
         std::sqrt(static_cast<long double>(m_));
}

double d_value(const DCurve& curve, double alpha) {
  if (!(alpha >= 0.0 && alpha <= curve.K())) {
    fail(ErrorKind::Domain, "alpha outside [0, K]");
  }
  const double sigma = curve.sigma();
  return (std::sqrt(alpha * alpha + sigma * sigma) * curve.gamma_m() - alpha * curve.omega()) /
         std::sqrt(static_cast<double>(curve.m()));
}

const char* to_string(PredictionMethod method) noexcept {
  return method == PredictionMethod::ClosedForm ? "closed_form" : "numeric";
}

Prediction predict(const DCurve& curve) {
  const double gamma = curve.gamma_m();
  const double omega = curve.omega();
  const double sigma = curve.sigma();
  if (!(omega < gamma)) fail(ErrorKind::Regime, "omega >= gamma_m");
  const double gap = std::sqrt((gamma - omega) * (gamma + omega));
  Prediction p;
  p.alpha_star = sigma * omega / gap;
  if (!(curve.K() > p.alpha_star)) {
    fail(ErrorKind::Domain, "K must exceed sigma omega / sqrt(gamma_m^2 - omega^2)");
  }
  p.d_star = sigma * gap / std::sqrt(static_cast<double>(curve.m()));
  p.nse = (omega / gap) * (omega / gap);
  p.method = PredictionMethod::ClosedForm;

  // d is a difference of two terms of size sqrt(alpha^2+sigma^2) gamma / sqrt(m),
  // so the argmin is only resolvable to about sqrt(eps * term / d''(alpha*)).
  const double a2s2 = p.alpha_star * p.alpha_star + sigma * sigma;
  const double sqrt_m = std::sqrt(static_cast<double>(curve.m()));
  const double curvature = sigma * sigma * gamma / (sqrt_m * a2s2 * std::sqrt(a2s2));
  const double term = std::sqrt(a2s2) * gamma / sqrt_m;
  const double resolvable =
      10.0 * std::sqrt(static_cast<double>(std::numeric_limits<long double>::epsilon()) * term /
                       curvature);
  const double alpha_tol = std::max(1e-8 * std::max(1.0, p.alpha_star), resolvable);
  const auto numeric = minimize_strongly_convex(
      [&](double a) { return curve.eval_extended(a); }, 0.0, curve.K(), 1e-11);
  if (std::abs(numeric.argmin - p.alpha_star) > alpha_tol ||
      std::abs(numeric.value - p.d_star) > 1e-8 * std::max(1.0, p.d_star)) {
    fail(ErrorKind::Numeric, "closed-form prediction disagrees with numeric minimization");
  }
  return p;
}

AOSample ao_cone_value(const Vector& g, const Vector& h, double sigma, const ConeSpec& cone,
                       double K) {
  if (!(sigma > 0.0)) fail(ErrorKind::InvalidArgument, "sigma must be positive");
  if (!(K > 0.0)) fail(ErrorKind::InvalidArgument, "K must be positive");
  if (g.size() < 1) fail(ErrorKind::InvalidDimension, "g must be nonempty");
  const double sqrt_m = std::sqrt(static_cast<double>(g.size()));
  const double b = g.norm();
  const double D = restricted_sup(Vector(-h), cone);

  AOSample sample{g, h, 0.0, 0.0, false};
  double alpha = K;
  if (b > D) {
    alpha = sigma * D / std::sqrt((b - D) * (b + D));
    if (alpha >= K) alpha = K;
  }
  sample.at_boundary = alpha >= K;
  sample.minimizer_norm = alpha;
  const double value = (std::sqrt(alpha * alpha + sigma * sigma) * b - alpha * D) / sqrt_m;
  sample.phi = std::max(value, 0.0);
  return sample;
}

double ao_smin_value(const Vector& g, const Vector& h) { return g.norm() - h.norm(); }

AOSample ao_l2_lasso_value(const Vector& g, const Vector& h, const Vector& x0, double lambda,
                           double sigma, double K_w, std::int64_t iterations) {
  if (h.size() != x0.size()) fail(ErrorKind::Shape, "h and x0 must have equal length");
  if (!(sigma > 0.0) || !(K_w > 0.0) || !(lambda >= 0.0)) {
    fail(ErrorKind::InvalidArgument, "ao_l2_lasso_value needs sigma, K_w > 0 and lambda >= 0");
  }
  const double b = g.norm();
  auto objective = [&](const Vector& w) -> ValueAndSubgradient {
    const double root = std::sqrt(w.squaredNorm() + sigma * sigma);
    const double c = root * b + h.dot(w);
    const Vector x = x0 + w;
    ValueAndSubgradient out{std::max(c, 0.0) + lambda * x.lpNorm<1>(),
                            lambda * x.unaryExpr([](double v) {
                              return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
                            })};
    if (c > 0.0) out.subgradient += (b / root) * w + h;
    return out;
  };
  auto [w, value] = minimize_over_ball(h.size(), K_w, iterations, objective);
  return {g, h, value, w.norm(), w.norm() >= K_w * (1.0 - 1e-12)};
}

const char* to_string(AOGeneralKind kind) noexcept {
  switch (kind) {
    case AOGeneralKind::GenLasso: return "gen_lasso";
    case AOGeneralKind::GenL2Lasso: return "gen_l2_lasso";
    case AOGeneralKind::Lad: return "lad";
  }
  return "?";
}

SubdifferentialSpec SubdifferentialSpec::l1_at(const Vector& x0) {
  SubdifferentialSpec spec;
  spec.n = x0.size();
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    if (x0[i] != 0.0) {
      spec.support.push_back(i);
      spec.signs.push_back(x0[i] > 0.0 ? 1 : -1);
    }
  }
  return spec;
}

double ao_general_objective(AOGeneralKind kind, const Vector& g, const Vector& h,
                            const SubdifferentialSpec& subdiff, const AOGeneralParams& params,
                            const Vector& w) {
  const auto surrogate = l1_surrogate(subdiff);
  return general_objective(kind, g, h, surrogate, params, w).value;
}

AOSample ao_general_value(AOGeneralKind kind, const Vector& g, const Vector& h,
                          const SubdifferentialSpec& subdiff, const AOGeneralParams& params) {
  const auto surrogate = l1_surrogate(subdiff);
  if (subdiff.n != h.size()) fail(ErrorKind::Shape, "subdifferential dimension must match h");
  if (!(params.sigma > 0.0) || !(params.K_w > 0.0) || !(params.lambda >= 0.0)) {
    fail(ErrorKind::InvalidArgument, "ao_general_value needs sigma, K_w > 0 and lambda >= 0");
  }
  if (kind == AOGeneralKind::GenLasso && !(params.K_u > 0.0)) {
    fail(ErrorKind::InvalidArgument, "gen_lasso needs K_u > 0");
  }
  auto [w, value] = minimize_over_ball(h.size(), params.K_w, params.iterations,
                                       [&](const Vector& x) {
                                         return general_objective(kind, g, h, surrogate, params, x);
                                       });
  return {g, h, value, w.norm(), w.norm() >= params.K_w * (1.0 - 1e-12)};
}

}  // namespace cgmt
