#include "cgmt/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "cgmt/errors.hpp"

namespace cgmt {
namespace {

std::string format_number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%g", value);
  return buffer;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

double relative_gap(double empirical, double predicted) {
  const double diff = std::abs(empirical - predicted);
  return predicted > 0.0 ? diff / predicted : diff;
}

// Cone with the canonical sign pattern (+1 on the first k coordinates). The
// distribution of D(h) does not depend on the signs or the support location.
ConeSpec canonical_cone(int n, int k) {
  std::vector<Eigen::Index> support(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) support[static_cast<std::size_t>(i)] = i;
  return ConeSpec::l1_descent(std::move(support), std::vector<int>(static_cast<std::size_t>(k), 1),
                              n);
}

double cone_ao_lipschitz(const ExperimentConfig& config) {
  const double K = config.resolved_K();
  const double r_x = std::sqrt(K * K + config.sigma * config.sigma);
  return std::sqrt(2.0) * r_x / std::sqrt(static_cast<double>(config.m));
}

void check_convergence(const ExperimentReport& report) {
  if (report.summary.unconverged * 20 > static_cast<std::int64_t>(report.per_trial.size())) {
    fail(ErrorKind::ExperimentInvalid,
         std::to_string(report.summary.unconverged) + " of " +
             std::to_string(report.per_trial.size()) + " primary solves did not converge");
  }
}

ExperimentReport start_report(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.config = config;
  report.config.threads = 0;
  return report;
}

POResult solve_trial_po(const ExperimentConfig& config, const TrialDraw& draw,
                        const ConeSpec& cone) {
  auto instance = ProblemInstance::make(draw.A, draw.z, draw.x0, config.sigma,
                                        LossSpec{LossKind::L2Norm}, RegularizerSpec{}, cone,
                                        SolverBounds{config.resolved_K(), 0.0});
  SolverOptions options;
  options.rel_tol = config.solver_rel_tol;
  return solve_cone_lasso(instance, options);
}

}  // namespace

const char* to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::TailComparison: return "tail_comparison";
    case ExperimentKind::NseConvergence: return "nse_convergence";
    case ExperimentKind::ConcentrationSmin: return "concentration_smin";
    case ExperimentKind::ConcentrationPhi: return "concentration_phi";
    case ExperimentKind::LipschitzCheck: return "lipschitz_check";
    case ExperimentKind::WidthTable: return "width_table";
  }
  return "?";
}

std::optional<ExperimentKind> parse_experiment_kind(const std::string& name) noexcept {
  for (auto kind : {ExperimentKind::TailComparison, ExperimentKind::NseConvergence,
                    ExperimentKind::ConcentrationSmin, ExperimentKind::ConcentrationPhi,
                    ExperimentKind::LipschitzCheck, ExperimentKind::WidthTable}) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorKind::InvalidConfig, what); };
  if (kind == ExperimentKind::WidthTable) {
    for (const auto& [pk, pn] : width_pairs) {
      if (pk < 1 || pn < 1 || pk > pn) bad("width pairs need 1 <= k <= n");
    }
    if (width_samples < 2) bad("width_samples must be >= 2");
    return;
  }
  if (n < 1 || m < 1) bad("n and m must be >= 1");
  if (k < 0 || k > n) bad("k must satisfy 0 <= k <= n");
  if (!(sigma > 0.0)) bad("sigma must be positive");
  if (!(lambda >= 0.0)) bad("lambda must be >= 0");
  if (trials < 1) bad("trials must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) bad("epsilon must lie in (0, 1)");
  const bool cdf_based = kind == ExperimentKind::TailComparison ||
                         kind == ExperimentKind::ConcentrationSmin ||
                         kind == ExperimentKind::ConcentrationPhi;
  if (cdf_based && trials < 30) bad("CDF-based experiments need trials >= 30");
  if (kind == ExperimentKind::TailComparison && cdf_grid < 2) bad("cdf_grid must be >= 2");
  if (kind == ExperimentKind::ConcentrationSmin && m <= n) {
    bad("concentration_smin requires m > n");
  }
  if (kind == ExperimentKind::NseConvergence && width_samples < 2) {
    bad("width_samples must be >= 2");
  }
  if (kind == ExperimentKind::ConcentrationPhi && lipschitz_pairs < 0) {
    bad("lipschitz_pairs must be >= 0");
  }
  for (double t : t_grid) {
    if (!(t >= 0.0)) bad("t_grid entries must be >= 0");
  }
  if (!(solver_rel_tol > 0.0)) bad("solver_rel_tol must be positive");
}

double ExperimentConfig::resolved_K() const noexcept {
  return K > 0.0 ? K : 10.0 * sigma * std::sqrt(static_cast<double>(n));
}

double ExperimentConfig::resolved_slack() const noexcept {
  if (slack >= 0.0) return slack;
  const double eps = dkw_epsilon(trials);
  return kind == ExperimentKind::TailComparison ? 2.0 * eps : eps;
}

double dkw_epsilon(std::int64_t n, double alpha) {
  if (n < 1) fail(ErrorKind::InsufficientSamples, "DKW band needs at least one sample");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

bool ExperimentReport::all_pass() const noexcept {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

int resolve_threads(int requested) noexcept {
  if (const char* env = std::getenv("CGMT_LAB_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) requested = static_cast<int>(value);
  }
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::int64_t count, int threads,
                  const std::function<void(std::int64_t)>& fn) {
  const int workers =
      static_cast<int>(std::min<std::int64_t>(resolve_threads(threads), std::max<std::int64_t>(count, 1)));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::int64_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

Vector sparse_signal(GaussianStream& stream, int n, int k) {
  Vector x0 = Vector::Zero(n);
  if (k == 0) return x0;
  x0.head(k) = stream.vector(k);
  const double norm = x0.norm();
  if (norm > 0.0) x0 /= norm;
  return x0;
}

TrialDraw draw_trial(const ExperimentConfig& config, std::uint64_t trial_index, bool need_ao) {
  GaussianStream stream(RandomSource{config.master_seed, trial_index});
  TrialDraw draw;
  draw.A = stream.matrix(config.m, config.n);
  draw.z = config.sigma * stream.vector(config.m);
  if (config.zero_noise) draw.z.setZero();
  draw.x0 = sparse_signal(stream, config.n, config.k);
  if (need_ao) {
    draw.g = stream.vector(config.m);
    draw.h = stream.vector(config.n);
  }
  return draw;
}

ExperimentReport run_tail_comparison(const ExperimentConfig& config) {
  if (config.kind != ExperimentKind::TailComparison) {
    fail(ErrorKind::InvalidConfig, "run_tail_comparison needs kind tail_comparison");
  }
  auto report = start_report(config);
  const double sqrt_m = std::sqrt(static_cast<double>(config.m));
  const double K = config.resolved_K();
  report.per_trial.resize(static_cast<std::size_t>(config.trials));

  parallel_for(config.trials, config.threads, [&](std::int64_t i) {
    const auto draw = draw_trial(config, static_cast<std::uint64_t>(i));
    const auto cone = ConeSpec::l1_descent_at(draw.x0);
    const auto po = solve_trial_po(config, draw, cone);
    AOSample ao;
    if (config.zero_noise) {
      // sigma = 0: alpha = 0 attains the clamped minimum unless ||g|| <= D(-h).
      const double D = restricted_sup(Vector(-draw.h), cone);
      ao.minimizer_norm = draw.g.norm() > D ? 0.0 : K;
    } else {
      ao = ao_cone_value(draw.g, draw.h, config.sigma, cone, K);
    }
    report.per_trial[static_cast<std::size_t>(i)] = {i, po.objective / sqrt_m, po.w_hat.norm(),
                                                     ao.phi, ao.minimizer_norm, po.converged};
  });

  for (const auto& t : report.per_trial) report.summary.unconverged += t.converged ? 0 : 1;
  check_convergence(report);

  std::vector<double> Phi, phi;
  for (const auto& t : report.per_trial) {
    Phi.push_back(t.Phi);
    phi.push_back(t.phi);
  }
  std::sort(Phi.begin(), Phi.end());
  std::sort(phi.begin(), phi.end());
  const double lo = std::min(Phi.front(), phi.front());
  const double hi = std::max(Phi.back(), phi.back());
  const double N = static_cast<double>(config.trials);
  const double slack = config.resolved_slack();
  report.summary.slack = slack;

  double lower_margin = std::numeric_limits<double>::infinity();
  double upper_margin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < config.cdf_grid; ++j) {
    const double c = lo + (hi - lo) * j / (config.cdf_grid - 1);
    const auto below = [&](const std::vector<double>& v) {  // #{x < c}
      return static_cast<double>(std::lower_bound(v.begin(), v.end(), c) - v.begin());
    };
    const auto at_or_below = [&](const std::vector<double>& v) {  // #{x <= c}
      return static_cast<double>(std::upper_bound(v.begin(), v.end(), c) - v.begin());
    };
    const double F_Phi = below(Phi) / N;
    const double F_phi = at_or_below(phi) / N;
    report.cdf_grid_values.push_back({c, F_Phi, F_phi});

    const double Phi_above = 1.0 - at_or_below(Phi) / N;  // P(Phi > c)
    const double phi_at_or_above = 1.0 - below(phi) / N;  // P(phi >= c)
    lower_margin = std::min(lower_margin, 2.0 * F_phi + slack - F_Phi);
    upper_margin = std::min(upper_margin, 2.0 * phi_at_or_above + slack - Phi_above);
  }
  report.verdicts.push_back({"lower_tail", lower_margin >= 0.0, lower_margin});
  report.verdicts.push_back({"upper_tail", upper_margin >= 0.0, upper_margin});
  report.claims["lower_tail"] =
      "P(Phi < c) <= 2 P(phi <= c) at every grid point c, up to the DKW slack";
  report.claims["upper_tail"] =
      "P(Phi > c) <= 2 P(phi >= c) at every grid point c, up to the DKW slack";

  if (config.zero_noise) {
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& t : report.per_trial) {
      margin = std::min({margin, t.phi, -std::abs(t.Phi) + 1e-12});
    }
    report.verdicts.push_back({"zero_noise_nonnegative", margin >= 0.0, margin});
    report.claims["zero_noise_nonnegative"] = "with z = 0: Phi = 0 and phi >= 0 in every trial";
  }
  report.summary.gamma_m = gamma_m(config.m).value;
  report.summary.extras["K"] = K;
  return report;
}

ExperimentReport run_nse_convergence(const ExperimentConfig& config) {
  if (config.kind != ExperimentKind::NseConvergence) {
    fail(ErrorKind::InvalidConfig, "run_nse_convergence needs kind nse_convergence");
  }
  auto report = start_report(config);
  const double sqrt_m = std::sqrt(static_cast<double>(config.m));
  const double K = config.resolved_K();

  const auto stats = geometry_stats(canonical_cone(config.n, config.k), config.m,
                                    RandomSource{config.master_seed, StreamBase::kWidth},
                                    config.width_samples);
  auto& s = report.summary;
  s.gamma_m = stats.gamma_m;
  s.omega_hat = stats.omega;
  s.omega_stderr = stats.omega_stderr;
  s.linear_regime = stats.in_linear_regime(config.epsilon);
  if (!(stats.omega < stats.gamma_m) || !(config.m > stats.omega * stats.omega)) {
    fail(ErrorKind::Regime, "nse_convergence needs omega_hat < gamma_m and m > omega_hat^2 (omega_hat = " +
                                format_number(stats.omega) + ")");
  }
  const double gap2 = (stats.gamma_m - stats.omega) * (stats.gamma_m + stats.omega);
  s.predicted_nse = stats.omega * stats.omega / gap2;
  s.predicted_residual_ratio = std::sqrt(gap2) / sqrt_m;

  report.per_trial.resize(static_cast<std::size_t>(config.trials));
  std::vector<double> nse(static_cast<std::size_t>(config.trials));
  std::vector<double> residual(static_cast<std::size_t>(config.trials));
  parallel_for(config.trials, config.threads, [&](std::int64_t i) {
    const auto draw = draw_trial(config, static_cast<std::uint64_t>(i));
    const auto cone = ConeSpec::l1_descent_at(draw.x0);
    const auto po = solve_trial_po(config, draw, cone);
    const auto ao = ao_cone_value(draw.g, draw.h, config.sigma, cone, K);
    const auto idx = static_cast<std::size_t>(i);
    const double wn = po.w_hat.norm();
    nse[idx] = wn * wn / (config.sigma * config.sigma);
    residual[idx] = po.residual_norm / (sqrt_m * config.sigma);
    report.per_trial[idx] = {i, po.objective / sqrt_m, wn, ao.phi, ao.minimizer_norm,
                             po.converged};
  });
  for (const auto& t : report.per_trial) s.unconverged += t.converged ? 0 : 1;
  check_convergence(report);

  s.median_nse = median(nse);
  s.median_residual_ratio = median(residual);
  s.nse_relative_gap = relative_gap(s.median_nse, s.predicted_nse);
  s.residual_relative_gap = relative_gap(s.median_residual_ratio, s.predicted_residual_ratio);
  report.verdicts.push_back({"nse_prediction", s.nse_relative_gap <= config.nse_tolerance,
                             config.nse_tolerance - s.nse_relative_gap});
  report.verdicts.push_back({"residual_prediction",
                             s.residual_relative_gap <= config.residual_tolerance,
                             config.residual_tolerance - s.residual_relative_gap});
  report.claims["nse_prediction"] =
      "median ||w_hat||^2 / sigma^2 matches omega^2 / (gamma_m^2 - omega^2) within nse_tolerance";
  report.claims["residual_prediction"] =
      "median ||A w_hat - z|| / (sqrt(m) sigma) matches sqrt(gamma_m^2 - omega^2) / sqrt(m) "
      "within residual_tolerance";
  return report;
}

ExperimentReport run_concentration_smin(const ExperimentConfig& config) {
  if (config.kind != ExperimentKind::ConcentrationSmin) {
    fail(ErrorKind::InvalidConfig, "run_concentration_smin needs kind concentration_smin");
  }
  auto report = start_report(config);
  report.per_trial.resize(static_cast<std::size_t>(config.trials));
  parallel_for(config.trials, config.threads, [&](std::int64_t i) {
    GaussianStream stream(RandomSource{config.master_seed, static_cast<std::uint64_t>(i)});
    const Matrix G = stream.matrix(config.m, config.n);
    const Vector g = stream.vector(config.m);
    const Vector h = stream.vector(config.n);
    report.per_trial[static_cast<std::size_t>(i)] = {i, smin_via_po(G), 1.0, ao_smin_value(g, h),
                                                     1.0, true};
  });

  const double N = static_cast<double>(config.trials);
  const double slack = config.resolved_slack();
  report.summary.slack = slack;
  const double edge = std::sqrt(static_cast<double>(config.m)) - std::sqrt(static_cast<double>(config.n));
  const std::vector<double> ts =
      config.t_grid.empty() ? std::vector<double>{1.0, 2.0, 3.0, 4.0} : config.t_grid;
  for (double t : ts) {
    double count = 0.0;
    for (const auto& r : report.per_trial) count += r.Phi < edge - t ? 1.0 : 0.0;
    const double freq = count / N;
    const double bound = 4.0 * std::exp(-t * t / 4.0);
    const std::string id = "smin_tail_t=" + format_number(t);
    report.verdicts.push_back({id, freq <= bound + slack, bound + slack - freq});
    report.claims[id] = "P(smin(G) < sqrt(m) - sqrt(n) - t) <= 4 exp(-t^2 / 4)";
    report.summary.extras["frequency_t=" + format_number(t)] = freq;
  }

  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < report.per_trial.size(); ++i) {
    const double x = report.per_trial[i].phi;
    const double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
  }
  const double stderr_mean = std::sqrt(m2 / (N - 1.0) / N);
  const double expected = gamma_m(config.m).value - gamma_m(config.n).value;
  const double deviation = std::abs(mean - expected);
  report.verdicts.push_back({"ao_smin_mean", deviation <= 3.0 * stderr_mean,
                             3.0 * stderr_mean - deviation});
  report.claims["ao_smin_mean"] =
      "mean(||g|| - ||h||) within 3 standard errors of gamma_m - gamma_n";
  report.summary.gamma_m = gamma_m(config.m).value;
  report.summary.extras["ao_mean"] = mean;
  report.summary.extras["ao_mean_stderr"] = stderr_mean;
  report.summary.extras["ao_mean_expected"] = expected;
  return report;
}

namespace {

// Appends the Lipschitz verdict for `pairs` AO pairs on the canonical cone.
// Record j: Phi = phi(g1,h1), phi = phi(g2,h2), w_hat_norm = distance.
std::vector<TrialRecord> lipschitz_pairs(const ExperimentConfig& config, int pairs,
                                         ExperimentReport& report) {
  const auto cone = canonical_cone(config.n, config.k);
  const double K = config.resolved_K();
  const double L = cone_ao_lipschitz(config);
  std::vector<TrialRecord> records(static_cast<std::size_t>(pairs));
  parallel_for(pairs, config.threads, [&](std::int64_t j) {
    GaussianStream stream(
        RandomSource{config.master_seed, StreamBase::kLipschitz + static_cast<std::uint64_t>(j)});
    const Vector g1 = stream.vector(config.m);
    const Vector h1 = stream.vector(config.n);
    const Vector g2 = stream.vector(config.m);
    const Vector h2 = stream.vector(config.n);
    const auto a1 = ao_cone_value(g1, h1, config.sigma, cone, K);
    const auto a2 = ao_cone_value(g2, h2, config.sigma, cone, K);
    const double dist = std::sqrt((g1 - g2).squaredNorm() + (h1 - h2).squaredNorm());
    records[static_cast<std::size_t>(j)] = {j, a1.phi, dist, a2.phi, a1.minimizer_norm, true};
  });
  std::int64_t violations = 0;
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    const double slackness = L * r.w_hat_norm - std::abs(r.Phi - r.phi);
    violations += slackness < 0.0 ? 1 : 0;
    margin = std::min(margin, slackness);
  }
  report.verdicts.push_back({"ao_lipschitz", violations == 0, margin});
  report.claims["ao_lipschitz"] =
      "|phi(g1,h1) - phi(g2,h2)| <= sqrt(2) R_x R_y ||(g1,h1) - (g2,h2)|| with "
      "R_x = sqrt(K^2 + sigma^2), R_y = 1, scaled by 1/sqrt(m)";
  report.summary.extras["lipschitz_constant"] = L;
  report.summary.extras["lipschitz_violations"] = static_cast<double>(violations);
  return records;
}

}  // namespace

ExperimentReport run_concentration_phi(const ExperimentConfig& config) {
  if (config.kind != ExperimentKind::ConcentrationPhi) {
    fail(ErrorKind::InvalidConfig, "run_concentration_phi needs kind concentration_phi");
  }
  auto report = start_report(config);
  const double sqrt_m = std::sqrt(static_cast<double>(config.m));
  const double K = config.resolved_K();
  report.per_trial.resize(static_cast<std::size_t>(config.trials));
  parallel_for(config.trials, config.threads, [&](std::int64_t i) {
    const auto draw = draw_trial(config, static_cast<std::uint64_t>(i));
    const auto cone = ConeSpec::l1_descent_at(draw.x0);
    const auto po = solve_trial_po(config, draw, cone);
    const auto ao = ao_cone_value(draw.g, draw.h, config.sigma, cone, K);
    report.per_trial[static_cast<std::size_t>(i)] = {i, po.objective / sqrt_m, po.w_hat.norm(),
                                                     ao.phi, ao.minimizer_norm, po.converged};
  });
  for (const auto& t : report.per_trial) report.summary.unconverged += t.converged ? 0 : 1;
  check_convergence(report);

  // E phi from an independent AO batch.
  const auto cone = canonical_cone(config.n, config.k);
  std::vector<double> batch(static_cast<std::size_t>(config.trials));
  parallel_for(config.trials, config.threads, [&](std::int64_t j) {
    GaussianStream stream(
        RandomSource{config.master_seed, StreamBase::kAoBatch + static_cast<std::uint64_t>(j)});
    const Vector g = stream.vector(config.m);
    const Vector h = stream.vector(config.n);
    batch[static_cast<std::size_t>(j)] = ao_cone_value(g, h, config.sigma, cone, K).phi;
  });
  double mean_phi = 0.0;
  for (double v : batch) mean_phi += v;
  mean_phi /= static_cast<double>(batch.size());

  const double R = std::sqrt(K * K + config.sigma * config.sigma) / sqrt_m;
  const double N = static_cast<double>(config.trials);
  const double slack = config.resolved_slack();
  report.summary.slack = slack;
  std::vector<double> ts = config.t_grid;
  if (ts.empty()) {
    for (double mult : {0.0, 0.5, 1.0, 2.0, 4.0}) ts.push_back(mult * R);
  }
  for (double t : ts) {
    double count = 0.0;
    for (const auto& r : report.per_trial) count += std::abs(r.Phi - mean_phi) > t ? 1.0 : 0.0;
    const double freq = count / N;
    const double bound = 4.0 * std::exp(-t * t / (4.0 * R * R));
    const std::string id = "phi_concentration_t=" + format_number(t);
    report.verdicts.push_back({id, freq <= bound + slack, bound + slack - freq});
    report.claims[id] = "P(|Phi - E phi| > t) <= 4 exp(-t^2 / (4 R_x^2 R_y^2)), R_x R_y = " +
                        format_number(R) + " after 1/sqrt(m) scaling";
  }
  report.summary.extras["ao_mean"] = mean_phi;
  report.summary.extras["R_xR_y"] = R;
  report.summary.gamma_m = gamma_m(config.m).value;
  if (config.lipschitz_pairs > 0) lipschitz_pairs(config, config.lipschitz_pairs, report);
  return report;
}

ExperimentReport run_lipschitz_check(const ExperimentConfig& config) {
  if (config.kind != ExperimentKind::LipschitzCheck) {
    fail(ErrorKind::InvalidConfig, "run_lipschitz_check needs kind lipschitz_check");
  }
  auto report = start_report(config);
  report.per_trial = lipschitz_pairs(config, config.trials, report);
  return report;
}

ExperimentReport run_width_table(const ExperimentConfig& config) {
  if (config.kind != ExperimentKind::WidthTable) {
    fail(ErrorKind::InvalidConfig, "run_width_table needs kind width_table");
  }
  auto report = start_report(config);
  auto& pairs = report.config.width_pairs;
  if (pairs.empty()) pairs = {{5, 500}, {10, 1000}, {20, 1000}};
  report.width_rows.resize(pairs.size());
  parallel_for(static_cast<std::int64_t>(pairs.size()), config.threads, [&](std::int64_t i) {
    const auto [k, n] = pairs[static_cast<std::size_t>(i)];
    const auto width =
        gaussian_width(canonical_cone(n, k),
                       RandomSource{config.master_seed, StreamBase::kWidth + static_cast<std::uint64_t>(i)},
                       config.width_samples);
    const double bound = l1_width_upper_bound(k, n);
    report.width_rows[static_cast<std::size_t>(i)] = {
        k, n, width.omega, width.omega_stderr, bound,
        width.omega <= bound + 3.0 * width.omega_stderr};
  });
  for (const auto& row : report.width_rows) {
    const std::string id = "width_bound_k=" + std::to_string(row.k) + ",n=" + std::to_string(row.n);
    report.verdicts.push_back(
        {id, row.pass, row.bound + 3.0 * row.omega_stderr - row.omega_hat});
    report.claims[id] = "omega_hat <= sqrt(2 k ln(2n/k)) + 3 stderr";
  }
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::TailComparison: return run_tail_comparison(config);
    case ExperimentKind::NseConvergence: return run_nse_convergence(config);
    case ExperimentKind::ConcentrationSmin: return run_concentration_smin(config);
    case ExperimentKind::ConcentrationPhi: return run_concentration_phi(config);
    case ExperimentKind::LipschitzCheck: return run_lipschitz_check(config);
    case ExperimentKind::WidthTable: return run_width_table(config);
  }
  fail(ErrorKind::InvalidConfig, "unknown experiment kind");
}

}  // namespace cgmt
