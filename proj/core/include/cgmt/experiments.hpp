#pragma once

// Seeded Monte Carlo campaigns pairing primary solves with AO evaluations.
//
// Trial i reads everything it needs from stream i of the master seed, in
// the order G, z, x0, g, h. Auxiliary batches (width estimation,
// independent AO means, Lipschitz pairs) use disjoint stream ranges, see
// StreamBase below. Each trial writes only its own slot, so reports are
// identical for any worker count.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cgmt/aoengine.hpp"
#include "cgmt/posolvers.hpp"

namespace cgmt {

enum class ExperimentKind {
  TailComparison,
  NseConvergence,
  ConcentrationSmin,
  ConcentrationPhi,
  LipschitzCheck,
  WidthTable,
};

const char* to_string(ExperimentKind kind) noexcept;
std::optional<ExperimentKind> parse_experiment_kind(const std::string& name) noexcept;

/// First stream index of each auxiliary batch.
namespace StreamBase {
inline constexpr std::uint64_t kWidth = std::uint64_t{1} << 40;
inline constexpr std::uint64_t kAoBatch = std::uint64_t{2} << 40;
inline constexpr std::uint64_t kLipschitz = std::uint64_t{3} << 40;
}  // namespace StreamBase

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::TailComparison;
  int n = 128;
  int m = 64;
  int k = 4;
  double sigma = 0.05;
  double lambda = 0.0;
  int trials = 200;
  std::uint64_t master_seed = 0;
  double epsilon = 0.05;
  int cdf_grid = 41;
  /// Negative selects the per-kind default (DKW band at 99%).
  double slack = -1.0;

  /// Bound on ||w|| (alpha) for the AO; nonpositive selects 10 sigma sqrt(n).
  double K = -1.0;
  std::int64_t width_samples = 10'000;
  bool zero_noise = false;
  double nse_tolerance = 0.15;
  double residual_tolerance = 0.10;
  /// Thresholds t for concentration kinds. Empty selects {1,2,3,4} for
  /// smin and {0, 0.5, 1, 2, 4} x R for phi (R = R_x R_y / sqrt(m)).
  std::vector<double> t_grid;
  int lipschitz_pairs = 1000;
  std::vector<std::pair<int, int>> width_pairs;  // (k, n)
  /// 0 = hardware concurrency (or CGMT_LAB_THREADS).
  int threads = 0;
  double solver_rel_tol = 1e-8;

  /// Throws InvalidConfig describing the first violated constraint.
  void validate() const;
  double resolved_K() const noexcept;
  double resolved_slack() const noexcept;
};

/// Two-sided DKW band half-width: sqrt(ln(2 / alpha) / (2 n)).
double dkw_epsilon(std::int64_t n, double alpha = 0.01);

struct TrialRecord {
  std::int64_t trial_index = 0;
  double Phi = 0.0;
  double w_hat_norm = 0.0;
  double phi = 0.0;
  double ao_norm = 0.0;
  bool converged = true;
};

struct CdfPoint {
  double c = 0.0;
  double F_Phi = 0.0;  // fraction with Phi < c
  double F_phi = 0.0;  // fraction with phi <= c
};

struct Verdict {
  std::string claim_id;
  bool pass = false;
  /// Smallest (allowed - observed); negative when failing.
  double margin = 0.0;
};

struct WidthRow {
  int k = 0;
  int n = 0;
  double omega_hat = 0.0;
  double omega_stderr = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct ExperimentSummary {
  double median_nse = 0.0;
  double predicted_nse = 0.0;
  double nse_relative_gap = 0.0;
  double median_residual_ratio = 0.0;
  double predicted_residual_ratio = 0.0;
  double residual_relative_gap = 0.0;
  double omega_hat = 0.0;
  double omega_stderr = 0.0;
  double gamma_m = 0.0;
  bool linear_regime = false;
  double slack = 0.0;
  std::int64_t unconverged = 0;
  /// Extra named scalars (e.g. AO mean, Lipschitz constant).
  std::map<std::string, double> extras;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialRecord> per_trial;
  std::vector<CdfPoint> cdf_grid_values;
  std::vector<Verdict> verdicts;
  std::vector<WidthRow> width_rows;
  ExperimentSummary summary;
  /// claim_id -> statement of the inequality or prediction being checked.
  std::map<std::string, std::string> claims;

  bool all_pass() const noexcept;
};

/// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = auto).
void parallel_for(std::int64_t count, int threads, const std::function<void(std::int64_t)>& fn);

/// Worker count after applying CGMT_LAB_THREADS and hardware limits.
int resolve_threads(int requested) noexcept;

/// Problem data of one trial, drawn in the documented stream order.
struct TrialDraw {
  Matrix A;
  Vector z;
  Vector x0;
  Vector g;
  Vector h;
};

TrialDraw draw_trial(const ExperimentConfig& config, std::uint64_t trial_index,
                     bool need_ao = true);

/// Unit-norm x0 supported on the first k coordinates.
Vector sparse_signal(GaussianStream& stream, int n, int k);

ExperimentReport run_tail_comparison(const ExperimentConfig& config);
ExperimentReport run_nse_convergence(const ExperimentConfig& config);
ExperimentReport run_concentration_smin(const ExperimentConfig& config);
ExperimentReport run_concentration_phi(const ExperimentConfig& config);
ExperimentReport run_lipschitz_check(const ExperimentConfig& config);
ExperimentReport run_width_table(const ExperimentConfig& config);

/// Dispatch on config.kind.
ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace cgmt
