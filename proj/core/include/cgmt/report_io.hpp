#pragma once

// JSON and CSV encodings of configs, cones, losses and reports. All writers
// are deterministic: fixed key order, shortest round-trip doubles.

#include <string>
#include <utility>

#include "cgmt/aoengine.hpp"
#include "cgmt/experiments.hpp"
#include "cgmt/geometry.hpp"
#include "cgmt/proxcalc.hpp"

namespace cgmt {

/// Tool version embedded in every report.
const char* tool_version() noexcept;

/// Parse failures and schema violations throw InvalidConfig. Unknown keys
/// are rejected so typos do not silently fall back to defaults.
ExperimentConfig parse_experiment_config(const std::string& json_text);
std::string experiment_config_to_json(const ExperimentConfig& config);

/// {"kind","support","signs","n"}; support/signs only for l1_descent,
/// "direction" for single_ray.
ConeSpec parse_cone_spec(const std::string& json_text);
std::string cone_spec_to_json(const ConeSpec& cone);

/// {"loss":"half_sq_l2"|"l2"|"l1","reg":"zero"|"l1","lambda":number}
std::pair<LossSpec, RegularizerSpec> parse_loss_reg(const std::string& json_text);
std::string loss_reg_to_json(const LossSpec& loss, const RegularizerSpec& reg);

/// report.json: tool version, master_seed, resolved config, summary,
/// verdicts, claims, CDF grid, width rows and per-trial records.
std::string report_to_json(const ExperimentReport& report);

/// Header trial_index,Phi,w_hat_norm,phi,ao_norm,converged.
std::string trials_to_csv(const ExperimentReport& report);

/// Header k,n,omega_hat,stderr,bound,pass.
std::string width_rows_to_csv(const std::vector<WidthRow>& rows);

/// Shortest decimal string that round-trips the double.
std::string format_double(double value);

}  // namespace cgmt
