#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cgmt/errors.hpp"
#include "cgmt/experiments.hpp"

namespace cgmt::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitInputError = 2,
  kExitRegimeError = 3,
  kExitVerdictFailure = 4,
};

int exit_code_for(ErrorKind kind) noexcept;

/// {"error": "<kind>", "message": "..."} on one line.
std::string error_json(ErrorKind kind, const std::string& message);

int cmd_version(std::ostream& out);

/// Config is either {"gamma_m","omega","sigma","m"[,"K"]} or
/// {"n","m","k","sigma"[,"K","width_samples","master_seed"]}.
int cmd_predict(const std::string& config_path, std::ostream& out);

/// Experiment config with kind width_table (kind may be omitted). A single
/// pair may be given as top-level "k" and "n".
int cmd_width(const std::string& config_path, int threads, std::ostream& out);

struct ExperimentOptions {
  std::string config_path;
  std::string output_dir;
  bool write_json = true;
  bool write_csv = true;
  bool write_svg = true;
  /// Negative keeps the config value.
  int threads = -1;
  /// Kinds accepted by the invoking subcommand; empty accepts all. The
  /// first entry is used when the config omits "kind".
  std::vector<ExperimentKind> allowed_kinds;
};

int cmd_experiment(const ExperimentOptions& options, std::ostream& out);

/// Parses "json,csv,svg" style lists into options. Throws InvalidArgument.
void apply_format_flags(const std::string& list, ExperimentOptions& options);

}  // namespace cgmt::cli
