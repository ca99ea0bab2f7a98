#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cgmt_cli/commands.hpp"

using namespace cgmt;
using namespace cgmt::cli;

int main(int argc, char** argv) {
  CLI::App app{"cgmt-lab: Monte Carlo checks of Gaussian min-max predictions"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  std::string formats;
  bool svg = false;
  int threads = -1;

  auto* version = app.add_subcommand("version", "Print the tool version");

  auto* predict = app.add_subcommand("predict", "Closed-form alpha*, d* and NSE from a config");
  predict->add_option("-c,--config", config_path, "Config JSON")->required();

  auto* width = app.add_subcommand("width", "Monte Carlo width table as CSV");
  width->add_option("-c,--config", config_path, "Config JSON")->required();
  width->add_option("--threads", threads, "Worker cap (CGMT_LAB_THREADS overrides)");

  auto add_run_options = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "Experiment config JSON")->required();
    sub->add_option("-o,--out", output_dir, "Output directory")->required();
    sub->add_option("--format", formats, "Comma list of json,csv,svg (default all)");
    sub->add_flag("--svg", svg, "Same as including svg in --format");
    sub->add_option("--threads", threads, "Worker cap (CGMT_LAB_THREADS overrides)");
  };
  auto* experiment = app.add_subcommand("experiment", "Run any experiment kind");
  add_run_options(experiment);
  auto* compare = app.add_subcommand("compare-tails", "Run a tail_comparison experiment");
  add_run_options(compare);
  auto* concentration = app.add_subcommand(
      "concentration", "Run concentration_smin, concentration_phi or lipschitz_check");
  add_run_options(concentration);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (version->parsed()) return cmd_version(std::cout);
  if (predict->parsed()) return cmd_predict(config_path, std::cout);
  if (width->parsed()) return cmd_width(config_path, threads, std::cout);

  ExperimentOptions options;
  options.config_path = config_path;
  options.output_dir = output_dir;
  options.threads = threads;
  if (!formats.empty()) {
    try {
      apply_format_flags(formats, options);
    } catch (const Error& e) {
      std::cout << error_json(e.kind(), e.what()) << '\n';
      return kExitInputError;
    }
  }
  if (svg) options.write_svg = true;
  if (compare->parsed()) options.allowed_kinds = {ExperimentKind::TailComparison};
  if (concentration->parsed()) {
    options.allowed_kinds = {ExperimentKind::ConcentrationSmin, ExperimentKind::ConcentrationPhi,
                             ExperimentKind::LipschitzCheck};
  }
  return cmd_experiment(options, std::cout);
}
