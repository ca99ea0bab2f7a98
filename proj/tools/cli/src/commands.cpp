#include "cgmt_cli/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cgmt/aoengine.hpp"
#include "cgmt/geometry.hpp"
#include "cgmt/report_io.hpp"
#include "cgmt_cli/svg.hpp"
#include "json.hpp"

namespace cgmt::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::InvalidConfig, "cannot read config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Json read_json_object(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::InvalidConfig, path + ": " + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::InvalidConfig, path + ": config must be a JSON object");
  return j;
}

double number_field(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    fail(ErrorKind::InvalidConfig, std::string("\"") + key + "\" must be a number");
  }
  return j.at(key).get<double>();
}

int int_field(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    fail(ErrorKind::InvalidConfig, std::string("\"") + key + "\" must be an integer");
  }
  return j.at(key).get<int>();
}

// Runs body and converts library errors into the exit-code contract.
template <class Body>
int guarded(std::ostream& out, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    out << error_json(e.kind(), e.what()) << '\n';
    return exit_code_for(e.kind());
  } catch (const Json::exception& e) {
    out << error_json(ErrorKind::InvalidConfig, e.what()) << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    Json j;
    j["error"] = "internal";
    j["message"] = e.what();
    out << j.dump() << '\n';
    return kExitInternal;
  }
}

void write_atomically(const std::vector<std::pair<fs::path, std::string>>& files) {
  std::vector<fs::path> staged;
  auto cleanup = [&] {
    std::error_code ignored;
    for (const auto& p : staged) fs::remove(p, ignored);
  };
  for (const auto& [path, content] : files) {
    fs::path tmp = path;
    tmp += ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) staged.push_back(tmp);
    if (!out || !out.write(content.data(), static_cast<std::streamsize>(content.size())) ||
        !out.flush()) {
      cleanup();
      fail(ErrorKind::InvalidArgument, "cannot write " + path.string());
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    fs::rename(staged[i], files[i].first, ec);
    if (ec) {
      cleanup();
      fail(ErrorKind::InvalidArgument, "cannot write " + files[i].first.string());
    }
  }
}

void prepare_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    fail(ErrorKind::InvalidArgument, "output directory " + dir.string() + " is not writable");
  }
  const fs::path probe = dir / ".cgmt-lab-probe";
  {
    std::ofstream out(probe, std::ios::binary);
    if (!out) {
      fail(ErrorKind::InvalidArgument, "output directory " + dir.string() + " is not writable");
    }
  }
  fs::remove(probe, ec);
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Regime: return kExitRegimeError;
    case ErrorKind::ExperimentInvalid: return kExitVerdictFailure;
    case ErrorKind::Numeric: return kExitInternal;
    default: return kExitInputError;
  }
}

std::string error_json(ErrorKind kind, const std::string& message) {
  Json j;
  j["error"] = to_string(kind);
  j["message"] = message;
  return j.dump();
}

int cmd_version(std::ostream& out) {
  out << "cgmt-lab " << tool_version() << '\n';
  return kExitOk;
}

int cmd_predict(const std::string& config_path, std::ostream& out) {
  return guarded(out, [&] {
    const Json j = read_json_object(config_path);
    const bool explicit_inputs = j.contains("gamma_m") || j.contains("omega");
    const double sigma = number_field(j, "sigma");
    const int m = int_field(j, "m");

    Json inputs, provenance;
    provenance["version"] = tool_version();
    double gamma = 0.0, omega = 0.0;
    if (explicit_inputs) {
      gamma = number_field(j, "gamma_m");
      omega = number_field(j, "omega");
      provenance["gamma_m"] = "given";
      provenance["omega"] = "given";
    } else {
      const int n = int_field(j, "n");
      const int k = int_field(j, "k");
      if (n < 1 || m < 1) fail(ErrorKind::InvalidDimension, "n and m must be >= 1");
      if (k < 0 || k > n) fail(ErrorKind::InvalidConfig, "k must satisfy 0 <= k <= n");
      std::int64_t samples = 10'000;
      std::uint64_t seed = 0;
      if (j.contains("width_samples")) samples = j.at("width_samples").get<std::int64_t>();
      if (j.contains("master_seed")) seed = j.at("master_seed").get<std::uint64_t>();
      std::vector<Eigen::Index> support(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) support[static_cast<std::size_t>(i)] = i;
      const auto cone =
          ConeSpec::l1_descent(support, std::vector<int>(static_cast<std::size_t>(k), 1), n);
      const auto stats =
          geometry_stats(cone, m, RandomSource{seed, StreamBase::kWidth}, samples);
      gamma = stats.gamma_m;
      omega = stats.omega;
      inputs["n"] = n;
      inputs["k"] = k;
      provenance["gamma_m"] = "exact_chi_mean";
      provenance["omega"] = "monte_carlo";
      provenance["width_samples"] = samples;
      provenance["omega_stderr"] = stats.omega_stderr;
      provenance["master_seed"] = seed;
      provenance["cone"] = Json::parse(cone_spec_to_json(cone));
    }
    if (!(omega < gamma)) {
      fail(ErrorKind::Regime, "omega must be below gamma_m (omega = " + format_double(omega) +
                                  ", gamma_m = " + format_double(gamma) + ")");
    }
    // Without an explicit bound the curve is minimized as if unconstrained.
    double K = 0.0;
    if (j.contains("K")) {
      K = number_field(j, "K");
      provenance["K"] = "given";
    } else {
      const double alpha = sigma * omega / std::sqrt((gamma - omega) * (gamma + omega));
      K = 2.0 * alpha + std::max(sigma, 1.0);
      provenance["K"] = "default";
    }
    const auto curve = DCurve::make(gamma, omega, sigma, m, K);
    const auto p = predict(curve);

    inputs["gamma_m"] = gamma;
    inputs["omega"] = omega;
    inputs["sigma"] = sigma;
    inputs["m"] = m;
    inputs["K"] = K;
    Json result;
    result["alpha_star"] = p.alpha_star;
    result["d_star"] = p.d_star;
    result["nse"] = p.nse;
    result["method"] = to_string(p.method);
    result["inputs"] = inputs;
    result["provenance"] = provenance;
    out << result.dump(2) << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_width(const std::string& config_path, int threads, std::ostream& out) {
  std::ostringstream table;
  const int code = guarded(out, [&] {
    Json j = read_json_object(config_path);
    if (!j.contains("kind")) j["kind"] = "width_table";
    if (!j.contains("width_pairs") && j.contains("k") && j.contains("n")) {
      j["width_pairs"] = Json::array({Json::array({j.at("k"), j.at("n")})});
      j.erase("k");
      j.erase("n");
    }
    auto config = parse_experiment_config(j.dump());
    if (config.kind != ExperimentKind::WidthTable) {
      fail(ErrorKind::InvalidConfig, "width expects kind width_table");
    }
    if (threads >= 0) config.threads = threads;
    const auto report = run_width_table(config);
    table << width_rows_to_csv(report.width_rows);
    return static_cast<int>(report.all_pass() ? kExitOk : kExitVerdictFailure);
  });
  out << table.str();
  return code;
}

void apply_format_flags(const std::string& list, ExperimentOptions& options) {
  options.write_json = options.write_csv = options.write_svg = false;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "json") {
      options.write_json = true;
    } else if (item == "csv") {
      options.write_csv = true;
    } else if (item == "svg") {
      options.write_svg = true;
    } else {
      fail(ErrorKind::InvalidArgument, "unknown format \"" + item + "\" (expected json, csv, svg)");
    }
  }
}

int cmd_experiment(const ExperimentOptions& options, std::ostream& out) {
  return guarded(out, [&] {
    Json j = read_json_object(options.config_path);
    if (!j.contains("kind") && !options.allowed_kinds.empty()) {
      j["kind"] = to_string(options.allowed_kinds.front());
    }
    auto config = parse_experiment_config(j.dump());
    if (!options.allowed_kinds.empty() &&
        std::find(options.allowed_kinds.begin(), options.allowed_kinds.end(), config.kind) ==
            options.allowed_kinds.end()) {
      fail(ErrorKind::InvalidConfig,
           std::string("experiment kind ") + to_string(config.kind) + " is not valid here");
    }
    if (options.threads >= 0) config.threads = options.threads;
    config.validate();
    if (options.output_dir.empty()) fail(ErrorKind::InvalidArgument, "--out is required");
    const fs::path dir(options.output_dir);
    prepare_output_dir(dir);

    const auto report = run_experiment(config);

    std::vector<std::pair<fs::path, std::string>> files;
    if (options.write_json) files.emplace_back(dir / "report.json", report_to_json(report));
    if (options.write_csv) {
      files.emplace_back(dir / "trials.csv", trials_to_csv(report));
      if (config.kind == ExperimentKind::WidthTable) {
        files.emplace_back(dir / "width.csv", width_rows_to_csv(report.width_rows));
      }
    }
    if (options.write_svg) {
      if (config.kind == ExperimentKind::TailComparison) {
        files.emplace_back(dir / "cdf_overlay.svg", cdf_overlay_svg(report));
      } else if (config.kind == ExperimentKind::NseConvergence) {
        files.emplace_back(dir / "nse_histogram.svg", nse_histogram_svg(report));
      }
    }
    write_atomically(files);

    Json summary;
    summary["kind"] = to_string(config.kind);
    summary["all_pass"] = report.all_pass();
    summary["threads"] = resolve_threads(config.threads);
    Json verdicts = Json::array();
    for (const auto& v : report.verdicts) {
      verdicts.push_back({{"claim_id", v.claim_id}, {"pass", v.pass}, {"margin", v.margin}});
    }
    summary["verdicts"] = verdicts;
    Json written = Json::array();
    for (const auto& f : files) written.push_back(f.first.string());
    summary["files"] = written;
    out << summary.dump(2) << '\n';
    return static_cast<int>(report.all_pass() ? kExitOk : kExitVerdictFailure);
  });
}

}  // namespace cgmt::cli
