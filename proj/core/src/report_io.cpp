#include "cgmt/report_io.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "cgmt/errors.hpp"
#include "json.hpp"

namespace cgmt {
namespace {

using Json = nlohmann::ordered_json;

Json parse_text(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::InvalidConfig, std::string(what) + ": " + e.what());
  }
}

void require_object(const Json& j, const char* what) {
  if (!j.is_object()) fail(ErrorKind::InvalidConfig, std::string(what) + " must be a JSON object");
}

void reject_unknown(const Json& j, const std::set<std::string>& known, const char* what) {
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) {
      fail(ErrorKind::InvalidConfig, std::string(what) + ": unknown key \"" + key + "\"");
    }
  }
}

double get_number(const Json& j, const std::string& key) {
  const Json& v = j.at(key);
  if (!v.is_number()) fail(ErrorKind::InvalidConfig, "\"" + key + "\" must be a number");
  return v.get<double>();
}

std::int64_t get_integer(const Json& j, const std::string& key) {
  const Json& v = j.at(key);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
  }
  fail(ErrorKind::InvalidConfig, "\"" + key + "\" must be an integer");
}

int get_int(const Json& j, const std::string& key) {
  const auto v = get_integer(j, key);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    fail(ErrorKind::InvalidConfig, "\"" + key + "\" is out of range");
  }
  return static_cast<int>(v);
}

std::string get_string(const Json& j, const std::string& key) {
  const Json& v = j.at(key);
  if (!v.is_string()) fail(ErrorKind::InvalidConfig, "\"" + key + "\" must be a string");
  return v.get<std::string>();
}

Json number(double value) {
  if (std::isfinite(value)) return value;
  return value > 0 ? "inf" : (value < 0 ? "-inf" : "nan");
}

Json config_json(const ExperimentConfig& c) {
  Json j;
  j["kind"] = to_string(c.kind);
  j["n"] = c.n;
  j["m"] = c.m;
  j["k"] = c.k;
  j["sigma"] = c.sigma;
  j["lambda"] = c.lambda;
  j["trials"] = c.trials;
  j["master_seed"] = c.master_seed;
  j["epsilon"] = c.epsilon;
  j["cdf_grid"] = c.cdf_grid;
  j["slack"] = c.resolved_slack();
  j["K"] = c.resolved_K();
  j["width_samples"] = c.width_samples;
  j["zero_noise"] = c.zero_noise;
  j["nse_tolerance"] = c.nse_tolerance;
  j["residual_tolerance"] = c.residual_tolerance;
  j["t_grid"] = c.t_grid;
  j["lipschitz_pairs"] = c.lipschitz_pairs;
  Json pairs = Json::array();
  for (const auto& [k, n] : c.width_pairs) pairs.push_back({k, n});
  j["width_pairs"] = pairs;
  j["solver_rel_tol"] = c.solver_rel_tol;
  return j;
}

}  // namespace

const char* tool_version() noexcept { return CGMT_VERSION; }

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  const Json j = parse_text(json_text, "experiment config");
  require_object(j, "experiment config");
  reject_unknown(j,
                 {"kind", "n", "m", "k", "sigma", "lambda", "trials", "master_seed", "epsilon",
                  "cdf_grid", "slack", "K", "width_samples", "zero_noise", "nse_tolerance",
                  "residual_tolerance", "t_grid", "lipschitz_pairs", "width_pairs", "threads",
                  "solver_rel_tol", "comment"},
                 "experiment config");
  if (!j.contains("kind")) fail(ErrorKind::InvalidConfig, "experiment config needs \"kind\"");

  ExperimentConfig c;
  const auto kind_name = get_string(j, "kind");
  const auto kind = parse_experiment_kind(kind_name);
  if (!kind) fail(ErrorKind::InvalidConfig, "unknown experiment kind \"" + kind_name + "\"");
  c.kind = *kind;

  auto opt_int = [&](const char* key, int& out) {
    if (j.contains(key)) out = get_int(j, key);
  };
  auto opt_double = [&](const char* key, double& out) {
    if (j.contains(key)) out = get_number(j, key);
  };
  opt_int("n", c.n);
  opt_int("m", c.m);
  opt_int("k", c.k);
  opt_double("sigma", c.sigma);
  opt_double("lambda", c.lambda);
  opt_int("trials", c.trials);
  if (j.contains("master_seed")) {
    const Json& v = j.at("master_seed");
    if (v.is_number_unsigned()) {
      c.master_seed = v.get<std::uint64_t>();
    } else if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
      c.master_seed = static_cast<std::uint64_t>(v.get<std::int64_t>());
    } else {
      fail(ErrorKind::InvalidConfig, "\"master_seed\" must be a nonnegative integer");
    }
  }
  opt_double("epsilon", c.epsilon);
  opt_int("cdf_grid", c.cdf_grid);
  opt_double("slack", c.slack);
  opt_double("K", c.K);
  if (j.contains("width_samples")) c.width_samples = get_integer(j, "width_samples");
  if (j.contains("zero_noise")) {
    if (!j.at("zero_noise").is_boolean()) {
      fail(ErrorKind::InvalidConfig, "\"zero_noise\" must be a boolean");
    }
    c.zero_noise = j.at("zero_noise").get<bool>();
  }
  opt_double("nse_tolerance", c.nse_tolerance);
  opt_double("residual_tolerance", c.residual_tolerance);
  if (j.contains("t_grid")) {
    const Json& v = j.at("t_grid");
    if (!v.is_array()) fail(ErrorKind::InvalidConfig, "\"t_grid\" must be an array");
    for (const auto& t : v) {
      if (!t.is_number()) fail(ErrorKind::InvalidConfig, "\"t_grid\" entries must be numbers");
      c.t_grid.push_back(t.get<double>());
    }
  }
  opt_int("lipschitz_pairs", c.lipschitz_pairs);
  if (j.contains("width_pairs")) {
    const Json& v = j.at("width_pairs");
    if (!v.is_array()) fail(ErrorKind::InvalidConfig, "\"width_pairs\" must be an array");
    for (const auto& p : v) {
      if (p.is_array() && p.size() == 2 && p[0].is_number_integer() && p[1].is_number_integer()) {
        c.width_pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
      } else if (p.is_object() && p.contains("k") && p.contains("n")) {
        c.width_pairs.emplace_back(get_int(p, "k"), get_int(p, "n"));
      } else {
        fail(ErrorKind::InvalidConfig, "\"width_pairs\" entries must be [k, n] or {\"k\",\"n\"}");
      }
    }
  }
  opt_int("threads", c.threads);
  opt_double("solver_rel_tol", c.solver_rel_tol);
  if (c.threads < 0) fail(ErrorKind::InvalidConfig, "\"threads\" must be >= 0");
  c.validate();
  return c;
}

std::string experiment_config_to_json(const ExperimentConfig& config) {
  return config_json(config).dump(2);
}

ConeSpec parse_cone_spec(const std::string& json_text) {
  const Json j = parse_text(json_text, "cone spec");
  require_object(j, "cone spec");
  reject_unknown(j, {"kind", "support", "signs", "n", "direction"}, "cone spec");
  const auto kind = get_string(j, "kind");
  try {
    if (kind == "full_space") return ConeSpec::full_space(get_integer(j, "n"));
    if (kind == "nonnegative_orthant") return ConeSpec::nonnegative_orthant(get_integer(j, "n"));
    if (kind == "single_ray") {
      const auto values = j.at("direction").get<std::vector<double>>();
      Vector direction = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
      if (j.contains("n") && get_integer(j, "n") != direction.size()) {
        fail(ErrorKind::InvalidConfig, "cone spec: \"n\" disagrees with direction length");
      }
      return ConeSpec::single_ray(std::move(direction));
    }
    if (kind == "l1_descent") {
      const auto support = j.at("support").get<std::vector<Eigen::Index>>();
      const auto signs = j.at("signs").get<std::vector<int>>();
      return ConeSpec::l1_descent(support, signs, get_integer(j, "n"));
    }
  } catch (const Json::exception& e) {
    fail(ErrorKind::InvalidConfig, std::string("cone spec: ") + e.what());
  }
  fail(ErrorKind::InvalidConfig, "cone spec: unknown kind \"" + kind + "\"");
}

std::string cone_spec_to_json(const ConeSpec& cone) {
  Json j;
  j["kind"] = cone.kind_name();
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, L1Descent>) {
          j["support"] = c.support;
          j["signs"] = c.signs;
        } else if constexpr (std::is_same_v<T, SingleRay>) {
          j["direction"] = std::vector<double>(c.direction.data(),
                                               c.direction.data() + c.direction.size());
        } else {
          j["support"] = Json::array();
          j["signs"] = Json::array();
        }
      },
      cone.kind());
  j["n"] = cone.ambient_dim();
  return j.dump();
}

std::pair<LossSpec, RegularizerSpec> parse_loss_reg(const std::string& json_text) {
  const Json j = parse_text(json_text, "loss/regularizer spec");
  require_object(j, "loss/regularizer spec");
  reject_unknown(j, {"loss", "reg", "lambda"}, "loss/regularizer spec");
  LossSpec loss;
  const auto loss_name = j.contains("loss") ? get_string(j, "loss") : std::string("half_sq_l2");
  if (loss_name == "half_sq_l2") {
    loss.kind = LossKind::HalfSquaredL2;
  } else if (loss_name == "l2") {
    loss.kind = LossKind::L2Norm;
  } else if (loss_name == "l1") {
    loss.kind = LossKind::L1Norm;
  } else {
    fail(ErrorKind::InvalidConfig, "unknown loss \"" + loss_name + "\"");
  }
  const auto reg_name = j.contains("reg") ? get_string(j, "reg") : std::string("zero");
  const double lambda = j.contains("lambda") ? get_number(j, "lambda") : 0.0;
  RegularizerKind reg_kind;
  if (reg_name == "zero") {
    reg_kind = RegularizerKind::Zero;
  } else if (reg_name == "l1") {
    reg_kind = RegularizerKind::L1Norm;
  } else {
    fail(ErrorKind::InvalidConfig, "unknown regularizer \"" + reg_name + "\"");
  }
  try {
    return {loss, RegularizerSpec::make(reg_kind, lambda)};
  } catch (const Error& e) {
    fail(ErrorKind::InvalidConfig, e.what());
  }
}

std::string loss_reg_to_json(const LossSpec& loss, const RegularizerSpec& reg) {
  Json j;
  j["loss"] = to_string(loss.kind);
  j["reg"] = to_string(reg.kind);
  j["lambda"] = reg.weight;
  return j.dump();
}

std::string report_to_json(const ExperimentReport& report) {
  Json j;
  j["tool"] = "cgmt-lab";
  j["version"] = tool_version();
  j["master_seed"] = report.config.master_seed;
  j["config"] = config_json(report.config);

  const auto& s = report.summary;
  Json summary;
  summary["median_nse"] = number(s.median_nse);
  summary["predicted_nse"] = number(s.predicted_nse);
  summary["nse_relative_gap"] = number(s.nse_relative_gap);
  summary["median_residual_ratio"] = number(s.median_residual_ratio);
  summary["predicted_residual_ratio"] = number(s.predicted_residual_ratio);
  summary["residual_relative_gap"] = number(s.residual_relative_gap);
  summary["omega_hat"] = number(s.omega_hat);
  summary["omega_stderr"] = number(s.omega_stderr);
  summary["gamma_m"] = number(s.gamma_m);
  summary["linear_regime"] = s.linear_regime;
  summary["slack"] = number(s.slack);
  summary["unconverged"] = s.unconverged;
  for (const auto& [key, value] : s.extras) summary["extras"][key] = number(value);
  j["summary"] = summary;

  j["all_pass"] = report.all_pass();
  Json verdicts = Json::array();
  for (const auto& v : report.verdicts) {
    Json entry;
    entry["claim_id"] = v.claim_id;
    entry["pass"] = v.pass;
    entry["margin"] = number(v.margin);
    const auto claim = report.claims.find(v.claim_id);
    entry["claim"] = claim != report.claims.end() ? claim->second : "";
    verdicts.push_back(entry);
  }
  j["verdicts"] = verdicts;

  Json grid = Json::array();
  for (const auto& p : report.cdf_grid_values) grid.push_back({{"c", p.c}, {"F_Phi", p.F_Phi}, {"F_phi", p.F_phi}});
  j["cdf_grid_values"] = grid;

  Json rows = Json::array();
  for (const auto& r : report.width_rows) {
    rows.push_back({{"k", r.k},
                    {"n", r.n},
                    {"omega_hat", r.omega_hat},
                    {"stderr", r.omega_stderr},
                    {"bound", r.bound},
                    {"pass", r.pass}});
  }
  j["width_rows"] = rows;

  Json trials = Json::array();
  for (const auto& t : report.per_trial) {
    trials.push_back({{"trial_index", t.trial_index},
                      {"Phi", number(t.Phi)},
                      {"w_hat_norm", number(t.w_hat_norm)},
                      {"phi", number(t.phi)},
                      {"ao_norm", number(t.ao_norm)},
                      {"converged", t.converged}});
  }
  j["per_trial"] = trials;
  return j.dump(2) + "\n";
}

std::string trials_to_csv(const ExperimentReport& report) {
  std::string out = "trial_index,Phi,w_hat_norm,phi,ao_norm,converged\n";
  for (const auto& t : report.per_trial) {
    out += std::to_string(t.trial_index) + ',' + format_double(t.Phi) + ',' +
           format_double(t.w_hat_norm) + ',' + format_double(t.phi) + ',' +
           format_double(t.ao_norm) + ',' + (t.converged ? "true" : "false") + '\n';
  }
  return out;
}

std::string width_rows_to_csv(const std::vector<WidthRow>& rows) {
  std::string out = "k,n,omega_hat,stderr,bound,pass\n";
  for (const auto& r : rows) {
    out += std::to_string(r.k) + ',' + std::to_string(r.n) + ',' + format_double(r.omega_hat) +
           ',' + format_double(r.omega_stderr) + ',' + format_double(r.bound) + ',' +
           (r.pass ? "true" : "false") + '\n';
  }
  return out;
}

}  // namespace cgmt
