#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cgmt/report_io.hpp"
#include "expect_error.hpp"

using namespace cgmt;
using Json = nlohmann::json;

namespace {

ExperimentReport sample_report() {
  ExperimentReport r;
  r.config.kind = ExperimentKind::TailComparison;
  r.config.trials = 30;
  r.config.master_seed = 123456789012345ULL;
  r.per_trial = {{0, 0.5, 0.25, 0.4, 0.3, true}, {1, 0.1, 1e-20, 0.0, 0.0, false}};
  r.cdf_grid_values = {{0.0, 0.0, 0.5}, {1.0, 1.0, 1.0}};
  r.verdicts = {{"lower_tail", true, 0.25}, {"upper_tail", false, -0.125}};
  r.claims = {{"lower_tail", "P(Phi < c) <= 2 P(phi <= c)"}};
  r.summary.extras["ao_mean"] = 0.75;
  return r;
}

}  // namespace

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(-1e-20), "-1e-20");
  for (double v : {M_PI, 1.0 / 3.0, 6.02214076e23, 5e-324}) {
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
}

TEST(ExperimentConfigJson, ParsesAndRoundTrips) {
  const auto c = parse_experiment_config(R"({
    "kind": "nse_convergence", "n": 256, "m": 128, "k": 5, "sigma": 0.05,
    "trials": 50, "master_seed": 18446744073709551615, "t_grid": [1, 2],
    "width_pairs": [[5, 500], {"k": 10, "n": 1000}], "threads": 3, "comment": "x"
  })");
  EXPECT_EQ(c.kind, ExperimentKind::NseConvergence);
  EXPECT_EQ(c.n, 256);
  EXPECT_EQ(c.master_seed, std::numeric_limits<std::uint64_t>::max());
  EXPECT_EQ(c.threads, 3);
  ASSERT_EQ(c.width_pairs.size(), 2u);
  EXPECT_EQ(c.width_pairs[1], std::make_pair(10, 1000));
  EXPECT_EQ(c.t_grid, (std::vector<double>{1, 2}));

  const auto text = experiment_config_to_json(c);
  const auto j = Json::parse(text);
  EXPECT_FALSE(j.contains("threads"));
  EXPECT_DOUBLE_EQ(j.at("slack").get<double>(), c.resolved_slack());
  EXPECT_DOUBLE_EQ(j.at("K").get<double>(), c.resolved_K());
  const auto back = parse_experiment_config(text);
  EXPECT_EQ(experiment_config_to_json(back), text);
}

TEST(ExperimentConfigJson, RejectsBadInput) {
  auto kind = [](const char* text) {
    return error_kind_of([&] { parse_experiment_config(text); });
  };
  EXPECT_EQ(kind("{"), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind(R"({"n": 5})"), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind(R"({"kind": "nope"})"), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind(R"({"kind": "tail_comparison", "trails": 40})"), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind(R"({"kind": "tail_comparison", "n": 2.5})"), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind(R"({"kind": "tail_comparison", "n": "5"})"), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind(R"({"kind": "tail_comparison", "zero_noise": 1})"), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind(R"({"kind": "tail_comparison", "master_seed": -1})"), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind(R"([1, 2])"), ErrorKind::InvalidConfig);
}

TEST(ConeSpecJson, RoundTripsEveryKind) {
  for (const char* text :
       {R"({"kind":"full_space","n":4})", R"({"kind":"nonnegative_orthant","n":3})",
        R"({"kind":"single_ray","direction":[0.6,0.8]})",
        R"({"kind":"l1_descent","support":[0,2],"signs":[1,-1],"n":5})"}) {
    const auto cone = parse_cone_spec(text);
    const auto out = cone_spec_to_json(cone);
    EXPECT_EQ(cone_spec_to_json(parse_cone_spec(out)), out) << text;
  }
  EXPECT_THROW(parse_cone_spec(R"({"kind":"single_ray","direction":[3,4]})"), Error);
  const auto ray = parse_cone_spec(R"({"kind":"single_ray","direction":[0.6,0.8]})");
  EXPECT_EQ(ray.ambient_dim(), 2);
  const auto j = Json::parse(cone_spec_to_json(ray));
  EXPECT_NEAR(j.at("direction")[0].get<double>(), 0.6, 1e-15);
}

TEST(ConeSpecJson, RejectsBadInput) {
  auto kind = [](const char* text) { return error_kind_of([&] { parse_cone_spec(text); }); };
  EXPECT_EQ(kind(R"({"kind":"ball","n":3})"), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind(R"({"kind":"full_space","n":3,"extra":1})"), ErrorKind::InvalidConfig);
  EXPECT_THROW(parse_cone_spec(R"({"kind":"l1_descent","support":[7],"signs":[1],"n":5})"), Error);
  EXPECT_THROW(parse_cone_spec(R"({"kind":"single_ray","direction":[0,0]})"), Error);
}

TEST(LossRegJson, RoundTripAndDefaults) {
  const auto [loss, reg] = parse_loss_reg(R"({"loss":"l2","reg":"l1","lambda":0.5})");
  EXPECT_EQ(loss.kind, LossKind::L2Norm);
  EXPECT_EQ(reg.kind, RegularizerKind::L1Norm);
  EXPECT_EQ(reg.weight, 0.5);
  const auto text = loss_reg_to_json(loss, reg);
  const auto [loss2, reg2] = parse_loss_reg(text);
  EXPECT_EQ(loss_reg_to_json(loss2, reg2), text);
  const auto [dl, dr] = parse_loss_reg("{}");
  EXPECT_EQ(dl.kind, LossKind::HalfSquaredL2);
  EXPECT_EQ(dr.kind, RegularizerKind::Zero);
  EXPECT_EQ(error_kind_of([] { parse_loss_reg(R"({"loss":"huber"})"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(error_kind_of([] { parse_loss_reg(R"({"reg":"l1","lambda":-1})"); }),
            ErrorKind::InvalidConfig);
}

TEST(ReportJson, EmbedsReproducibilityFields) {
  const auto r = sample_report();
  const auto text = report_to_json(r);
  EXPECT_EQ(text, report_to_json(r));
  const auto j = Json::parse(text);
  EXPECT_EQ(j.at("version").get<std::string>(), tool_version());
  EXPECT_EQ(j.at("master_seed").get<std::uint64_t>(), 123456789012345ULL);
  EXPECT_EQ(j.at("config").at("kind").get<std::string>(), "tail_comparison");
  EXPECT_EQ(j.at("config").at("master_seed").get<std::uint64_t>(), 123456789012345ULL);
  EXPECT_FALSE(j.at("all_pass").get<bool>());
  ASSERT_EQ(j.at("verdicts").size(), 2u);
  EXPECT_EQ(j.at("verdicts")[0].at("claim").get<std::string>(), "P(Phi < c) <= 2 P(phi <= c)");
  EXPECT_EQ(j.at("verdicts")[1].at("margin").get<double>(), -0.125);
  EXPECT_EQ(j.at("per_trial").size(), 2u);
  EXPECT_EQ(j.at("per_trial")[1].at("converged").get<bool>(), false);
  EXPECT_EQ(j.at("summary").at("extras").at("ao_mean").get<double>(), 0.75);
  EXPECT_EQ(j.at("cdf_grid_values")[0].at("F_phi").get<double>(), 0.5);
  // The embedded config reproduces the run.
  const auto cfg = parse_experiment_config(j.at("config").dump());
  EXPECT_EQ(cfg.master_seed, r.config.master_seed);
  EXPECT_EQ(cfg.kind, r.config.kind);
}

TEST(TrialsCsv, ExactHeaderAndRows) {
  const auto csv = trials_to_csv(sample_report());
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "trial_index,Phi,w_hat_norm,phi,ao_norm,converged");
  std::getline(in, line);
  EXPECT_EQ(line, "0,0.5,0.25,0.4,0.3,true");
  std::getline(in, line);
  EXPECT_EQ(line, "1,0.1,1e-20,0,0,false");
  EXPECT_FALSE(std::getline(in, line));
}

TEST(WidthCsv, ExactHeader) {
  const auto csv = width_rows_to_csv({{5, 500, 7.0, 0.01, 7.28, true}});
  EXPECT_EQ(csv, "k,n,omega_hat,stderr,bound,pass\n5,500,7,0.01,7.28,true\n");
  EXPECT_EQ(width_rows_to_csv({}), "k,n,omega_hat,stderr,bound,pass\n");
}
