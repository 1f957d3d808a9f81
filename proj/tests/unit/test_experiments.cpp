// Copyright 2026 The aqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <unistd.h>

#include <gtest/gtest.h>

#include "aqec/config.hpp"
#include "aqec/errors.hpp"
#include "aqec/experiments.hpp"
#include "json.hpp"
#include "support/oracles.hpp"

namespace aqec::experiments {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("aqec_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

ScenarioConfig uncorrected_config() {
  ScenarioConfig c = default_config("custom");
  c.model = ModelKind::Uncorrected;
  c.initial = InitialState::Logical;
  c.horizon = 3.0;
  c.samples = 60;
  return c;
}

ScenarioConfig reduced_config() {
  ScenarioConfig c = default_config("custom");
  c.model = ModelKind::ThreeQubitReduced;
  c.initial = InitialState::Corrupted1;
  c.params.gamma_x = {0.0, 0.0, 0.0};
  c.horizon = 0.05;
  c.samples = 100;
  c.compensation = Compensation::Maximize;
  c.fit_form = FitForm::Rise;
  c.fit_column = "fidelity_raw";
  return c;
}

TEST(AnalyticUncorrected, Limits) {
  EXPECT_EQ(analytic_uncorrected(0.0, 1.0), 1.0);
  EXPECT_NEAR(analytic_uncorrected(60.0, 1.0), 0.125, 1e-15);
  EXPECT_NEAR(testing::brute_force_uncorrected(60.0, 1.0), 0.125, 1e-15);
  EXPECT_THROW(analytic_uncorrected(-1.0, 1.0), InvalidArgument);
}

TEST(AnalyticUncorrected, MatchesBruteForceChannels) {
  for (double t : {1.0 / 3.0, 0.01, 0.5, 2.0}) {
    EXPECT_NEAR(analytic_uncorrected(t, 1.0), testing::brute_force_uncorrected(t, 1.0), 1e-12);
    EXPECT_NEAR(analytic_uncorrected(t, 1.0), testing::brute_force_uncorrected_superop(t, 1.0), 1e-12);
  }
  EXPECT_NEAR(analytic_uncorrected(0.2, 2.5), testing::brute_force_uncorrected(0.2, 2.5), 1e-12);
}

TEST(TwoLevelRate, WeakAndStrongPump) {
  EXPECT_NEAR(two_level_correction_rate(5.0, 500.0) / models::correction_rate(5.0, 500.0), 1.0, 1e-3);
  EXPECT_NEAR(two_level_correction_rate(1000.0, 500.0), 250.0, 1e-12);
  EXPECT_THROW(two_level_correction_rate(1.0, 0.0), InvalidArgument);
}

TEST(Interpolate, LinearAndClamped) {
  const std::vector<double> t{0.0, 1.0, 2.0};
  const std::vector<double> y{0.0, 10.0, 30.0};
  EXPECT_DOUBLE_EQ(interpolate(t, y, 0.5), 5.0);
  EXPECT_DOUBLE_EQ(interpolate(t, y, 1.5), 20.0);
  EXPECT_DOUBLE_EQ(interpolate(t, y, -1.0), 0.0);
  EXPECT_DOUBLE_EQ(interpolate(t, y, 5.0), 30.0);
}

TEST(Enums, RoundTrip) {
  for (ModelKind k : {ModelKind::SingleQubitFull, ModelKind::SingleQubitReduced, ModelKind::ThreeQubitReduced,
                      ModelKind::ThreeResonator, ModelKind::SingleResonator, ModelKind::Uncorrected})
    EXPECT_EQ(model_kind_from_string(to_string(k)), k);
  for (InitialState s : {InitialState::Logical, InitialState::Corrupted1, InitialState::Corrupted2,
                         InitialState::Corrupted3, InitialState::ErrorMixture})
    EXPECT_EQ(initial_state_from_string(to_string(s)), s);
  for (Compensation c : {Compensation::Reference, Compensation::Maximize, Compensation::None})
    EXPECT_EQ(compensation_from_string(to_string(c)), c);
  EXPECT_THROW(model_kind_from_string("nope"), ConfigError);
}

TEST(InitialStates, ErrorMixtureAndVacuum) {
  const CompositeSpace s = make_space({2, 2, 2, 3});
  const DensityMatrix rho = initial_state(InitialState::ErrorMixture, s);
  const auto pops = observables::subspace_populations(rho);
  EXPECT_NEAR(pops[0], 0.0, 1e-15);
  for (int j = 1; j <= 3; ++j) EXPECT_NEAR(pops[static_cast<std::size_t>(j)], 1.0 / 3.0, 1e-15);
  EXPECT_EQ(observables::photon_numbers(rho)[0], 0.0);
  EXPECT_NEAR(observables::fidelity(initial_state(InitialState::Logical, s), models::logical_state()), 1.0, 1e-15);
}

TEST(Registry, EveryScenarioListed) {
  const auto& reg = scenario_registry();
  for (const std::string id : {"fig3", "fig4_sweep", "fig6_compare", "saturation", "select_rate", "sym_rate", "custom"}) {
    EXPECT_EQ(scenario_info(id).id, id);
  }
  EXPECT_EQ(reg.size(), 7u);
  EXPECT_EQ(scenario_info("fig3").figure, "3");
  EXPECT_EQ(scenario_info("fig4_sweep").figure, "4");
  EXPECT_EQ(scenario_info("fig6_compare").figure, "6");
  EXPECT_TRUE(scenario_info("fig4_sweep").is_sweep);
  EXPECT_THROW(scenario_info("fig9"), ConfigError);
}

TEST(Config, ScenarioDefaults) {
  const ScenarioConfig f3 = default_config("fig3");
  EXPECT_DOUBLE_EQ(f3.horizon, 60.0);
  EXPECT_DOUBLE_EQ(f3.params.omega_p[0], 0.3);
  EXPECT_EQ(f3.params.n_levels, 3);
  const ScenarioConfig f4 = default_config("fig4_sweep");
  EXPECT_DOUBLE_EQ(f4.horizon, 3.0);
  EXPECT_EQ(f4.samples, 600);  // output every 0.005 / gamma_x
  EXPECT_EQ(f4.omega_p_sweep, models::default_omega_p_sweep());
  EXPECT_DOUBLE_EQ(f4.params.kappa[0], 500.0);
  EXPECT_DOUBLE_EQ(f4.params.chi_ab(0, 0), -100.0 * f4.params.omega_p[0]);
  EXPECT_DOUBLE_EQ(f4.params.chi_aa(0, 0), f4.params.chi_ab(0, 0) / 100.0);
  EXPECT_EQ(default_config("select_rate").params.gamma_x[0], 0.0);
}

TEST(Config, OverridesBroadcastAndValidate) {
  ScenarioConfig c = default_config("custom");
  set_config_value(c, "omega_p", "120");
  for (double w : c.params.omega_p) EXPECT_EQ(w, 120.0);
  set_config_value(c, "params.kappa", "[400, 450, 500]");
  EXPECT_EQ(c.params.kappa[1], 450.0);
  set_config_value(c, "chi_ab", "[-10, 5, 5]");
  for (int j = 0; j < 3; ++j) EXPECT_EQ(c.params.chi_ab(j, 0), -10.0);
  set_config_value(c, "horizon", "2.5");
  EXPECT_EQ(c.horizon, 2.5);
  set_config_value(c, "model", "single_resonator");
  EXPECT_EQ(c.model, ModelKind::SingleResonator);
  EXPECT_THROW(set_config_value(c, "bogus", "1"), ConfigError);
  EXPECT_THROW(set_config_value(c, "params.bogus", "1"), ConfigError);
  EXPECT_THROW(set_config_value(c, "scenario", "fig3"), ConfigError);
  EXPECT_THROW(set_config_value(c, "horizon", "-1"), ConfigError);
  EXPECT_THROW(set_config_value(c, "samples", "\"many\""), ConfigError);
  EXPECT_THROW(set_config_value(c, "model", "banana"), ConfigError);
}

TEST(Config, OmegaOverrideCollapsesSweepGrid) {
  ScenarioConfig c = default_config("fig4_sweep");
  set_config_value(c, "omega_p", "9999");
  ASSERT_EQ(c.omega_p_sweep.size(), 1u);
  EXPECT_EQ(c.omega_p_sweep[0], 9999.0);
}

TEST(Config, JsonRoundTrip) {
  ScenarioConfig c = default_config("fig6_compare");
  c.params.bare_freqs = models::BareFrequencies{{1, 2, 3}, {4, 5, 6}};
  c.rk4_dt = 1e-4;
  const std::string text = config_to_json(c);
  const ScenarioConfig back = config_from_json(text);
  EXPECT_EQ(config_to_json(back), text);
  EXPECT_EQ(back.id, "fig6_compare");
  const models::SystemParams p = params_from_json(params_to_json(c.params));
  EXPECT_EQ(params_to_json(p), params_to_json(c.params));
  EXPECT_THROW(config_from_json("{\"scenario\": \"fig3\", \"horizn\": 3}"), ConfigError);
  EXPECT_THROW(config_from_json("not json"), ConfigError);
}

TEST(Config, ResolveLayersFileThenOverrides) {
  const fs::path dir = scratch_dir("resolve");
  const fs::path file = dir / "cfg.json";
  std::ofstream(file) << R"({"scenario": "sym_rate", "horizon": 2.0, "params": {"kappa": 400}})";
  const ScenarioConfig c = resolve_config("", file, {"horizon=1.5"});
  EXPECT_EQ(c.id, "sym_rate");
  EXPECT_EQ(c.horizon, 1.5);
  EXPECT_EQ(c.params.kappa[2], 400.0);
  EXPECT_EQ(resolve_config("fig3", file, {}).id, "fig3");
  EXPECT_THROW(resolve_config("", dir / "missing.json", {}), ConfigError);
  EXPECT_THROW(resolve_config("custom", std::nullopt, {"novalue"}), ConfigError);
  fs::remove_all(dir);
}

TEST(RunScenario, UncorrectedMatchesBruteForce) {
  const ScenarioResult r = run_scenario(uncorrected_config());
  const Curve& c = r.curves.front();
  ASSERT_EQ(c.t.size(), 61u);
  for (std::size_t k = 0; k < c.t.size(); ++k) {
    EXPECT_NEAR(c.rows[k].fidelity_raw, testing::brute_force_uncorrected(c.t[k], 1.0), 1e-8);
  }
  EXPECT_LT(c.audit.max_trace_error, 1e-9);
  EXPECT_LT(c.audit.max_hermiticity_error, 1e-10);
  EXPECT_GE(c.audit.min_eigenvalue, -1e-8);
  EXPECT_EQ(c.audit.states, 61u);
}

TEST(RunScenario, InvalidParamsAreGated) {
  ScenarioConfig c = reduced_config();
  c.params.kappa = {1.0, 1.0, 1.0};  // kappa << chi still holds, gamma << kappa fails only with flips
  c.params.gamma_x = {5.0, 5.0, 5.0};
  EXPECT_THROW(run_scenario(c), ConfigError);
  c.allow_invalid_params = true;
  c.horizon = 1e-4;  // Gamma_c = 9e4 at kappa = 1
  EXPECT_NO_THROW(run_scenario(c));
}

TEST(RunScenario, CustomFitRecoversReducedRate) {
  const ScenarioConfig c = reduced_config();
  const ScenarioResult r = run_scenario(c);
  EXPECT_NEAR(r.metric("fitted_rate"), models::correction_rate(300.0, 500.0), 1e-4 * 180.0);
  EXPECT_THROW(r.metric("nope"), InvalidArgument);
  EXPECT_THROW(r.curve("nope"), InvalidArgument);
}

TEST(Sweep, SinglePointEqualsRunScenario) {
  ScenarioConfig c = reduced_config();
  const ScenarioResult direct = run_scenario(c);
  const ScenarioResult swept = sweep(c, {"omega_p", {300.0}});
  ASSERT_EQ(swept.sweep.size(), 1u);
  ASSERT_TRUE(swept.sweep[0].fit.has_value());
  EXPECT_EQ(swept.sweep[0].fit->rate, direct.fits.front().second.rate);
  ASSERT_EQ(swept.curves.size(), direct.curves.size());
  const Curve& a = swept.curves.front();
  const Curve& b = direct.curves.front();
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    EXPECT_EQ(a.rows[k].fidelity_raw, b.rows[k].fidelity_raw);
    EXPECT_EQ(a.rows[k].fidelity_compensated, b.rows[k].fidelity_compensated);
  }
}

TEST(Sweep, RowsInGridOrderAndFailuresRecorded) {
  ScenarioConfig c = reduced_config();
  ::setenv("AQEC_THREADS", "3", 1);
  const ScenarioResult r = sweep(c, {"omega_p", {400.0, 0.0, 200.0}});
  ::unsetenv("AQEC_THREADS");
  ASSERT_EQ(r.sweep.size(), 3u);
  EXPECT_EQ(r.sweep[0].value, 400.0);
  EXPECT_EQ(r.sweep[1].value, 0.0);
  EXPECT_EQ(r.sweep[2].value, 200.0);
  EXPECT_TRUE(r.sweep[0].fit.has_value());
  EXPECT_FALSE(r.sweep[1].error.empty());
  EXPECT_FALSE(r.sweep[1].fit.has_value());
  EXPECT_TRUE(r.sweep[2].fit.has_value());
  EXPECT_GT(r.sweep[0].fit->rate, r.sweep[2].fit->rate);
  EXPECT_EQ(r.metric("points_failed"), 1.0);
  EXPECT_THROW(sweep(c, {"omega_p", {}}), ConfigError);
  EXPECT_THROW(sweep(c, {"no_such_field", {1.0}}), ConfigError);
}

TEST(Sweep, OrderIndependent) {
  ScenarioConfig c = reduced_config();
  const ScenarioResult a = sweep(c, {"omega_p", {100.0, 200.0}});
  const ScenarioResult b = sweep(c, {"omega_p", {200.0, 100.0}});
  EXPECT_EQ(a.sweep[0].fit->rate, b.sweep[1].fit->rate);
  EXPECT_EQ(a.sweep[1].fit->rate, b.sweep[0].fit->rate);
}

TEST(WorkerThreads, HonoursCap) {
  ::setenv("AQEC_THREADS", "1", 1);
  EXPECT_EQ(worker_threads(), 1u);
  ::unsetenv("AQEC_THREADS");
  EXPECT_GE(worker_threads(), 1u);
}

TEST(Output, CsvSchemaAndMetadata) {
  const fs::path dir = scratch_dir("out");
  ScenarioConfig c = uncorrected_config();
  c.output_dir = dir;
  const ScenarioResult r = run_scenario(c);
  const auto files = write_outputs(c, r);
  ASSERT_TRUE(fs::exists(dir / "custom.csv"));
  ASSERT_TRUE(fs::exists(dir / "custom.meta.json"));
  const std::string csv = slurp(dir / "custom.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "t,fidelity_raw,fidelity_compensated,phase,P_E0,P_E1,P_E2,P_E3,n_1,n_2,n_3,purity");
  EXPECT_EQ(csv.back(), '\n');
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  EXPECT_NE(line.find(",,,"), std::string::npos);  // absent resonators leave empty cells

  const auto col = read_csv_column(dir / "custom.csv", "fidelity_raw");
  ASSERT_EQ(col.size(), r.curves.front().rows.size());
  for (std::size_t k = 0; k < col.size(); ++k) EXPECT_EQ(col[k], r.curves.front().rows[k].fidelity_raw);
  EXPECT_THROW(read_csv_column(dir / "custom.csv", "nope"), ConfigError);

  const auto meta = nlohmann::json::parse(slurp(dir / "custom.meta.json"));
  EXPECT_EQ(meta.at("scenario"), "custom");
  EXPECT_EQ(meta.at("version"), library_version());
  EXPECT_TRUE(meta.at("config").contains("params"));
  EXPECT_TRUE(meta.at("config").at("params").contains("chi_ab"));
  EXPECT_TRUE(meta.contains("wall_seconds"));
  EXPECT_TRUE(meta.at("curves").is_array());
  EXPECT_TRUE(meta.at("curves")[0].contains("integrator"));
  fs::remove_all(dir);
}

TEST(Output, BitwiseReproducibleCsv) {
  const fs::path d1 = scratch_dir("rep1");
  const fs::path d2 = scratch_dir("rep2");
  ScenarioConfig c = default_config("fig3");
  c.samples = 100;
  c.output_dir = d1;
  write_outputs(c, run_scenario(c));
  c.output_dir = d2;
  write_outputs(c, run_scenario(c));
  for (const char* name : {"fig3.csv", "fig3_reduced.csv"}) {
    ASSERT_TRUE(fs::exists(d1 / name)) << name;
    EXPECT_EQ(slurp(d1 / name), slurp(d2 / name)) << name;
  }
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST(Output, NumberFormat) {
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "");
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) {
    EXPECT_EQ(std::stod(format_number(x)), x);
  }
  EXPECT_EQ(format_number(0.1).find(','), std::string::npos);
}

}  // namespace
}  // namespace aqec::experiments
