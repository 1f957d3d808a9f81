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


#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aqec/fit.hpp"
#include "aqec/hilbert.hpp"
#include "aqec/lindblad.hpp"
#include "aqec/models.hpp"
#include "aqec/observables.hpp"

namespace aqec::experiments {

enum class ModelKind {
  SingleQubitFull,
  SingleQubitReduced,
  ThreeQubitReduced,
  ThreeResonator,
  SingleResonator,
  Uncorrected,
};

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);
LindbladModel build_model(ModelKind kind, const models::SystemParams& p);

/// Initial qubit state; resonators always start in vacuum.
enum class InitialState {
  Logical,       // (|000> - i|111>) / sqrt(2)
  Corrupted1,    // sigma_x^1 applied to Logical
  Corrupted2,
  Corrupted3,
  ErrorMixture,  // bit-flip channel at p = 1: equal mixture over E1, E2, E3
};

std::string to_string(InitialState s);
InitialState initial_state_from_string(const std::string& name);
DensityMatrix initial_state(InitialState s, const CompositeSpace& space);

/**
 * How fidelity_compensated picks its phase. Reference follows the phase of a
 * matched run with gamma_x = 0; Maximize takes the best phase per sample;
 * None pins phi = 0 (compensated equals raw).
 */
enum class Compensation { Reference, Maximize, None };

std::string to_string(Compensation c);
Compensation compensation_from_string(const std::string& name);

struct ScenarioConfig {
  std::string id = "custom";
  models::SystemParams params;
  double horizon = 3.0;
  int samples = 400;
  Method method = Method::Auto;
  std::optional<double> rk4_dt;
  Compensation compensation = Compensation::Reference;

  // custom scenario
  ModelKind model = ModelKind::ThreeResonator;
  InitialState initial = InitialState::Logical;
  std::optional<FitForm> fit_form;
  std::string fit_column = "fidelity_compensated";

  /// When set, every point rescales chi_ab and chi_aa so that |omega_p / chi_ab(j, 0)| equals it.
  std::optional<double> chi_ratio;
  /// Omega_p grid of the sweep scenarios.
  std::vector<double> omega_p_sweep;
  /// Correction-rate probe horizon in units of 1 / min(Gamma_c, kappa / 2).
  double probe_horizon = 20.0;
  int probe_samples = 800;
  /// sym_rate: sum_k chi_ab(0, k) injected into the first row.
  double asymmetry = 5.0;
  /// fig6_compare: Fock truncation of the single-resonator model.
  int single_resonator_levels = 3;

  bool allow_invalid_params = false;
  std::filesystem::path output_dir = ".";
};

struct ScenarioInfo {
  std::string id;
  std::string figure;  // empty when not tied to a figure
  std::string summary;
  bool is_sweep = false;
};

const std::vector<ScenarioInfo>& scenario_registry();
const ScenarioInfo& scenario_info(const std::string& id);

/// Per-state invariant extremes gathered while a curve is integrated.
struct StateAudit {
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 1.0;
  double max_high_fock_population = 0.0;  // Fock levels >= 2, any resonator
  std::size_t states = 0;
};

struct Curve {
  std::string name;
  std::string description;
  std::vector<double> t;
  std::vector<observables::ObservableSet> rows;
  int resonators = 0;
  IntegrationInfo info;
  Compensation compensation = Compensation::None;
  StateAudit audit;

  std::vector<double> column(const std::string& name) const;
};

inline const std::vector<std::string>& curve_columns() {
  static const std::vector<std::string> cols{"t",    "fidelity_raw", "fidelity_compensated", "phase",
                                             "P_E0", "P_E1",         "P_E2",                 "P_E3",
                                             "n_1",  "n_2",          "n_3",                  "purity"};
  return cols;
}

struct SweepRow {
  double value = 0.0;
  std::optional<FitResult> fit;
  double predicted_rate = 0.0;
  double fidelity_end_raw = 0.0;
  double fidelity_end_compensated = 0.0;
  std::string error;  // empty on success
};

struct ScenarioResult {
  std::string id;
  std::vector<Curve> curves;  // curves.front() is the primary curve
  std::vector<std::pair<std::string, FitResult>> fits;
  std::vector<std::pair<std::string, double>> metrics;
  std::string sweep_field;
  std::vector<SweepRow> sweep;
  models::ValidityReport validity;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
  double wall_seconds = 0.0;

  const Curve& curve(const std::string& name) const;
  const FitResult& fit(const std::string& name) const;
  double metric(const std::string& name) const;
  bool has_metric(const std::string& name) const;
};

/**
 * Run one scenario. Throws ConfigError for an unknown id or for parameters
 * that fail validate_params (the pump-saturation check only warns) unless
 * allow_invalid_params is set, and IntegrationFailure when a state breaks
 * the density-matrix invariants.
 */
ScenarioResult run_scenario(const ScenarioConfig& cfg);

struct SweepSpec {
  std::string field = "omega_p";  // any key accepted by set_config_value
  std::vector<double> values;
};

/**
 * Run the per-point scenario at every grid value on a worker pool. Rows come
 * back in grid order; a failing point records its error and the rest go on.
 */
ScenarioResult sweep(const ScenarioConfig& base, const SweepSpec& spec);

/// Worker count: hardware concurrency capped by AQEC_THREADS when set.
unsigned worker_threads();

/**
 * Correction-rate probe: start in `state` with gamma_x = 0 and fit the
 * slowest significant mode of the code-space population P_E0. The rate is
 * the asymptotic correction rate; it saturates once the pump exchange
 * becomes underdamped.
 */
struct ProbeResult {
  Curve curve;
  FitResult fit;
  double horizon = 0.0;
};
ProbeResult correction_probe(ModelKind kind, const models::SystemParams& p, InitialState state,
                             const ScenarioConfig& settings);

/// Fidelity of the logical state under independent flips: (1 - p)^3, p = (1 - e^{-gamma t}) / 2.
double analytic_uncorrected(double t, double gamma_x);

/// Population-return rate of the resonant two-level exchange: 2 |Re mu_slow|, saturating at kappa / 2.
double two_level_correction_rate(double omega_p, double kappa);

/// Linear interpolation of a curve column at time t (clamped to the grid).
double interpolate(const std::vector<double>& t, const std::vector<double>& y, double at);

// Output ---------------------------------------------------------------------

/// Writes <id>.csv, <id>_<curve>.csv, <id>.summary.csv (sweeps) and <id>.meta.json; returns the paths.
std::vector<std::filesystem::path> write_outputs(const ScenarioConfig& cfg, const ScenarioResult& result);

void write_curve_csv(const std::filesystem::path& path, const Curve& curve);
std::string format_number(double x);
/// Throws ConfigError when the file, the column or a numeric cell is unusable.
std::vector<double> read_csv_column(const std::filesystem::path& path, const std::string& column);

std::string library_version();

}  // namespace aqec::experiments
