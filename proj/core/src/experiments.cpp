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


#include "aqec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <thread>

#include <Eigen/Eigenvalues>

#include "aqec/config.hpp"
#include "aqec/errors.hpp"

namespace aqec::experiments {

namespace {

using models::SystemParams;
using Clock = std::chrono::steady_clock;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string short_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

bool has_flips(const SystemParams& p) {
  return std::any_of(p.gamma_x.begin(), p.gamma_x.end(), [](double g) { return g > 0.0; });
}

double mean_flip_rate(const SystemParams& p) {
  return (p.gamma_x[0] + p.gamma_x[1] + p.gamma_x[2]) / 3.0;
}

// Rescale each coupling row so |omega_p / chi_ab(j, 0)| matches the requested ratio.
SystemParams prepare_params(const ScenarioConfig& cfg) {
  SystemParams p = cfg.params;
  if (!cfg.chi_ratio) return p;
  if (!(*cfg.chi_ratio > 0.0)) throw ConfigError("chi_ratio must be positive");
  for (int j = 0; j < 3; ++j) {
    const double anchor = std::abs(p.chi_ab(j, 0));
    if (anchor == 0.0 || p.omega_p[j] == 0.0) continue;
    const double scale = std::abs(p.omega_p[j]) / (*cfg.chi_ratio * anchor);
    p.chi_ab.row(j) *= scale;
    p.chi_aa.row(j) *= scale;
  }
  return p;
}

bool acceptable(const models::ValidityReport& r) {
  const bool degeneracy = std::all_of(r.degeneracy.begin(), r.degeneracy.end(),
                                      [](const models::RatioCheck& c) { return c.ok; });
  return degeneracy && r.strong_dispersive.ok && r.kappa_over_gamma.ok && r.chi_over_kappa.ok;
}

models::ValidityReport gate(const SystemParams& p, const ScenarioConfig& cfg) {
  models::ValidityReport r = models::validate_params(p);
  if (!acceptable(r) && !cfg.allow_invalid_params) {
    std::string msg = "parameters fail validation";
    for (const auto& w : r.warnings) msg += "; " + w;
    throw ConfigError(msg + " (set allow_invalid_params to run anyway)");
  }
  return r;
}

void check_settings(const ScenarioConfig& cfg) {
  if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) throw ConfigError("horizon must be positive");
  if (cfg.samples < 1) throw ConfigError("samples must be at least 1");
  if (cfg.probe_samples < 1) throw ConfigError("probe_samples must be at least 1");
  if (!(cfg.probe_horizon > 0.0)) throw ConfigError("probe_horizon must be positive");
  if (cfg.rk4_dt && !(*cfg.rk4_dt > 0.0)) throw ConfigError("rk4_dt must be positive");
  if (cfg.single_resonator_levels < 2) throw ConfigError("single_resonator_levels must be at least 2");
}

void audit_state(StateAudit& a, const DensityMatrix& rho) {
  const Matrix& m = rho.data();
  a.max_trace_error = std::max(a.max_trace_error, std::abs(m.trace() - Complex(1.0, 0.0)));
  a.max_hermiticity_error = std::max(a.max_hermiticity_error, (m - m.adjoint()).cwiseAbs().maxCoeff());
  const Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  a.min_eigenvalue = std::min(a.min_eigenvalue, es.eigenvalues().minCoeff());
  for (std::size_t site = 3; site < rho.space().num_sites(); ++site) {
    const auto pops = observables::fock_populations(rho, static_cast<int>(site - 3));
    double high = 0.0;
    for (std::size_t level = 2; level < pops.size(); ++level) high += pops[level];
    a.max_high_fock_population = std::max(a.max_high_fock_population, high);
  }
  ++a.states;
}

struct CurveRequest {
  std::string name;
  std::string description;
  ModelKind kind = ModelKind::ThreeResonator;
  SystemParams params;
  InitialState state = InitialState::Logical;
  TimeGrid grid;
  Compensation compensation = Compensation::Reference;
};

Curve simulate(const CurveRequest& req, const ScenarioConfig& settings) {
  const LindbladModel model = build_model(req.kind, req.params);
  const DensityMatrix rho0 = initial_state(req.state, model.space());

  IntegrationOptions opts;
  opts.method = settings.method;
  opts.rk4_dt = settings.rk4_dt;
  opts.keep_states = false;

  Compensation comp = req.compensation;
  if (comp == Compensation::Reference && !has_flips(req.params)) comp = Compensation::Maximize;

  std::vector<double> ref_phase;
  if (comp == Compensation::Reference) {
    SystemParams rp = req.params;
    rp.gamma_x = {0.0, 0.0, 0.0};
    const LindbladModel ref_model = build_model(req.kind, rp);
    IntegrationOptions ref_opts = opts;
    ref_opts.observer = [&](double, const DensityMatrix& rho) {
      ref_phase.push_back(observables::optimal_phase(rho));
    };
    integrate(ref_model, rho0, req.grid, ref_opts);
  }

  Curve curve;
  curve.name = req.name;
  curve.description = req.description;
  curve.resonators = static_cast<int>(model.space().num_sites()) - 3;
  curve.compensation = comp;
  std::size_t k = 0;
  opts.observer = [&](double t, const DensityMatrix& rho) {
    std::optional<double> phase;
    if (comp == Compensation::Reference) phase = ref_phase.at(k);
    if (comp == Compensation::None) phase = 0.0;
    curve.t.push_back(t);
    curve.rows.push_back(observables::measure(rho, phase));
    audit_state(curve.audit, rho);
    ++k;
  };
  curve.info = integrate(model, rho0, req.grid, opts).info;
  curve.audit.max_hermiticity_error = std::max(curve.audit.max_hermiticity_error, curve.info.max_hermiticity_drift);
  return curve;
}

std::vector<double> two_f_minus_one(const Curve& c) {
  std::vector<double> y = c.column("fidelity_compensated");
  for (double& v : y) v = std::clamp(2.0 * v - 1.0, 0.0, 1.0);
  return y;
}

double max_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

SystemParams single_resonator_from(const SystemParams& p3, int levels) {
  SystemParams p1 = p3;
  p1.resonators = 1;
  p1.n_levels = levels;
  if (p1.g12 == 0.0) p1.g12 = models::correction_rate(p1.omega_p[0], p1.kappa[0]) / 2.0;
  if (p1.g23 == 0.0) p1.g23 = -p1.g12 / std::sqrt(2.0);
  return p1;
}

void add_validity(ScenarioResult& r, const models::ValidityReport& v) {
  r.validity = v;
  for (const auto& w : v.warnings) r.warnings.push_back(w);
}

void add_model_notes(ScenarioResult& r, ModelKind kind, const SystemParams& p) {
  for (const auto& n : build_model(kind, p).notes()) r.notes.push_back(n);
}

ScenarioResult run_fig3(const ScenarioConfig& cfg) {
  ScenarioResult r;
  const SystemParams p = prepare_params(cfg);
  add_validity(r, gate(p, cfg));
  const TimeGrid grid = TimeGrid::uniform(cfg.horizon, cfg.samples);
  r.curves.push_back(simulate({"full", "single-qubit correction, qubits and resonator", ModelKind::SingleQubitFull,
                               p, InitialState::Corrupted1, grid, cfg.compensation},
                              cfg));
  r.curves.push_back(simulate({"reduced", "single-qubit correction, resonator eliminated",
                               ModelKind::SingleQubitReduced, p, InitialState::Corrupted1, grid, cfg.compensation},
                              cfg));
  const Curve& full = r.curves[0];
  const Curve& reduced = r.curves[1];
  const FitResult f_full = fit_rate(full.t, full.column("fidelity_raw"), FitForm::Rise);
  const FitResult f_red = fit_rate(reduced.t, reduced.column("fidelity_raw"), FitForm::Rise);
  r.fits = {{"full", f_full}, {"reduced", f_red}};
  const double predicted = models::correction_rate(p.omega_p[0], p.kappa[0]);
  r.metrics = {
      {"fitted_rate", f_full.rate},
      {"fitted_rate_reduced", f_red.rate},
      {"predicted_rate", predicted},
      {"two_level_rate", two_level_correction_rate(p.omega_p[0], p.kappa[0])},
      {"rate_relative_error", f_full.rate / predicted - 1.0},
      {"max_abs_deviation", max_abs_difference(full.column("fidelity_raw"), reduced.column("fidelity_raw"))},
      {"fidelity_end_full", full.rows.back().fidelity_raw},
      {"max_high_fock_population", full.audit.max_high_fock_population},
  };
  return r;
}

ProbeResult probe_for(ModelKind kind, const SystemParams& p, InitialState s, const ScenarioConfig& cfg,
                      const std::string& name) {
  ProbeResult pr = correction_probe(kind, p, s, cfg);
  pr.curve.name = name;
  return pr;
}

ScenarioResult run_fig4_point(const ScenarioConfig& cfg) {
  ScenarioResult r;
  const SystemParams p = prepare_params(cfg);
  add_validity(r, gate(p, cfg));
  add_model_notes(r, ModelKind::ThreeResonator, p);
  const TimeGrid grid = TimeGrid::uniform(cfg.horizon, cfg.samples);
  r.curves.push_back(simulate({"fidelity", "three-resonator protocol from the logical state",
                               ModelKind::ThreeResonator, p, InitialState::Logical, grid, cfg.compensation},
                              cfg));
  ProbeResult probe = probe_for(ModelKind::ThreeResonator, p, InitialState::Corrupted1, cfg, "probe");
  r.fits = {{"probe", probe.fit}};
  const Curve& main = r.curves[0];
  r.metrics = {
      {"omega_p", p.omega_p[0]},
      {"probe_rate", probe.fit.rate},
      {"predicted_rate", models::correction_rate(p.omega_p[0], p.kappa[0])},
      {"two_level_rate", two_level_correction_rate(p.omega_p[0], p.kappa[0])},
      {"fidelity_compensated_end", main.rows.back().fidelity_compensated},
      {"fidelity_raw_end", main.rows.back().fidelity_raw},
  };
  if (has_flips(p)) {
    const double third = 1.0 / (3.0 * mean_flip_rate(p));
    r.metrics.emplace_back("fidelity_compensated_at_third",
                           interpolate(main.t, main.column("fidelity_compensated"), third));
    r.metrics.emplace_back("fidelity_raw_at_third", interpolate(main.t, main.column("fidelity_raw"), third));
  }
  r.curves.push_back(std::move(probe.curve));
  return r;
}

ScenarioResult run_saturation_point(const ScenarioConfig& cfg) {
  ScenarioResult r;
  const SystemParams p = prepare_params(cfg);
  add_validity(r, gate(p, cfg));
  ProbeResult probe = probe_for(ModelKind::ThreeResonator, p, InitialState::Corrupted1, cfg, "probe");
  r.fits = {{"probe", probe.fit}};
  r.metrics = {
      {"omega_p", p.omega_p[0]},
      {"probe_rate", probe.fit.rate},
      {"predicted_rate", models::correction_rate(p.omega_p[0], p.kappa[0])},
      {"two_level_rate", two_level_correction_rate(p.omega_p[0], p.kappa[0])},
      {"probe_horizon", probe.horizon},
  };
  r.curves.push_back(std::move(probe.curve));
  return r;
}

ScenarioResult run_fig6(const ScenarioConfig& cfg) {
  ScenarioResult r;
  const SystemParams p3 = prepare_params(cfg);
  const SystemParams p1 = single_resonator_from(p3, cfg.single_resonator_levels);
  add_validity(r, gate(p3, cfg));
  gate(p1, cfg);
  add_model_notes(r, ModelKind::ThreeResonator, p3);
  const TimeGrid grid = TimeGrid::uniform(cfg.horizon, cfg.samples);
  r.curves.push_back(simulate({"single_resonator", "one resonator with transfer couplings",
                               ModelKind::SingleResonator, p1, InitialState::Logical, grid, cfg.compensation},
                              cfg));
  r.curves.push_back(simulate({"three_resonator", "three resonators", ModelKind::ThreeResonator, p3,
                               InitialState::Logical, grid, cfg.compensation},
                              cfg));
  r.curves.push_back(simulate({"uncorrected", "bit flips only", ModelKind::Uncorrected, p3, InitialState::Logical,
                               grid, Compensation::None},
                              cfg));
  ProbeResult single = probe_for(ModelKind::SingleResonator, p1, InitialState::ErrorMixture, cfg, "single_probe");
  ProbeResult three = probe_for(ModelKind::ThreeResonator, p3, InitialState::ErrorMixture, cfg, "three_probe");
  r.fits = {{"single_probe", single.fit}, {"three_probe", three.fit}};

  const Curve& unc = r.curves[2];
  double analytic_err = 0.0;
  for (std::size_t i = 0; i < unc.t.size(); ++i) {
    const double gamma = mean_flip_rate(p3);
    analytic_err = std::max(analytic_err, std::abs(unc.rows[i].fidelity_raw - analytic_uncorrected(unc.t[i], gamma)));
  }
  r.metrics = {
      {"single_probe_rate", single.fit.rate},
      {"three_probe_rate", three.fit.rate},
      {"rate_ratio", single.fit.rate / three.fit.rate},
      {"max_high_fock_population",
       std::max(r.curves[0].audit.max_high_fock_population, single.curve.audit.max_high_fock_population)},
      {"uncorrected_max_analytic_error", analytic_err},
      {"fidelity_end_single", r.curves[0].rows.back().fidelity_compensated},
      {"fidelity_end_three", r.curves[1].rows.back().fidelity_compensated},
      {"fidelity_end_uncorrected", unc.rows.back().fidelity_raw},
  };
  if (has_flips(p3)) {
    const double third = 1.0 / (3.0 * mean_flip_rate(p3));
    const double three_at = interpolate(r.curves[1].t, r.curves[1].column("fidelity_compensated"), third);
    const double unc_at = interpolate(unc.t, unc.column("fidelity_raw"), third);
    r.metrics.emplace_back("three_minus_uncorrected_at_third", three_at - unc_at);
  }
  r.curves.push_back(std::move(single.curve));
  r.curves.push_back(std::move(three.curve));
  return r;
}

ScenarioResult run_select(const ScenarioConfig& cfg) {
  ScenarioResult r;
  const SystemParams p = prepare_params(cfg);
  add_validity(r, gate(p, cfg));
  if (has_flips(p)) r.warnings.push_back("select_rate expects gamma_x = 0; flips add to the fitted decay");
  const TimeGrid grid = TimeGrid::uniform(cfg.horizon, cfg.samples);
  r.curves.push_back(simulate({"fidelity", "three-resonator protocol, no flips", ModelKind::ThreeResonator, p,
                               InitialState::Logical, grid, cfg.compensation},
                              cfg));
  const Curve& c = r.curves[0];
  const FitResult f = fit_rate(c.t, two_f_minus_one(c), FitForm::Decay);
  r.fits = {{"coherence", f}};
  const double predicted = models::residual_rates(p).gamma_select;
  r.metrics = {{"fitted_rate", f.rate}, {"predicted_rate", predicted}, {"ratio", f.rate / predicted}};
  return r;
}

ScenarioResult run_sym(const ScenarioConfig& cfg) {
  ScenarioResult r;
  const SystemParams p_sym = prepare_params(cfg);
  SystemParams p_asym = p_sym;
  p_asym.chi_ab(0, 0) += cfg.asymmetry - p_sym.chi_ab.row(0).sum();
  add_validity(r, gate(p_asym, cfg));
  gate(p_sym, cfg);
  const TimeGrid grid = TimeGrid::uniform(cfg.horizon, cfg.samples);
  r.curves.push_back(simulate({"asymmetric", "first coupling row with a nonzero sum", ModelKind::ThreeResonator,
                               p_asym, InitialState::Logical, grid, cfg.compensation},
                              cfg));
  r.curves.push_back(simulate({"symmetric", "symmetric coupling rows", ModelKind::ThreeResonator, p_sym,
                               InitialState::Logical, grid, cfg.compensation},
                              cfg));
  const FitResult fa = fit_rate(r.curves[0].t, two_f_minus_one(r.curves[0]), FitForm::Decay);
  const FitResult fs = fit_rate(r.curves[1].t, two_f_minus_one(r.curves[1]), FitForm::Decay);
  r.fits = {{"asymmetric", fa}, {"symmetric", fs}};
  const double predicted = models::residual_rates(p_asym).gamma_sym - models::residual_rates(p_sym).gamma_sym;
  const double added = fa.rate - fs.rate;
  r.metrics = {
      {"rate_asymmetric", fa.rate},
      {"rate_symmetric", fs.rate},
      {"added_rate", added},
      {"predicted_rate", predicted},
      {"ratio", added / predicted},
  };
  return r;
}

ScenarioResult run_custom(const ScenarioConfig& cfg) {
  ScenarioResult r;
  const SystemParams p = prepare_params(cfg);
  add_validity(r, gate(p, cfg));
  add_model_notes(r, cfg.model, p);
  const TimeGrid grid = TimeGrid::uniform(cfg.horizon, cfg.samples);
  r.curves.push_back(simulate({"custom", to_string(cfg.model), cfg.model, p, cfg.initial, grid, cfg.compensation}, cfg));
  if (cfg.fit_form) {
    const Curve& c = r.curves[0];
    const FitResult f = fit_rate(c.t, c.column(cfg.fit_column), *cfg.fit_form);
    r.fits = {{cfg.fit_column, f}};
    r.metrics = {{"fitted_rate", f.rate}};
  }
  return r;
}

ScenarioResult run_point(const ScenarioConfig& cfg) {
  check_settings(cfg);
  const auto start = Clock::now();
  ScenarioResult r;
  if (cfg.id == "fig3") {
    r = run_fig3(cfg);
  } else if (cfg.id == "fig4_sweep") {
    r = run_fig4_point(cfg);
  } else if (cfg.id == "saturation") {
    r = run_saturation_point(cfg);
  } else if (cfg.id == "fig6_compare") {
    r = run_fig6(cfg);
  } else if (cfg.id == "select_rate") {
    r = run_select(cfg);
  } else if (cfg.id == "sym_rate") {
    r = run_sym(cfg);
  } else if (cfg.id == "custom") {
    r = run_custom(cfg);
  } else {
    throw ConfigError("unknown scenario '" + cfg.id + "'");
  }
  r.id = cfg.id;
  r.wall_seconds = seconds_since(start);
  return r;
}

std::optional<double> rate_at(const std::vector<SweepRow>& rows, double value) {
  for (const auto& row : rows) {
    if (row.value == value && row.fit) return row.fit->rate;
  }
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::SingleQubitFull: return "single_qubit_full";
    case ModelKind::SingleQubitReduced: return "single_qubit_reduced";
    case ModelKind::ThreeQubitReduced: return "three_qubit_reduced";
    case ModelKind::ThreeResonator: return "three_resonator";
    case ModelKind::SingleResonator: return "single_resonator";
    case ModelKind::Uncorrected: return "uncorrected";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  for (ModelKind k : {ModelKind::SingleQubitFull, ModelKind::SingleQubitReduced, ModelKind::ThreeQubitReduced,
                      ModelKind::ThreeResonator, ModelKind::SingleResonator, ModelKind::Uncorrected}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown model '" + name + "'");
}

LindbladModel build_model(ModelKind kind, const SystemParams& p) {
  switch (kind) {
    case ModelKind::SingleQubitFull: return models::build_single_qubit_full(p);
    case ModelKind::SingleQubitReduced: return models::build_single_qubit_reduced(p);
    case ModelKind::ThreeQubitReduced: return models::build_three_qubit_reduced(p);
    case ModelKind::ThreeResonator: return models::build_three_resonator_full(p);
    case ModelKind::SingleResonator: return models::build_single_resonator(p);
    case ModelKind::Uncorrected: return models::build_uncorrected(p);
  }
  throw InvalidArgument("unknown model kind");
}

std::string to_string(InitialState s) {
  switch (s) {
    case InitialState::Logical: return "logical";
    case InitialState::Corrupted1: return "corrupted1";
    case InitialState::Corrupted2: return "corrupted2";
    case InitialState::Corrupted3: return "corrupted3";
    case InitialState::ErrorMixture: return "error_mixture";
  }
  return "unknown";
}

InitialState initial_state_from_string(const std::string& name) {
  for (InitialState s : {InitialState::Logical, InitialState::Corrupted1, InitialState::Corrupted2,
                         InitialState::Corrupted3, InitialState::ErrorMixture}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown initial state '" + name + "'");
}

DensityMatrix initial_state(InitialState s, const CompositeSpace& space) {
  DensityMatrix q = DensityMatrix::pure(models::logical_state());
  switch (s) {
    case InitialState::Logical: break;
    case InitialState::Corrupted1: q = DensityMatrix::pure(models::corrupted_state(1)); break;
    case InitialState::Corrupted2: q = DensityMatrix::pure(models::corrupted_state(2)); break;
    case InitialState::Corrupted3: q = DensityMatrix::pure(models::corrupted_state(3)); break;
    case InitialState::ErrorMixture: q = models::apply_channel(models::bitflip_kraus(1.0), q); break;
  }
  if (space.num_sites() < 3) throw SpaceMismatch("model space lacks the three qubits: " + space.to_string());
  if (space.num_sites() == 3) return q;
  std::vector<int> dims(space.dims().begin() + 3, space.dims().end());
  const CompositeSpace modes = make_space(dims);
  const std::vector<int> vac(dims.size(), 0);
  return tensor(q, DensityMatrix::pure(StateVector::basis(modes, vac)));
}

std::string to_string(Compensation c) {
  switch (c) {
    case Compensation::Reference: return "reference";
    case Compensation::Maximize: return "maximize";
    case Compensation::None: return "none";
  }
  return "unknown";
}

Compensation compensation_from_string(const std::string& name) {
  for (Compensation c : {Compensation::Reference, Compensation::Maximize, Compensation::None}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("unknown compensation '" + name + "' (reference, maximize or none)");
}

const std::vector<ScenarioInfo>& scenario_registry() {
  static const std::vector<ScenarioInfo> registry{
      {"fig3", "3", "single-qubit correction from a corrupted state: full model vs. reduced model", false},
      {"fig4_sweep", "4", "three-resonator protocol over an Omega_p sweep, with correction-rate probes", true},
      {"fig6_compare", "6", "single-resonator vs. three-resonator vs. uncorrected, plus rate ratio", false},
      {"saturation", "4", "correction-rate probe over the Omega_p sweep (saturation near kappa)", true},
      {"select_rate", "", "coherence decay from off-resonant pumping, gamma_x = 0", false},
      {"sym_rate", "", "added decay from an asymmetric coupling row", false},
      {"custom", "", "any model, initial state and horizon from the configuration", false},
  };
  return registry;
}

const ScenarioInfo& scenario_info(const std::string& id) {
  for (const auto& info : scenario_registry()) {
    if (info.id == id) return info;
  }
  throw ConfigError("unknown scenario '" + id + "'");
}

std::vector<double> Curve::column(const std::string& col) const {
  std::vector<double> out;
  out.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& r = rows[i];
    double v = kNaN;
    if (col == "t") {
      v = t[i];
    } else if (col == "fidelity_raw") {
      v = r.fidelity_raw;
    } else if (col == "fidelity_compensated") {
      v = r.fidelity_compensated;
    } else if (col == "phase") {
      v = r.phase;
    } else if (col == "purity") {
      v = r.purity;
    } else if (col.size() == 4 && col.rfind("P_E", 0) == 0 && col[3] >= '0' && col[3] <= '3') {
      v = r.subspace_pops[static_cast<std::size_t>(col[3] - '0')];
    } else if (col.size() == 3 && col.rfind("n_", 0) == 0 && col[2] >= '1' && col[2] <= '3') {
      const auto j = static_cast<std::size_t>(col[2] - '1');
      if (j < r.photon_numbers.size()) v = r.photon_numbers[j];
    } else {
      throw InvalidArgument("unknown column '" + col + "'");
    }
    out.push_back(v);
  }
  return out;
}

const Curve& ScenarioResult::curve(const std::string& name) const {
  for (const auto& c : curves) {
    if (c.name == name) return c;
  }
  throw InvalidArgument("no curve named '" + name + "'");
}

const FitResult& ScenarioResult::fit(const std::string& name) const {
  for (const auto& [k, f] : fits) {
    if (k == name) return f;
  }
  throw InvalidArgument("no fit named '" + name + "'");
}

bool ScenarioResult::has_metric(const std::string& name) const {
  return std::any_of(metrics.begin(), metrics.end(), [&](const auto& m) { return m.first == name; });
}

double ScenarioResult::metric(const std::string& name) const {
  for (const auto& [k, v] : metrics) {
    if (k == name) return v;
  }
  throw InvalidArgument("no metric named '" + name + "'");
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  const ScenarioInfo& info = scenario_info(cfg.id);
  check_settings(cfg);
  if (info.is_sweep) {
    if (cfg.omega_p_sweep.empty()) throw ConfigError("omega_p_sweep is empty");
    return sweep(cfg, {"omega_p", cfg.omega_p_sweep});
  }
  return run_point(cfg);
}

unsigned worker_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("AQEC_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

ScenarioResult sweep(const ScenarioConfig& base, const SweepSpec& spec) {
  scenario_info(base.id);
  if (spec.values.empty()) throw ConfigError("sweep grid is empty");
  const auto start = Clock::now();
  const std::size_t n = spec.values.size();

  // Resolve every point up front so a bad field name fails before any work starts.
  std::vector<ScenarioConfig> points(n, base);
  for (std::size_t i = 0; i < n; ++i) set_config_value(points[i], spec.field, format_number(spec.values[i]));

  std::vector<std::optional<ScenarioResult>> results(n);
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = run_point(points[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const unsigned workers = std::min<unsigned>(worker_threads(), static_cast<unsigned>(n));
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();

  ScenarioResult out;
  out.id = base.id;
  out.sweep_field = spec.field;
  std::set<std::string> seen;
  bool have_validity = false;
  for (std::size_t i = 0; i < n; ++i) {
    SweepRow row;
    row.value = spec.values[i];
    const std::string tag = spec.field + "_" + short_number(row.value);
    if (!results[i]) {
      row.error = errors[i];
      out.warnings.push_back(tag + ": " + errors[i]);
      out.sweep.push_back(std::move(row));
      continue;
    }
    ScenarioResult& r = *results[i];
    if (!have_validity) {
      out.validity = r.validity;
      have_validity = true;
    }
    if (!r.fits.empty()) row.fit = r.fits.front().second;
    if (r.has_metric("predicted_rate")) row.predicted_rate = r.metric("predicted_rate");
    if (!r.curves.empty()) {
      row.fidelity_end_raw = r.curves.front().rows.back().fidelity_raw;
      row.fidelity_end_compensated = r.curves.front().rows.back().fidelity_compensated;
    }
    for (const auto& w : r.warnings) {
      if (seen.insert(tag + w).second) out.warnings.push_back(tag + ": " + w);
    }
    for (const auto& note : r.notes) {
      if (seen.insert(note).second) out.notes.push_back(note);
    }
    for (std::size_t c = 0; c < r.curves.size(); ++c) {
      Curve curve = std::move(r.curves[c]);
      curve.name = c == 0 ? tag : tag + "_" + curve.name;
      out.curves.push_back(std::move(curve));
    }
    for (auto& [k, f] : r.fits) out.fits.emplace_back(tag + ":" + k, f);
    for (auto& [k, v] : r.metrics) out.metrics.emplace_back(tag + ":" + k, v);
    out.sweep.push_back(std::move(row));
  }

  std::size_t failed = 0;
  bool monotone = true;
  std::optional<double> prev;
  for (const auto& row : out.sweep) {
    if (!row.fit) {
      ++failed;
      continue;
    }
    if (prev && row.fit->rate < *prev) monotone = false;
    prev = row.fit->rate;
  }
  out.metrics.emplace_back("points_failed", static_cast<double>(failed));
  out.metrics.emplace_back("rate_monotone", monotone ? 1.0 : 0.0);
  if (spec.field == "omega_p") {
    const auto r100 = rate_at(out.sweep, 100.0);
    const auto r200 = rate_at(out.sweep, 200.0);
    const auto r400 = rate_at(out.sweep, 400.0);
    const auto r500 = rate_at(out.sweep, 500.0);
    if (r100 && r200 && r400 && r500) {
      out.metrics.emplace_back("increment_ratio", (*r500 - *r400) / (*r200 - *r100));
    }
  }
  if ((base.id == "fig4_sweep" || base.id == "saturation") && spec.field == "omega_p") {
    out.notes.push_back("the default omega_p grid is a stand-in; the original curve labels are not available");
  }
  out.wall_seconds = seconds_since(start);
  return out;
}

ProbeResult correction_probe(ModelKind kind, const SystemParams& p, InitialState state,
                             const ScenarioConfig& settings) {
  SystemParams q = p;
  q.gamma_x = {0.0, 0.0, 0.0};
  const double gc = models::correction_rate(q.omega_p[0], q.kappa[0]);
  const double scale = std::min(gc, q.kappa[0] / 2.0);
  if (!(scale > 0.0)) throw ConfigError("correction probe needs a positive pump and kappa");
  ProbeResult out;
  out.horizon = settings.probe_horizon / scale;
  out.curve = simulate({"probe", "correction-rate probe (gamma_x = 0)", kind, q, state,
                        TimeGrid::uniform(out.horizon, settings.probe_samples), Compensation::Maximize},
                       settings);
  out.fit = fit_rate(out.curve.t, out.curve.column("P_E0"), FitForm::SlowestMode);
  return out;
}

double analytic_uncorrected(double t, double gamma_x) {
  if (!(t >= 0.0)) throw InvalidArgument("analytic_uncorrected: t must be non-negative");
  if (!(gamma_x >= 0.0)) throw InvalidArgument("analytic_uncorrected: gamma_x must be non-negative");
  const double p = 0.5 * (1.0 - std::exp(-gamma_x * t));
  return std::pow(1.0 - p, 3);
}

double two_level_correction_rate(double omega_p, double kappa) {
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  const double disc = kappa * kappa / 16.0 - omega_p * omega_p / 4.0;
  if (disc <= 0.0) return kappa / 2.0;
  return 2.0 * (kappa / 4.0 - std::sqrt(disc));
}

double interpolate(const std::vector<double>& t, const std::vector<double>& y, double at) {
  if (t.empty() || t.size() != y.size()) throw InvalidArgument("interpolate: bad series");
  if (at <= t.front()) return y.front();
  if (at >= t.back()) return y.back();
  const auto it = std::upper_bound(t.begin(), t.end(), at);
  const std::size_t hi = static_cast<std::size_t>(it - t.begin());
  const std::size_t lo = hi - 1;
  const double w = (at - t[lo]) / (t[hi] - t[lo]);
  return (1.0 - w) * y[lo] + w * y[hi];
}

std::string library_version() { return "0.1.0"; }

}  // namespace aqec::experiments
