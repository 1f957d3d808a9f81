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


#include "aqec/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "aqec/errors.hpp"

namespace aqec::experiments {

namespace {

using nlohmann::json;
using models::SystemParams;

const char* const kParamKeys[] = {"chi_ab", "chi_aa", "chi_bb", "kappa", "gamma_x", "omega_p",
                                  "g12",    "g23",    "n_levels", "resonators", "bare_freqs"};

bool is_param_key(const std::string& key) {
  for (const char* k : kParamKeys) {
    if (key == k) return true;
  }
  return false;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number, got " + j.dump());
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer, got " + j.dump());
  return j.get<int>();
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a string, got " + j.dump());
  return j.get<std::string>();
}

bool boolean(const json& j, const std::string& where) {
  if (!j.is_boolean()) throw ConfigError(where + ": expected true or false, got " + j.dump());
  return j.get<bool>();
}

// Scalar broadcasts to all three channels.
models::Triple triple(const json& j, const std::string& where) {
  if (j.is_number()) {
    const double v = j.get<double>();
    return {v, v, v};
  }
  if (!j.is_array() || j.size() != 3) throw ConfigError(where + ": expected a number or 3 numbers");
  return {number(j[0], where + "[0]"), number(j[1], where + "[1]"), number(j[2], where + "[2]")};
}

// A flat row of three broadcasts to every row.
models::Matrix3 matrix3(const json& j, const std::string& where) {
  models::Matrix3 m;
  if (j.is_array() && j.size() == 3 && j[0].is_number()) {
    const auto row = triple(j, where);
    for (int r = 0; r < 3; ++r) m.row(r) << row[0], row[1], row[2];
    return m;
  }
  if (!j.is_array() || j.size() != 3) throw ConfigError(where + ": expected a 3x3 array");
  for (int r = 0; r < 3; ++r) {
    const auto row = triple(j[static_cast<std::size_t>(r)], where + "[" + std::to_string(r) + "]");
    m.row(r) << row[0], row[1], row[2];
  }
  return m;
}

json to_json(const models::Matrix3& m) {
  json out = json::array();
  for (int r = 0; r < 3; ++r) out.push_back({m(r, 0), m(r, 1), m(r, 2)});
  return out;
}

json to_json(const models::Triple& t) { return {t[0], t[1], t[2]}; }

json params_json(const SystemParams& p) {
  json j;
  j["chi_ab"] = to_json(p.chi_ab);
  j["chi_aa"] = to_json(p.chi_aa);
  j["chi_bb"] = to_json(p.chi_bb);
  j["kappa"] = to_json(p.kappa);
  j["gamma_x"] = to_json(p.gamma_x);
  j["omega_p"] = to_json(p.omega_p);
  j["g12"] = p.g12;
  j["g23"] = p.g23;
  j["n_levels"] = p.n_levels;
  j["resonators"] = p.resonators;
  if (p.bare_freqs) {
    j["bare_freqs"] = {{"resonator", to_json(p.bare_freqs->resonator)}, {"qubit", to_json(p.bare_freqs->qubit)}};
  } else {
    j["bare_freqs"] = nullptr;
  }
  return j;
}

SystemParams params_from(const json& j, SystemParams p) {
  if (!j.is_object()) throw ConfigError("params: expected an object");
  for (const auto& [key, v] : j.items()) {
    const std::string where = "params." + key;
    if (key == "chi_ab") {
      p.chi_ab = matrix3(v, where);
    } else if (key == "chi_aa") {
      p.chi_aa = matrix3(v, where);
    } else if (key == "chi_bb") {
      p.chi_bb = matrix3(v, where);
    } else if (key == "kappa") {
      p.kappa = triple(v, where);
    } else if (key == "gamma_x") {
      p.gamma_x = triple(v, where);
    } else if (key == "omega_p") {
      p.omega_p = triple(v, where);
    } else if (key == "g12") {
      p.g12 = number(v, where);
    } else if (key == "g23") {
      p.g23 = number(v, where);
    } else if (key == "n_levels") {
      p.n_levels = integer(v, where);
    } else if (key == "resonators") {
      p.resonators = integer(v, where);
    } else if (key == "bare_freqs") {
      if (v.is_null()) {
        p.bare_freqs.reset();
      } else {
        if (!v.is_object() || !v.contains("resonator") || !v.contains("qubit") || v.size() != 2) {
          throw ConfigError(where + ": expected {\"resonator\": [...], \"qubit\": [...]}");
        }
        p.bare_freqs = models::BareFrequencies{triple(v["resonator"], where + ".resonator"),
                                               triple(v["qubit"], where + ".qubit")};
      }
    } else {
      throw ConfigError("unknown parameter '" + key + "'");
    }
  }
  if (p.n_levels < 2) throw ConfigError("params.n_levels must be at least 2");
  if (p.resonators != 1 && p.resonators != 3) throw ConfigError("params.resonators must be 1 or 3");
  return p;
}

json config_json(const ScenarioConfig& c) {
  json j;
  j["scenario"] = c.id;
  j["params"] = params_json(c.params);
  j["horizon"] = c.horizon;
  j["samples"] = c.samples;
  j["method"] = to_string(c.method);
  j["rk4_dt"] = c.rk4_dt ? json(*c.rk4_dt) : json(nullptr);
  j["compensation"] = to_string(c.compensation);
  j["model"] = to_string(c.model);
  j["initial_state"] = to_string(c.initial);
  j["fit_form"] = c.fit_form ? json(to_string(*c.fit_form)) : json(nullptr);
  j["fit_column"] = c.fit_column;
  j["chi_ratio"] = c.chi_ratio ? json(*c.chi_ratio) : json(nullptr);
  j["omega_p_sweep"] = c.omega_p_sweep;
  j["probe_horizon"] = c.probe_horizon;
  j["probe_samples"] = c.probe_samples;
  j["asymmetry"] = c.asymmetry;
  j["single_resonator_levels"] = c.single_resonator_levels;
  j["allow_invalid_params"] = c.allow_invalid_params;
  j["output_dir"] = c.output_dir.string();
  return j;
}

// Fields absent from `j` keep the values of `c`.
ScenarioConfig config_from(const json& j, ScenarioConfig c) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "scenario") {
      c.id = text(v, key);
      scenario_info(c.id);
    } else if (key == "params") {
      c.params = params_from(v, c.params);
    } else if (key == "horizon") {
      c.horizon = number(v, key);
    } else if (key == "samples") {
      c.samples = integer(v, key);
    } else if (key == "method") {
      try {
        c.method = method_from_string(text(v, key));
      } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "rk4_dt") {
      c.rk4_dt = v.is_null() ? std::nullopt : std::optional<double>(number(v, key));
    } else if (key == "compensation") {
      c.compensation = compensation_from_string(text(v, key));
    } else if (key == "model") {
      c.model = model_kind_from_string(text(v, key));
    } else if (key == "initial_state") {
      c.initial = initial_state_from_string(text(v, key));
    } else if (key == "fit_form") {
      if (v.is_null()) {
        c.fit_form.reset();
      } else {
        try {
          c.fit_form = fit_form_from_string(text(v, key));
        } catch (const InvalidArgument& e) {
          throw ConfigError(e.what());
        }
      }
    } else if (key == "fit_column") {
      c.fit_column = text(v, key);
      const auto& cols = curve_columns();
      if (c.fit_column == "t" || std::find(cols.begin(), cols.end(), c.fit_column) == cols.end()) {
        throw ConfigError("fit_column '" + c.fit_column + "' is not a curve column");
      }
    } else if (key == "chi_ratio") {
      c.chi_ratio = v.is_null() ? std::nullopt : std::optional<double>(number(v, key));
    } else if (key == "omega_p_sweep") {
      if (!v.is_array()) throw ConfigError("omega_p_sweep: expected an array of numbers");
      c.omega_p_sweep.clear();
      for (const auto& x : v) c.omega_p_sweep.push_back(number(x, key));
    } else if (key == "probe_horizon") {
      c.probe_horizon = number(v, key);
    } else if (key == "probe_samples") {
      c.probe_samples = integer(v, key);
    } else if (key == "asymmetry") {
      c.asymmetry = number(v, key);
    } else if (key == "single_resonator_levels") {
      c.single_resonator_levels = integer(v, key);
    } else if (key == "allow_invalid_params") {
      c.allow_invalid_params = boolean(v, key);
    } else if (key == "output_dir") {
      c.output_dir = text(v, key);
    } else {
      throw ConfigError("unknown configuration key '" + key + "'");
    }
  }
  if (!(c.horizon > 0.0)) throw ConfigError("horizon must be positive");
  if (c.samples < 1) throw ConfigError("samples must be at least 1");
  return c;
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

json ratio_json(const models::RatioCheck& r) { return {{"ratio", r.ratio}, {"ok", r.ok}}; }

}  // namespace

ScenarioConfig default_config(const std::string& id) {
  scenario_info(id);
  ScenarioConfig c;
  c.id = id;
  if (id == "fig3") {
    c.params = models::single_qubit_params();
    c.horizon = 60.0;
    c.samples = 400;
    c.compensation = Compensation::Maximize;
  } else if (id == "fig4_sweep" || id == "saturation") {
    c.params = models::three_resonator_params(300.0);
    c.chi_ratio = 0.01;
    c.omega_p_sweep = models::default_omega_p_sweep();
    c.horizon = 3.0;
    c.samples = 600;
    // The lowest stand-in point sits below the 10x chi / kappa margin.
    c.allow_invalid_params = true;
  } else if (id == "fig6_compare") {
    c.params = models::three_resonator_params(300.0);
    c.horizon = 3.0;
    c.samples = 600;
  } else if (id == "select_rate") {
    c.params = models::three_resonator_params(300.0);
    c.params.gamma_x = {0.0, 0.0, 0.0};
    c.horizon = 3.0;
    c.samples = 300;
    c.compensation = Compensation::Maximize;
  } else if (id == "sym_rate") {
    c.params = models::three_resonator_params(300.0);
    c.horizon = 3.0;
    c.samples = 300;
  } else {
    c.params = models::three_resonator_params(300.0);
    c.horizon = 3.0;
    c.samples = 400;
  }
  return c;
}

ScenarioConfig resolve_config(const std::string& scenario, const std::optional<std::filesystem::path>& file,
                              const std::vector<std::string>& overrides) {
  json file_json = json::object();
  if (file) {
    std::ifstream is(*file);
    if (!is) throw ConfigError("cannot read config file '" + file->string() + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    file_json = parse_json(ss.str(), "config file '" + file->string() + "'");
    if (!file_json.is_object()) throw ConfigError("config file must hold a JSON object");
  }
  std::string id = scenario;
  if (id.empty()) id = file_json.contains("scenario") ? text(file_json["scenario"], "scenario") : "custom";
  file_json.erase("scenario");

  ScenarioConfig cfg = config_from(file_json, default_config(id));
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + o + "' is not key=value");
    set_config_value(cfg, o.substr(0, eq), o.substr(eq + 1));
  }
  return cfg;
}

void set_config_value(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
  if (key.empty()) throw ConfigError("empty override key");
  std::string path = key;
  if (is_param_key(key.substr(0, key.find('.')))) path = "params." + key;
  if (path == "scenario") throw ConfigError("the scenario id cannot be overridden; choose it with --scenario");

  json v;
  try {
    v = json::parse(value);
  } catch (const json::parse_error&) {
    v = value;
  }

  json j = config_json(cfg);
  std::string pointer = "/" + path;
  for (char& ch : pointer) {
    if (ch == '.') ch = '/';
  }
  const json::json_pointer ptr(pointer);
  if (!j.contains(ptr)) throw ConfigError("unknown configuration key '" + key + "'");
  j[ptr] = v;

  if (path == "params.omega_p" && scenario_info(cfg.id).is_sweep) {
    const auto t = triple(v, key);
    j["omega_p_sweep"] = json::array({t[0]});
  }
  cfg = config_from(j, cfg);
}

std::string config_to_json(const ScenarioConfig& cfg) { return config_json(cfg).dump(2); }

ScenarioConfig config_from_json(const std::string& text_in) {
  json j = parse_json(text_in, "configuration");
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  const std::string id = j.contains("scenario") ? text(j["scenario"], "scenario") : "custom";
  return config_from(j, default_config(id));
}

std::string params_to_json(const SystemParams& p) { return params_json(p).dump(2); }

SystemParams params_from_json(const std::string& text_in) {
  json j = parse_json(text_in, "parameters");
  if (j.is_object() && j.contains("params")) j = j["params"];
  return params_from(j, SystemParams{});
}

std::string validity_to_json(const models::ValidityReport& r) {
  json j;
  j["all_ok"] = r.all_ok();
  j["strong_dispersive"] = ratio_json(r.strong_dispersive);
  j["symmetry_residuals"] = to_json(r.symmetry_residuals);
  json deg = json::array();
  for (const auto& d : r.degeneracy) deg.push_back(ratio_json(d));
  j["degeneracy"] = deg;
  j["kappa_over_gamma"] = ratio_json(r.kappa_over_gamma);
  j["chi_over_kappa"] = ratio_json(r.chi_over_kappa);
  j["pump_below_kappa"] = ratio_json(r.pump_below_kappa);
  j["warnings"] = r.warnings;
  return j.dump(2);
}

}  // namespace aqec::experiments
