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


// CSV and metadata output.

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "aqec/config.hpp"
#include "aqec/errors.hpp"
#include "aqec/experiments.hpp"

namespace aqec::experiments {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open '" + path.string() + "' for writing");
  return os;
}

json fit_json(const FitResult& f) {
  return {{"rate", f.rate},
          {"amplitude", f.amplitude},
          {"offset", f.offset},
          {"residual_rms", f.residual_rms},
          {"form", to_string(f.form)},
          {"window", to_string(f.window)},
          {"points", f.points}};
}

json info_json(const IntegrationInfo& info) {
  return {{"method", to_string(info.method)},
          {"output_step", info.output_step},
          {"internal_dt", info.internal_dt},
          {"internal_steps", info.internal_steps},
          {"propagator_blocks", info.propagator_blocks},
          {"propagator_blocks_computed", info.propagator_blocks_computed},
          {"largest_block", info.largest_block},
          {"model", info.model_description}};
}

json audit_json(const StateAudit& a) {
  return {{"states", a.states},
          {"max_trace_error", a.max_trace_error},
          {"max_hermiticity_error", a.max_hermiticity_error},
          {"min_eigenvalue", a.min_eigenvalue},
          {"max_high_fock_population", a.max_high_fock_population}};
}

std::string curve_file(const std::string& id, const ScenarioResult& r, std::size_t index) {
  // Point scenarios: the first curve is <id>.csv. Sweeps tag every curve with its grid value.
  if (index == 0 && r.sweep_field.empty()) return id + ".csv";
  return id + "_" + r.curves[index].name + ".csv";
}

void write_summary(const std::filesystem::path& path, const ScenarioResult& r) {
  std::ofstream os = open_out(path);
  os << r.sweep_field
     << ",rate,amplitude,residual_rms,fit_points,predicted_rate,fidelity_end_raw,fidelity_end_compensated,error\n";
  for (const auto& row : r.sweep) {
    os << format_number(row.value) << ',';
    if (row.fit) {
      os << format_number(row.fit->rate) << ',' << format_number(row.fit->amplitude) << ','
         << format_number(row.fit->residual_rms) << ',' << row.fit->points << ',';
    } else {
      os << ",,,,";
    }
    if (row.error.empty()) {
      os << format_number(row.predicted_rate) << ',' << format_number(row.fidelity_end_raw) << ','
         << format_number(row.fidelity_end_compensated) << ",\n";
    } else {
      std::string msg = row.error;
      for (char& c : msg) {
        if (c == '"') c = '\'';
        if (c == '\n') c = ' ';
      }
      os << ",,,\"" << msg << "\"\n";
    }
  }
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_curve_csv(const std::filesystem::path& path, const Curve& curve) {
  std::ofstream os = open_out(path);
  const auto& cols = curve_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
  os << '\n';
  for (std::size_t i = 0; i < curve.t.size(); ++i) {
    const auto& r = curve.rows[i];
    os << format_number(curve.t[i]) << ',' << format_number(r.fidelity_raw) << ','
       << format_number(r.fidelity_compensated) << ',' << format_number(r.phase);
    for (double p : r.subspace_pops) os << ',' << format_number(p);
    for (std::size_t j = 0; j < 3; ++j) {
      os << ',';
      if (j < r.photon_numbers.size()) os << format_number(r.photon_numbers[j]);
    }
    os << ',' << format_number(r.purity) << '\n';
  }
}

std::vector<double> read_csv_column(const std::filesystem::path& path, const std::string& column) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read '" + path.string() + "'");
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("'" + path.string() + "' is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  std::size_t idx = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == column) idx = i;
  }
  if (idx == header.size()) throw ConfigError("column '" + column + "' not in '" + path.string() + "'");
  std::vector<double> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t i = 0; i <= idx; ++i) {
      if (!std::getline(ss, cell, ',')) cell.clear();
    }
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
      throw ConfigError("'" + path.string() + "' line " + std::to_string(lineno) + ": column '" + column +
                        "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<std::filesystem::path> write_outputs(const ScenarioConfig& cfg, const ScenarioResult& r) {
  std::filesystem::create_directories(cfg.output_dir);
  std::vector<std::filesystem::path> written;

  json curves = json::array();
  for (std::size_t i = 0; i < r.curves.size(); ++i) {
    const std::string file = curve_file(r.id, r, i);
    const auto path = cfg.output_dir / file;
    write_curve_csv(path, r.curves[i]);
    written.push_back(path);
    const Curve& c = r.curves[i];
    curves.push_back({{"name", c.name},
                      {"file", file},
                      {"description", c.description},
                      {"compensation", to_string(c.compensation)},
                      {"samples", c.t.size()},
                      {"integrator", info_json(c.info)},
                      {"audit", audit_json(c.audit)}});
  }

  json meta;
  const ScenarioInfo& info = scenario_info(r.id);
  meta["scenario"] = r.id;
  meta["summary"] = info.summary;
  if (!info.figure.empty()) meta["figure"] = info.figure;
  meta["version"] = library_version();
  meta["wall_seconds"] = r.wall_seconds;
  meta["config"] = json::parse(config_to_json(cfg));
  meta["validity"] = json::parse(validity_to_json(r.validity));
  meta["warnings"] = r.warnings;
  meta["notes"] = r.notes;
  meta["curves"] = curves;
  json fits = json::object();
  for (const auto& [k, f] : r.fits) fits[k] = fit_json(f);
  meta["fits"] = fits;
  json metrics = json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = v;
  meta["metrics"] = metrics;

  if (!r.sweep_field.empty()) {
    const auto path = cfg.output_dir / (r.id + ".summary.csv");
    write_summary(path, r);
    written.push_back(path);
    json rows = json::array();
    for (const auto& row : r.sweep) {
      json j = {{"value", row.value}};
      if (row.fit) j["fit"] = fit_json(*row.fit);
      if (!row.error.empty()) j["error"] = row.error;
      rows.push_back(j);
    }
    meta["sweep"] = {{"field", r.sweep_field}, {"rows", rows}};
  }

  const auto meta_path = cfg.output_dir / (r.id + ".meta.json");
  std::ofstream os = open_out(meta_path);
  os << meta.dump(2) << '\n';
  written.push_back(meta_path);
  return written;
}

}  // namespace aqec::experiments
