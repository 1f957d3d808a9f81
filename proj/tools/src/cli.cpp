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


#include "aqec/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "aqec/config.hpp"
#include "aqec/errors.hpp"
#include "aqec/experiments.hpp"
#include "aqec/fit.hpp"

namespace aqec::cli {

namespace {

using nlohmann::json;
namespace ex = aqec::experiments;

struct Common {
  std::string scenario;
  std::string config;
  std::vector<std::string> overrides;
  std::string out_dir;
  int verbosity = 1;
};

void add_common(CLI::App* cmd, Common& c, bool with_out) {
  cmd->add_option("--config,-c", c.config, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--set,-s", c.overrides, "override a field: dotted.key=value (repeatable)");
  if (with_out) cmd->add_option("--out,-o", c.out_dir, "output directory");
  cmd->add_flag_function(
      "--quiet,-q", [&c](std::int64_t) { c.verbosity = 0; }, "only print data");
  cmd->add_flag_function(
      "--verbose,-v", [&c](std::int64_t n) { c.verbosity = 1 + static_cast<int>(n); }, "more diagnostics");
}

ex::ScenarioConfig resolve(const Common& c) {
  std::optional<std::filesystem::path> file;
  if (!c.config.empty()) file = c.config;
  ex::ScenarioConfig cfg = ex::resolve_config(c.scenario, file, c.overrides);
  if (!c.out_dir.empty()) cfg.output_dir = c.out_dir;
  return cfg;
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

json summary_json(const ex::ScenarioResult& r, const std::vector<std::filesystem::path>& files) {
  json j;
  j["scenario"] = r.id;
  json fs = json::array();
  for (const auto& f : files) fs.push_back(f.string());
  j["files"] = fs;
  json fits = json::object();
  for (const auto& [k, f] : r.fits) fits[k] = fit_json(f);
  j["fits"] = fits;
  json metrics = json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = v;
  j["metrics"] = metrics;
  j["warnings"] = r.warnings;
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

int report(const ex::ScenarioResult& r, const ex::ScenarioConfig& cfg, const Common& c, std::ostream& out,
           std::ostream& err) {
  const auto files = ex::write_outputs(cfg, r);
  if (c.verbosity > 0) {
    for (const auto& w : r.warnings) err << "warning: " << w << '\n';
    if (c.verbosity > 1) {
      for (const auto& n : r.notes) err << "note: " << n << '\n';
    }
  }
  out << summary_json(r, files).dump(2) << '\n';
  if (!r.sweep.empty() &&
      std::all_of(r.sweep.begin(), r.sweep.end(), [](const ex::SweepRow& row) { return !row.error.empty(); })) {
    err << "error: every sweep point failed\n";
    return kExitFailure;
  }
  return kExitOk;
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw ConfigError("sweep value '" + cell + "' is not a number");
    }
  }
  if (out.empty()) throw ConfigError("--values is empty");
  return out;
}

FitWindow parse_window(const std::string& spec, FitForm form) {
  if (spec.empty()) return default_window(form);
  if (spec == "all") return FitWindow::all();
  const auto colon = spec.find(':');
  const auto comma = spec.find(',');
  if (colon == std::string::npos || comma == std::string::npos || comma < colon) {
    throw ConfigError("window must be all, band:lo,hi or time:lo,hi");
  }
  const std::string kind = spec.substr(0, colon);
  double lo = 0.0;
  double hi = 0.0;
  try {
    lo = std::stod(spec.substr(colon + 1, comma - colon - 1));
    hi = std::stod(spec.substr(comma + 1));
  } catch (const std::exception&) {
    throw ConfigError("window bounds in '" + spec + "' are not numbers");
  }
  if (kind == "band") return FitWindow::value_band(lo, hi);
  if (kind == "time") return FitWindow::time_range(lo, hi);
  throw ConfigError("window kind '" + kind + "' (expected band or time)");
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"aqec: autonomous bit-flip code simulator"};
  app.name("aqec");
  app.require_subcommand(1, 1);

  Common run_opts;
  auto* run = app.add_subcommand("run", "run one scenario and write its CSV and metadata");
  run->add_option("--scenario", run_opts.scenario, "scenario id (see list)")->required();
  std::string method;
  run->add_option("--method", method, "integration method: auto, expm or rk4");
  add_common(run, run_opts, true);

  Common sweep_opts;
  std::string field = "omega_p";
  std::string values;
  auto* sw = app.add_subcommand("sweep", "run a scenario over a grid of one field");
  sw->add_option("--scenario", sweep_opts.scenario, "scenario id")->required();
  sw->add_option("--field", field, "field to vary (dotted key)");
  sw->add_option("--values", values, "comma-separated grid")->required();
  add_common(sw, sweep_opts, true);

  std::string csv;
  std::string column = "fidelity_compensated";
  std::string form = "rise";
  std::string window;
  auto* fit = app.add_subcommand("fit", "fit an exponential to one CSV column");
  fit->add_option("--csv", csv, "curve CSV")->required()->check(CLI::ExistingFile);
  fit->add_option("--column", column, "column to fit");
  fit->add_option("--form", form, "rise, decay or slowest_mode");
  fit->add_option("--window", window, "all, band:lo,hi or time:lo,hi (default per form)");

  Common validate_opts;
  auto* validate = app.add_subcommand("validate", "print the parameter validity report");
  validate->add_option("--scenario", validate_opts.scenario, "scenario whose parameters to check");
  add_common(validate, validate_opts, false);

  auto* list = app.add_subcommand("list", "list the registered scenarios");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*run) {
      if (!method.empty()) run_opts.overrides.push_back("method=" + method);
      const auto cfg = resolve(run_opts);
      if (run_opts.verbosity > 1) err << "running " << cfg.id << '\n';
      return report(ex::run_scenario(cfg), cfg, run_opts, out, err);
    }
    if (*sw) {
      const auto cfg = resolve(sweep_opts);
      return report(ex::sweep(cfg, {field, parse_values(values)}), cfg, sweep_opts, out, err);
    }
    if (*fit) {
      const FitForm f = fit_form_from_string(form);
      const auto t = ex::read_csv_column(csv, "t");
      const auto y = ex::read_csv_column(csv, column);
      out << fit_json(fit_rate(t, y, f, parse_window(window, f))).dump(2) << '\n';
      return kExitOk;
    }
    if (*validate) {
      const auto cfg = resolve(validate_opts);
      const auto rep = models::validate_params(cfg.params);
      out << ex::validity_to_json(rep) << '\n';
      if (validate_opts.verbosity > 0) {
        for (const auto& w : rep.warnings) err << "warning: " << w << '\n';
      }
      return kExitOk;
    }
    if (*list) {
      for (const auto& info : ex::scenario_registry()) {
        out << info.id << '\t' << (info.figure.empty() ? "-" : "fig. " + info.figure) << '\t' << info.summary
            << '\n';
      }
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IntegrationFailure& e) {
    err << "integration failure: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace aqec::cli
