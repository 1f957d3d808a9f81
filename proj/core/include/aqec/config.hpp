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
#include <vector>

#include "aqec/experiments.hpp"
#include "aqec/models.hpp"

namespace aqec::experiments {

/// Built-in configuration of a registered scenario. Throws ConfigError for an unknown id.
ScenarioConfig default_config(const std::string& id);

/**
 * Resolve a configuration: scenario defaults, then the JSON file (if any),
 * then each "key=value" override in order. The scenario id comes from
 * `scenario` when non-empty, otherwise from the file's "scenario" key,
 * otherwise "custom".
 */
ScenarioConfig resolve_config(const std::string& scenario, const std::optional<std::filesystem::path>& file,
                              const std::vector<std::string>& overrides);

/**
 * Apply one override. `key` is a dotted path into the JSON form of the
 * config; bare parameter names (kappa, omega_p, chi_ab, ...) address
 * params.<name>. `value` is parsed as JSON and kept as a string when it does
 * not parse. Scalars broadcast over per-channel triples. Setting omega_p on a
 * sweep scenario replaces its grid with that single value.
 */
void set_config_value(ScenarioConfig& cfg, const std::string& key, const std::string& value);

std::string config_to_json(const ScenarioConfig& cfg);
ScenarioConfig config_from_json(const std::string& text);

std::string params_to_json(const models::SystemParams& p);
models::SystemParams params_from_json(const std::string& text);

std::string validity_to_json(const models::ValidityReport& r);

}  // namespace aqec::experiments
