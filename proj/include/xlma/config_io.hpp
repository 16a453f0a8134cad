// SPDX-License-Identifier: Apache-2.0
//
// xlma: placement optimization and simulation for movable-subarray uplinks
// Copyright (C) 2026 The xlma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"

#include "xlma/scenario.hpp"

namespace xlma {

struct RunSettings {
  int trials = 1000;
  std::uint64_t sim_seed = 1;
  std::uint64_t exhaustive_limit = 10'000'000;
};

struct LoadedConfig {
  ScenarioConfig scenario;
  RunSettings run;
  /// rho came verbatim from the file rather than from the hotspot sets.
  bool explicit_rho = false;
};

/// Reads a scenario document. Powers are in dBm, the Rician factor in dB or
/// the string "infinite", all grid and candidate indices 0-based. Throws
/// ConfigError naming the offending field.
LoadedConfig parse_config(const nlohmann::json& doc);
LoadedConfig load_config(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Recomputes rho from the distribution's sets, K-bar and zeta.
void reassign_probabilities(ScenarioConfig& scenario);

}  // namespace xlma
