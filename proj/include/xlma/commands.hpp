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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "xlma/config_io.hpp"
#include "xlma/maps.hpp"
#include "xlma/montecarlo.hpp"
#include "xlma/optimizer.hpp"
#include "xlma/system_model.hpp"

namespace xlma {

namespace fs = std::filesystem;

enum ExitCode { kExitOk = 0, kExitValidation = 1, kExitRuntime = 2 };

/// Placement artifact: N_mu, chi, Phi rows, objective, LP summary and trace.
nlohmann::json plan_document(const ScenarioModel& model, const PlacementResult& result);

/// A scheme resolved to a concrete layout, or the reason it was skipped.
struct SchemeLayout {
  std::string scheme;
  ArrayLayout layout;
  std::vector<int> sites;  // candidate indices for proposed / optimal / sparse kinds
  std::string skipped;
};

SchemeLayout resolve_scheme(const ScenarioModel& model, const std::string& scheme, std::uint64_t exhaustive_limit);

struct LayoutEvaluation {
  double approx_mrc = 0.0;
  double upper_bound = 0.0;
  SimEstimate sim_mrc;
  SimEstimate sim_mmse;
  double min_mmse_gap = 0.0;
};

/// Closed-form and (optionally) simulated weighted sum rates of a layout.
LayoutEvaluation evaluate_layout(const ScenarioModel& model, const ArrayLayout& layout, bool simulate_mrc,
                                 bool simulate_mmse, const RunSettings& run, unsigned threads);

struct SweepSpec {
  std::string parameter;  // m_h, ma_width, expected_users, rician_db, or empty for a single run
  std::vector<nlohmann::json> values;
  std::vector<std::string> schemes;
  std::vector<std::string> evaluators;
};

SweepSpec parse_sweep(const nlohmann::json& doc);
/// Applies one sweep value to a copy of the configuration.
LoadedConfig apply_sweep_value(const LoadedConfig& base, const std::string& parameter, const nlohmann::json& value);

struct SweepRow {
  std::string value;
  std::string scheme;
  std::string evaluator;
  std::optional<double> rate;
  std::optional<double> std_error;
  std::string status;  // "ok" or "skipped: <reason>"

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

std::vector<SweepRow> run_sweep(const LoadedConfig& base, const SweepSpec& spec, unsigned threads);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(std::istream& is);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Identity suite on the loaded scenario. `corrupt_kernels` perturbs the
/// explicit kernel tables so the moment checks must fail.
std::vector<CheckResult> run_validation(const LoadedConfig& config, unsigned threads, bool corrupt_kernels = false);

/// Power (dB) or correlation map described by a map spec: kind, layout (a
/// scheme name or candidate indices), plane, fixed, resolution, probe,
/// blocked_placeholder_dbm.
MapGrid render_map(const LoadedConfig& config, const nlohmann::json& spec, unsigned threads);

int cmd_plan(const fs::path& config, const fs::path& out, const std::optional<fs::path>& trace, unsigned threads,
             std::ostream& log);
int cmd_sweep(const fs::path& config, const fs::path& sweep, const fs::path& out_dir, unsigned threads,
              std::ostream& log);
int cmd_map(const fs::path& config, const fs::path& map_spec, const fs::path& out, unsigned threads,
            std::ostream& log);
int cmd_validate(const fs::path& config, bool corrupt_kernels, unsigned threads, std::ostream& out,
                 std::ostream& log);
int cmd_benchmark(const fs::path& config, const fs::path& out, bool simulate, unsigned threads, std::ostream& out_table,
                  std::ostream& log);

}  // namespace xlma
