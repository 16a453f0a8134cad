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
#include <optional>
#include <span>
#include <vector>

#include "xlma/channel.hpp"
#include "xlma/rate.hpp"
#include "xlma/scenario.hpp"

namespace xlma {

/// A validated scenario with its derived geometry and tables. Gain tables
/// keep one row per grid with rho > 0 ("active" rows); every other grid
/// contributes nothing to rates, interference or simulations.
class ScenarioModel {
 public:
  explicit ScenarioModel(ScenarioConfig config, unsigned threads = 0);

  const ScenarioConfig& config() const { return config_; }
  unsigned threads() const { return threads_; }
  const std::vector<Vec3>& candidates() const { return candidates_; }
  const std::vector<Vec3>& grids() const { return grids_; }
  const GridSamples& samples() const { return samples_; }

  /// Global grid index of each active row.
  const std::vector<int>& active_grids() const { return active_; }
  std::span<const double> active_rho() const { return rho_; }
  std::span<const double> active_snr() const { return snr_; }

  /// Active rows x candidate positions.
  const GainTables& candidate_gains() const { return candidate_gains_; }
  const RateModel& candidate_model() const { return *candidate_model_; }

  /// Active rows x layout subarrays, visibility recomputed at each center
  /// with the scenario's grid samples.
  std::vector<std::uint8_t> layout_visibility(const ArrayLayout& layout) const;
  GainTables layout_gains(const ArrayLayout& layout) const;
  /// Rate model whose sites are the layout's subarrays. Requires a uniform
  /// subarray geometry.
  RateModel layout_model(const ArrayLayout& layout, const GainTables& gains) const;

  ArrayLayout placement_layout(std::span<const int> n_mu) const;

 private:
  ScenarioConfig config_;
  unsigned threads_;
  std::vector<Vec3> candidates_;
  std::vector<Vec3> grids_;
  GridSamples samples_;
  std::vector<int> active_;
  std::vector<Vec3> active_positions_;
  std::vector<double> rho_, snr_;
  GainTables candidate_gains_;
  std::optional<RateModel> candidate_model_;
};

}  // namespace xlma
