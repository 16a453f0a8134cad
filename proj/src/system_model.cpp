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

#include "xlma/system_model.hpp"

#include "xlma/parallel.hpp"

namespace xlma {

ScenarioModel::ScenarioModel(ScenarioConfig config, unsigned threads)
    : config_(std::move(config)), threads_(resolve_threads(threads)) {
  config_.validate();
  candidates_ = build_candidate_grid(config_.ma_region);
  grids_ = build_user_grid(config_.coverage);
  samples_ = GridSamples(config_.coverage, config_.visibility_samples, config_.rng_seed);
  for (int k = 0; k < config_.num_grids(); ++k) {
    if (!(config_.distribution.rho[k] > 0.0)) continue;
    active_.push_back(k);
    active_positions_.push_back(grids_[k]);
    rho_.push_back(config_.distribution.rho[k]);
    snr_.push_back(config_.snr(k));
  }
  ArrayLayout sites;
  for (const Vec3& c : candidates_) sites.elements.push_back({c, config_.subarray});
  candidate_gains_ = layout_gains(sites);
  candidate_model_.emplace(candidate_gains_, config_.subarray, config_.wavelength, snr_, rho_, threads_);
}

std::vector<std::uint8_t> ScenarioModel::layout_visibility(const ArrayLayout& layout) const {
  const std::size_t sites = layout.elements.size();
  std::vector<std::uint8_t> xi(active_.size() * sites, 1);
  if (config_.obstacles.empty()) return xi;
  parallel_for(active_.size(), threads_, [&](std::size_t row) {
    for (std::size_t s = 0; s < sites; ++s) {
      xi[row * sites + s] = samples_.visible(active_[row], layout.elements[s].center, config_.obstacles) ? 1 : 0;
    }
  });
  return xi;
}

GainTables ScenarioModel::layout_gains(const ArrayLayout& layout) const {
  const std::vector<Vec3> centers = layout.centers();
  const std::vector<std::uint8_t> xi = layout_visibility(layout);
  return build_gain_tables(config_, centers, active_positions_, active_, xi);
}

RateModel ScenarioModel::layout_model(const ArrayLayout& layout, const GainTables& gains) const {
  if (layout.elements.empty()) throw DomainError("layout has no subarrays");
  if (!layout.has_uniform_geometry()) throw DomainError("closed-form rates need identical subarrays");
  return RateModel(gains, layout.elements.front().geometry, config_.wavelength, snr_, rho_, threads_);
}

ArrayLayout ScenarioModel::placement_layout(std::span<const int> n_mu) const {
  return ArrayLayout::from_candidates(n_mu, candidates_, config_.subarray);
}

}  // namespace xlma
