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

#include <string>
#include <vector>

#include "xlma/channel.hpp"
#include "xlma/config_io.hpp"
#include "xlma/rate.hpp"
#include "xlma/scenario.hpp"

namespace xlma::testing {

inline LoadedConfig preset(const std::string& name) {
  return load_config(std::string(XLMA_PRESET_DIR) + "/" + name + ".json");
}

// Eight candidates on a line, four grids, 2x2 subarrays, kappa 10 dB.
// Mirrors tests/oracles/rate_oracle.py.
inline ScenarioConfig oracle_scenario() {
  ScenarioConfig sc;
  sc.carrier_freq = 30e9;
  sc.wavelength = kSpeedOfLight / sc.carrier_freq;
  sc.subarray = {2, 2, sc.wavelength / 2, sc.wavelength / 2};
  sc.num_subarrays = 3;
  sc.ma_region = {-4, 4, 10, 10, 8, 1};
  sc.coverage = {5, 15, -6, 6, 0, 0, 2, 2, 1};
  sc.tx_power_mw.assign(4, dbm_to_mw(10));
  sc.noise_power_mw = dbm_to_mw(-80);
  sc.rician = RicianFactor::from_db(10);
  sc.distribution.rho = {0.3, 0.8, 0.5, 1.0};
  sc.distribution.expected_users = 2.6;
  return sc;
}

inline std::vector<std::uint8_t> oracle_xi() {
  std::vector<std::uint8_t> xi;
  for (int k = 0; k < 4; ++k) {
    for (int n = 0; n < 8; ++n) xi.push_back((k + n) % 3 == 0 ? 0 : 1);
  }
  return xi;
}

inline GainTables oracle_gains(const ScenarioConfig& sc) {
  const auto cands = build_candidate_grid(sc.ma_region);
  const auto grids = build_user_grid(sc.coverage);
  const std::vector<int> ids = {0, 1, 2, 3};
  return build_gain_tables(sc, cands, grids, ids, oracle_xi());
}

inline std::vector<double> snr_vector(const ScenarioConfig& sc) {
  std::vector<double> out;
  for (int k = 0; k < sc.num_grids(); ++k) out.push_back(sc.snr(k));
  return out;
}

inline RateModel oracle_model(const ScenarioConfig& sc, const GainTables& gains) {
  return RateModel(gains, sc.subarray, sc.wavelength, snr_vector(sc), sc.distribution.rho, 1);
}

}  // namespace xlma::testing

#include <random>

#include "xlma/system_model.hpp"

namespace xlma::testing {

// Small random scenario: N0 candidates on a line, up to max_grids grids with
// random probabilities, an optional random obstacle and a random Rician factor.
inline ScenarioConfig random_scenario(std::uint64_t seed, int n0, int n, int max_grids) {
  std::mt19937_64 eng(seed);
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng); };
  ScenarioConfig sc;
  sc.wavelength = kSpeedOfLight / sc.carrier_freq;
  const int mh = std::uniform_int_distribution<int>(1, 3)(eng) * 2;
  sc.subarray = {mh, 1, sc.wavelength / 2, sc.wavelength / 2};
  sc.num_subarrays = n;
  const double half = 0.5 * n0;
  sc.ma_region = {-half, half, 15, 15, n0, 1};
  int kx = 1, ky = 1;
  do {
    kx = std::uniform_int_distribution<int>(1, 4)(eng);
    ky = std::uniform_int_distribution<int>(1, 5)(eng);
  } while (kx * ky > max_grids || kx * ky < 2);
  sc.coverage = {5, 5 + 6.0 * kx, -3.0 * ky, 3.0 * ky, 0, 0, kx, ky, 1};
  const int k = kx * ky;
  sc.tx_power_mw.assign(k, dbm_to_mw(uni(0, 10)));
  sc.noise_power_mw = dbm_to_mw(-80);
  const int kappa = std::uniform_int_distribution<int>(0, 3)(eng);
  sc.rician = kappa == 0 ? RicianFactor::pure() : RicianFactor::from_db(5.0 * kappa);
  if (std::bernoulli_distribution(0.5)(eng)) {
    sc.obstacles.push_back({Vec3(3, uni(-half, half), 6), Vec3(2, uni(2, 6), 12)});
  }
  sc.distribution.rho.resize(k);
  double total = 0.0;
  for (double& r : sc.distribution.rho) {
    r = std::bernoulli_distribution(0.2)(eng) ? 1.0 : uni(0.05, 0.95);
    total += r;
  }
  sc.distribution.expected_users = total;
  sc.rng_seed = seed;
  sc.validate();
  return sc;
}

}  // namespace xlma::testing
