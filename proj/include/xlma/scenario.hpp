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
#include <limits>
#include <span>
#include <vector>

#include "xlma/common.hpp"
#include "xlma/geometry.hpp"

namespace xlma {

/// Rectangular placement region in the x = 0 plane, sampled into
/// n_y * n_z candidate subarray centers. An axis may be degenerate
/// (min == max with a count of 1).
struct MaRegionSpec {
  double y_min = 0.0, y_max = 0.0;
  double z_min = 0.0, z_max = 0.0;
  int n_y = 1, n_z = 1;

  void validate() const;
  int count() const { return n_y * n_z; }
  double step_y() const { return (y_max - y_min) / n_y; }
  double step_z() const { return (z_max - z_min) / n_z; }
};

/// Cuboid coverage region split into k_x * k_y * k_z user grids.
struct CoverageSpec {
  double x_min = 1.0, x_max = 1.0;
  double y_min = 0.0, y_max = 0.0;
  double z_min = 0.0, z_max = 0.0;
  int k_x = 1, k_y = 1, k_z = 1;

  void validate() const;
  int count() const { return k_x * k_y * k_z; }
  Vec3 step() const {
    return {(x_max - x_min) / k_x, (y_max - y_min) / k_y, (z_max - z_min) / k_z};
  }
};

using Obstacle = Box;

/// 0-based (n_y, n_z) position of a candidate.
struct CandidateIndex {
  int y = 0, z = 0;
  friend bool operator==(const CandidateIndex&, const CandidateIndex&) = default;
};

/// 0-based (k_x, k_y, k_z) position of a user grid.
struct GridIndex {
  int x = 0, y = 0, z = 0;
  friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

// Candidates are row-major over y: n = n_y + n_z * N_y.
int candidate_linear_index(const MaRegionSpec& ma, CandidateIndex idx);
CandidateIndex candidate_grid_index(const MaRegionSpec& ma, int n);

// Grids: k = k_x + k_y * K_x + k_z * K_x * K_y.
int grid_linear_index(const CoverageSpec& cov, GridIndex idx);
GridIndex grid_3d_index(const CoverageSpec& cov, int k);

std::vector<Vec3> build_candidate_grid(const MaRegionSpec& ma);
std::vector<Vec3> build_user_grid(const CoverageSpec& cov);

/// Activation probabilities for regular (K0), hotspot (K1) and dense
/// hotspot (K2) grids. All sets are 0-based and must partition [0, K).
struct ProbabilityLevels {
  double regular = 0.0;  // rho_0
  double hotspot = 0.0;  // rho_1
  double dense = 0.0;    // rho_2
};

ProbabilityLevels probability_levels(double expected_users, double regular_ratio, int n_regular,
                                     int n_hotspot, int n_dense);

/// Per-grid probability vector. K0 is the complement of K1 and K2. Throws
/// ConfigError when a level leaves [0, 1] or the mass cannot be placed.
std::vector<double> assign_probabilities(int num_grids, double expected_users, double regular_ratio,
                                         std::span<const int> hotspot, std::span<const int> dense);

struct UserDistribution {
  std::vector<double> rho;
  std::vector<int> hotspot;  // K1
  std::vector<int> dense;    // K2
  double regular_ratio = 0.0;
  double expected_users = 0.0;
};

/// Rician factor as a linear ratio; infinity is the pure-LoS mode.
struct RicianFactor {
  double linear = std::numeric_limits<double>::infinity();

  bool pure_los() const { return std::isinf(linear); }
  static RicianFactor pure() { return {}; }
  static RicianFactor from_db(double db) { return {db_to_linear(db)}; }
};

struct SubarrayGeometry {
  int m_h = 1, m_v = 1;
  double d_h = 0.0, d_v = 0.0;

  int size() const { return m_h * m_v; }
  friend bool operator==(const SubarrayGeometry&, const SubarrayGeometry&) = default;
};

struct ScenarioConfig {
  double carrier_freq = 30e9;
  double wavelength = kSpeedOfLight / 30e9;
  SubarrayGeometry subarray{8, 1, kSpeedOfLight / 30e9 / 2, kSpeedOfLight / 30e9 / 2};
  int num_subarrays = 8;
  std::vector<double> tx_power_mw;  // per grid, linear
  double noise_power_mw = 1e-8;
  RicianFactor rician;
  std::uint64_t rng_seed = 1;
  MaRegionSpec ma_region;
  CoverageSpec coverage;
  std::vector<Obstacle> obstacles;
  UserDistribution distribution;
  int visibility_samples = 20;

  void validate() const;
  int num_candidates() const { return ma_region.count(); }
  int num_grids() const { return coverage.count(); }
  double snr(int k) const { return tx_power_mw[k] / noise_power_mw; }
};

/// Uniform random points inside each user grid, drawn from a per-grid
/// stream so the set for grid k is fixed by (seed, k) alone.
class GridSamples {
 public:
  GridSamples() = default;
  GridSamples(const CoverageSpec& cov, int samples_per_grid, std::uint64_t seed);

  int num_grids() const { return num_grids_; }
  int samples_per_grid() const { return per_grid_; }
  std::span<const Vec3> points(int k) const {
    return {points_.data() + static_cast<std::size_t>(k) * per_grid_, static_cast<std::size_t>(per_grid_)};
  }

  /// True when every sampled segment from `site` into grid k misses all obstacles.
  bool visible(int k, const Vec3& site, std::span<const Obstacle> obstacles) const;

 private:
  int num_grids_ = 0;
  int per_grid_ = 0;
  std::vector<Vec3> points_;
};

/// Binary table xi[k * N0 + n]: 1 when grid k sees candidate n.
std::vector<std::uint8_t> compute_los_visibility(std::span<const Vec3> candidates, const CoverageSpec& cov,
                                                 std::span<const Obstacle> obstacles, int samples_per_grid,
                                                 std::uint64_t seed, unsigned threads = 0);

}  // namespace xlma
