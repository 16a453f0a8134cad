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

#include "xlma/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "xlma/parallel.hpp"
#include "xlma/rng.hpp"

namespace xlma {
namespace {

void check_axis(const char* name, double lo, double hi, int count) {
  const std::string n(name);
  if (count < 1) throw ConfigError(n + " count must be positive");
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ConfigError(n + " bounds must be finite");
  if (lo > hi) throw ConfigError(n + " bounds are reversed (min > max)");
  if (lo == hi && count != 1) throw ConfigError(n + " axis is degenerate but count is not 1");
}

}  // namespace

void MaRegionSpec::validate() const {
  check_axis("ma_region.y", y_min, y_max, n_y);
  check_axis("ma_region.z", z_min, z_max, n_z);
}

void CoverageSpec::validate() const {
  check_axis("coverage.x", x_min, x_max, k_x);
  check_axis("coverage.y", y_min, y_max, k_y);
  check_axis("coverage.z", z_min, z_max, k_z);
  if (x_min <= 0.0) throw ConfigError("coverage.x_min must be positive (users in front of the array)");
}

int candidate_linear_index(const MaRegionSpec& ma, CandidateIndex idx) {
  return idx.y + idx.z * ma.n_y;
}

CandidateIndex candidate_grid_index(const MaRegionSpec& ma, int n) {
  return {n % ma.n_y, n / ma.n_y};
}

int grid_linear_index(const CoverageSpec& cov, GridIndex idx) {
  return idx.x + idx.y * cov.k_x + idx.z * cov.k_x * cov.k_y;
}

GridIndex grid_3d_index(const CoverageSpec& cov, int k) {
  const int plane = cov.k_x * cov.k_y;
  return {k % cov.k_x, (k % plane) / cov.k_x, k / plane};
}

std::vector<Vec3> build_candidate_grid(const MaRegionSpec& ma) {
  ma.validate();
  const double dy = ma.step_y();
  const double dz = ma.step_z();
  std::vector<Vec3> out(static_cast<std::size_t>(ma.count()));
  for (int iz = 0; iz < ma.n_z; ++iz) {
    for (int iy = 0; iy < ma.n_y; ++iy) {
      out[candidate_linear_index(ma, {iy, iz})] =
          Vec3(0.0, ma.y_min + (iy + 0.5) * dy, ma.z_min + (iz + 0.5) * dz);
    }
  }
  return out;
}

std::vector<Vec3> build_user_grid(const CoverageSpec& cov) {
  cov.validate();
  const Vec3 step = cov.step();
  std::vector<Vec3> out(static_cast<std::size_t>(cov.count()));
  for (int k = 0; k < cov.count(); ++k) {
    const GridIndex g = grid_3d_index(cov, k);
    out[k] = Vec3(cov.x_min + (g.x + 0.5) * step.x(), cov.y_min + (g.y + 0.5) * step.y(),
                  cov.z_min + (g.z + 0.5) * step.z());
  }
  return out;
}

ProbabilityLevels probability_levels(double expected_users, double regular_ratio, int n_regular,
                                     int n_hotspot, int n_dense) {
  ProbabilityLevels p;
  const double hot_mass = expected_users * (1.0 - regular_ratio);
  const double weight = 2.0 * n_hotspot + 3.0 * n_dense;
  if (n_dense > 0) p.dense = std::min(1.0, 3.0 * hot_mass / weight);
  if (n_hotspot > 0) {
    p.hotspot = std::max(2.0 * hot_mass / weight, (hot_mass - n_dense) / n_hotspot);
  }
  if (n_regular > 0) p.regular = expected_users * regular_ratio / n_regular;
  return p;
}

std::vector<double> assign_probabilities(int num_grids, double expected_users, double regular_ratio,
                                         std::span<const int> hotspot, std::span<const int> dense) {
  if (num_grids < 1) throw ConfigError("distribution needs at least one grid");
  if (!(regular_ratio >= 0.0 && regular_ratio <= 1.0)) throw ConfigError("regular_ratio must lie in [0, 1]");
  if (!(expected_users >= 0.0) || expected_users > num_grids) {
    throw ConfigError("expected_users must lie in [0, K]");
  }

  // 0 = regular, 1 = hotspot, 2 = dense hotspot
  std::vector<int> kind(static_cast<std::size_t>(num_grids), 0);
  auto mark = [&](std::span<const int> set, int tag, const char* name) {
    for (int k : set) {
      if (k < 0 || k >= num_grids) throw ConfigError(std::string(name) + " index out of range");
      if (kind[k] != 0) throw ConfigError(std::string(name) + " overlaps another hotspot set or repeats an index");
      kind[k] = tag;
    }
  };
  mark(hotspot, 1, "hotspot");
  mark(dense, 2, "dense");

  const int n_hot = static_cast<int>(hotspot.size());
  const int n_dense = static_cast<int>(dense.size());
  const int n_regular = num_grids - n_hot - n_dense;
  const ProbabilityLevels p = probability_levels(expected_users, regular_ratio, n_regular, n_hot, n_dense);
  if (p.regular > 1.0) throw ConfigError("expected_users too large for the regular grids (rho_0 > 1)");
  if (p.hotspot > 1.0) throw ConfigError("expected_users too large for the hotspot grids (rho_1 > 1)");

  std::vector<double> rho(static_cast<std::size_t>(num_grids));
  for (int k = 0; k < num_grids; ++k) {
    rho[k] = kind[k] == 0 ? p.regular : (kind[k] == 1 ? p.hotspot : p.dense);
  }
  const double total = std::accumulate(rho.begin(), rho.end(), 0.0);
  if (std::abs(total - expected_users) > 1e-9) {
    throw ConfigError("activation probabilities sum to " + std::to_string(total) + " instead of expected_users " +
                      std::to_string(expected_users) + " (a clamp is active or a set is empty)");
  }
  return rho;
}

void ScenarioConfig::validate() const {
  ma_region.validate();
  coverage.validate();
  if (!(carrier_freq > 0.0)) throw ConfigError("carrier_freq must be positive");
  if (!(wavelength > 0.0)) throw ConfigError("wavelength must be positive");
  if (subarray.m_h < 1 || subarray.m_v < 1) throw ConfigError("M_H and M_V must be positive");
  if ((subarray.m_h > 1 && !(subarray.d_h > 0.0)) || (subarray.m_v > 1 && !(subarray.d_v > 0.0))) {
    throw ConfigError("antenna spacing must be positive");
  }
  if (num_subarrays < 1) throw ConfigError("num_subarrays (N) must be positive");
  if (num_subarrays > num_candidates()) {
    throw ConfigError("num_subarrays (N = " + std::to_string(num_subarrays) + ") exceeds the number of candidate positions N0 (" +
                      std::to_string(num_candidates()) + ")");
  }
  if (ma_region.n_y > 1 && !(ma_region.step_y() > (subarray.m_h - 1) * subarray.d_h)) {
    throw ConfigError("ma_region y spacing does not exceed the subarray width");
  }
  if (ma_region.n_z > 1 && !(ma_region.step_z() > (subarray.m_v - 1) * subarray.d_v)) {
    throw ConfigError("ma_region z spacing does not exceed the subarray height");
  }
  if (static_cast<int>(tx_power_mw.size()) != num_grids()) throw ConfigError("tx power must be given per grid");
  for (double p : tx_power_mw) {
    if (!(p > 0.0)) throw ConfigError("tx power must be positive");
  }
  if (!(noise_power_mw > 0.0)) throw ConfigError("noise power must be positive");
  if (!(rician.linear > 0.0)) throw ConfigError("rician factor must be positive or infinite");
  if (visibility_samples < 1) throw ConfigError("visibility_samples must be at least 1");
  for (const Obstacle& o : obstacles) {
    if (!(o.dims.minCoeff() > 0.0)) throw ConfigError("obstacle dims must be strictly positive");
  }
  if (static_cast<int>(distribution.rho.size()) != num_grids()) {
    throw ConfigError("distribution.rho must have one entry per grid");
  }
  for (double r : distribution.rho) {
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("activation probabilities must lie in [0, 1]");
  }
}

GridSamples::GridSamples(const CoverageSpec& cov, int samples_per_grid, std::uint64_t seed)
    : num_grids_(cov.count()), per_grid_(samples_per_grid) {
  if (samples_per_grid < 1) throw ConfigError("samples_per_grid must be at least 1");
  const std::vector<Vec3> centers = build_user_grid(cov);
  const Vec3 half = 0.5 * cov.step();
  points_.resize(static_cast<std::size_t>(num_grids_) * per_grid_);
  for (int k = 0; k < num_grids_; ++k) {
    RngStream rng(seed, "visibility", static_cast<std::uint64_t>(k));
    for (int s = 0; s < per_grid_; ++s) {
      Vec3 p;
      for (int axis = 0; axis < 3; ++axis) {
        p[axis] = rng.uniform(centers[k][axis] - half[axis], centers[k][axis] + half[axis]);
      }
      points_[static_cast<std::size_t>(k) * per_grid_ + s] = p;
    }
  }
}

bool GridSamples::visible(int k, const Vec3& site, std::span<const Obstacle> obstacles) const {
  for (const Obstacle& box : obstacles) {
    for (const Vec3& p : points(k)) {
      if (segment_intersects_box(site, p, box)) return false;
    }
  }
  return true;
}

std::vector<std::uint8_t> compute_los_visibility(std::span<const Vec3> candidates, const CoverageSpec& cov,
                                                 std::span<const Obstacle> obstacles, int samples_per_grid,
                                                 std::uint64_t seed, unsigned threads) {
  const GridSamples samples(cov, samples_per_grid, seed);
  const std::size_t n0 = candidates.size();
  std::vector<std::uint8_t> xi(static_cast<std::size_t>(samples.num_grids()) * n0, 1);
  if (obstacles.empty()) return xi;
  parallel_for(static_cast<std::size_t>(samples.num_grids()), threads, [&](std::size_t k) {
    for (std::size_t n = 0; n < n0; ++n) {
      xi[k * n0 + n] = samples.visible(static_cast<int>(k), candidates[n], obstacles) ? 1 : 0;
    }
  });
  return xi;
}

}  // namespace xlma
