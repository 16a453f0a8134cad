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

#include "xlma/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace xlma {
namespace {

// Formulas below are written 1-based and converted on return.
int round_index(double x) { return static_cast<int>(round_half_away(x)); }

void require_distinct(const std::vector<int>& idx, const std::string& what) {
  std::set<int> seen(idx.begin(), idx.end());
  if (seen.size() != idx.size()) throw ConfigError(what + " produces repeated positions for this scenario");
}

// Middle candidate of each axis; on a line this is candidate ceil(N0 / 2).
Vec3 dense_center(const MaRegionSpec& ma, std::span<const Vec3> candidates) {
  const int n = candidate_linear_index(ma, {(ma.n_y + 1) / 2 - 1, (ma.n_z + 1) / 2 - 1});
  if (n < 0 || n >= static_cast<int>(candidates.size())) throw ConfigError("candidate list does not match ma_region");
  return candidates[n];
}

}  // namespace

std::string_view to_string(BenchmarkKind kind) {
  switch (kind) {
    case BenchmarkKind::sparse_2x4: return "sparse_2x4";
    case BenchmarkKind::horizontal_sparse: return "horizontal_sparse";
    case BenchmarkKind::vertical_sparse: return "vertical_sparse";
    case BenchmarkKind::dense_ula: return "dense_ula";
    case BenchmarkKind::dense_upa: return "dense_upa";
  }
  return "unknown";
}

std::optional<BenchmarkKind> parse_benchmark(std::string_view name) {
  for (BenchmarkKind k : kAllBenchmarks) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::vector<int> sparse_indices(BenchmarkKind kind, const ScenarioConfig& sc) {
  const int n = sc.num_subarrays;
  const int ny = sc.ma_region.n_y;
  const int nz = sc.ma_region.n_z;
  std::vector<int> out;
  switch (kind) {
    case BenchmarkKind::horizontal_sparse: {
      if (n < 2) throw ConfigError("horizontal_sparse needs N >= 2");
      for (int s = 1; s <= n; ++s) out.push_back(round_index((ny - 1.0) / (n - 1) * (s - 1) + 1) - 1);
      require_distinct(out, "horizontal_sparse");
      break;
    }
    case BenchmarkKind::vertical_sparse: {
      if (n < 2) throw ConfigError("vertical_sparse needs N >= 2");
      const int column = (ny + 1) / 2;
      for (int s = 1; s <= n; ++s) {
        const int row = round_index((nz - 1.0) / (n - 1) * (s - 1) + 1);
        out.push_back((row - 1) * ny + column - 1);
      }
      require_distinct(out, "vertical_sparse");
      break;
    }
    case BenchmarkKind::sparse_2x4: {
      if (n != 8) throw ConfigError("sparse_2x4 needs N = 8");
      if (nz < 2 || ny < 4) throw ConfigError("sparse_2x4 needs at least 2 candidate rows and 4 columns");
      for (int row : {1, nz}) {
        for (int c = 0; c < 4; ++c) {
          const int col = round_index((ny - 1.0) / 3.0 * c + 1);
          out.push_back((row - 1) * ny + col - 1);
        }
      }
      require_distinct(out, "sparse_2x4");
      break;
    }
    default:
      throw ConfigError(std::string(to_string(kind)) + " is not a sparse layout");
  }
  return out;
}

ArrayLayout fpa_layout(BenchmarkKind kind, const ScenarioConfig& sc, std::span<const Vec3> candidates) {
  if (kind != BenchmarkKind::dense_ula && kind != BenchmarkKind::dense_upa) {
    return ArrayLayout::from_candidates(sparse_indices(kind, sc), candidates, sc.subarray);
  }
  const int n = sc.num_subarrays;
  const double half = sc.wavelength / 2.0;
  const Vec3 center = dense_center(sc.ma_region, candidates);
  ArrayLayout layout;
  if (kind == BenchmarkKind::dense_ula) {
    const SubarrayGeometry g{sc.subarray.m_h * sc.subarray.m_v, 1, half, half};
    const double width = g.m_h * half;
    for (int s = 0; s < n; ++s) {
      layout.elements.push_back({center + Vec3(0.0, (s - 0.5 * (n - 1)) * width, 0.0), g});
    }
    return layout;
  }
  if (n % 2 != 0) throw ConfigError("dense_upa needs an even N");
  const int cols = n / 2;
  const SubarrayGeometry g{sc.subarray.m_h, sc.subarray.m_v, half, half};
  for (int row = 0; row < 2; ++row) {
    for (int col = 0; col < cols; ++col) {
      const double dy = (col - 0.5 * (cols - 1)) * g.m_h * half;
      const double dz = (row - 0.5) * g.m_v * half;
      layout.elements.push_back({center + Vec3(0.0, dy, dz), g});
    }
  }
  return layout;
}

std::string benchmark_unavailable(BenchmarkKind kind, const ScenarioConfig& sc) {
  try {
    if (kind == BenchmarkKind::dense_ula) return {};
    if (kind == BenchmarkKind::dense_upa) {
      return sc.num_subarrays % 2 == 0 ? std::string{} : std::string("dense_upa needs an even N");
    }
    sparse_indices(kind, sc);
    return {};
  } catch (const ConfigError& e) {
    return e.what();
  }
}

std::vector<int> hotspot_type(int type_id, const CoverageSpec& cov) {
  std::vector<GridIndex> cells;  // 1-based
  const int ky = cov.k_y;
  const int kz = cov.k_z;
  switch (type_id) {
    case 1:
      for (int k = 1; k <= 12; ++k) cells.push_back({1, round_index((ky - 1.0) / 11.0 * (k - 1) + 1), 1});
      break;
    case 2:
      for (int k = 1; k <= 12; ++k) {
        const int y = (ky + 1) / 2 + (k <= 6 ? -4 : 4);
        cells.push_back({1, y, round_index(1.0 + ((k - 1) % 6) * (kz - 1.0) / 5.0)});
      }
      break;
    case 3:
      for (int z : {kz - 2, kz}) {
        for (int y : {2, 3, 4, ky - 3, ky - 2, ky - 1}) cells.push_back({2, y, z});
      }
      break;
    default:
      throw ConfigError("hotspot_type must be 1, 2 or 3");
  }
  std::vector<int> out;
  for (const GridIndex& c : cells) {
    if (c.x < 1 || c.x > cov.k_x || c.y < 1 || c.y > cov.k_y || c.z < 1 || c.z > cov.k_z) {
      throw ConfigError("hotspot type " + std::to_string(type_id) + " does not fit the coverage grid");
    }
    out.push_back(grid_linear_index(cov, {c.x - 1, c.y - 1, c.z - 1}));
  }
  require_distinct(out, "hotspot type " + std::to_string(type_id));
  return out;
}

}  // namespace xlma
