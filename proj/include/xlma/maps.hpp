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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "xlma/channel.hpp"
#include "xlma/scenario.hpp"

namespace xlma {

enum class MapKind { power, correlation };

/// Map over a plane of the coverage cuboid. "xy" spans x and y at height
/// `fixed` (default: coverage z_min); "yz" spans y and z at depth `fixed`
/// (default: coverage x_min). Axes are sampled with `resolution` evenly
/// spaced points including both ends.
struct MapRequest {
  MapKind kind = MapKind::power;
  ArrayLayout layout;
  std::string plane = "xy";
  std::optional<double> fixed;
  int resolution = 51;
  Vec3 probe = Vec3::Zero();
  /// Stand-in gain for blocked LoS paths, rendering only.
  double blocked_placeholder_gain = 3.1622776601683795e-10;

  void validate(const CoverageSpec& cov) const;
};

struct MapGrid {
  std::string row_axis, col_axis;
  std::vector<double> rows, cols;
  std::vector<double> values;  // row-major
  /// Lattice point the probe snapped to (correlation maps).
  Vec3 probe = Vec3::Zero();

  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols.size() + c]; }
  /// First line "row\col" then the column coordinates; each further line
  /// starts with its row coordinate.
  void write_csv(std::ostream& os) const;
};

/// sum_n M_n (xi_n(p) beta_LoS or the placeholder when blocked, plus
/// beta_NLoS), linear.
MapGrid power_gain_map(const MapRequest& request, const ScenarioConfig& scenario);

/// |h(p)^H h(p0)|^2 of unit-normalized LoS channel vectors, each subarray
/// block carrying the propagation phase exp(-j 2 pi d / lambda).
MapGrid correlation_map(const MapRequest& request, const ScenarioConfig& scenario);

/// Deterministic LoS stacked channel at point p (zero blocks where blocked).
Eigen::VectorXcd los_channel(const ArrayLayout& layout, const Vec3& p, const ScenarioConfig& scenario);

}  // namespace xlma
