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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xlma/channel.hpp"
#include "xlma/scenario.hpp"

namespace xlma {

enum class BenchmarkKind { sparse_2x4, horizontal_sparse, vertical_sparse, dense_ula, dense_upa };

inline constexpr std::array<BenchmarkKind, 5> kAllBenchmarks = {
    BenchmarkKind::sparse_2x4, BenchmarkKind::horizontal_sparse, BenchmarkKind::vertical_sparse,
    BenchmarkKind::dense_ula, BenchmarkKind::dense_upa};

std::string_view to_string(BenchmarkKind kind);
std::optional<BenchmarkKind> parse_benchmark(std::string_view name);

/// Candidate indices (0-based) used by the three sparse layouts. Throws
/// ConfigError for the dense kinds or when the scenario cannot host the layout.
std::vector<int> sparse_indices(BenchmarkKind kind, const ScenarioConfig& scenario);

/// Fixed-position layout for `kind`. Sparse kinds sit on candidate positions
/// with the scenario's subarray geometry. Dense kinds are centered on the
/// middle candidate (ceil(N_y / 2), ceil(N_z / 2)), 1-based: the ULA is N
/// contiguous (M_H M_V) x 1 subarrays along y, the UPA is 2 rows by N / 2
/// columns of contiguous M_H x M_V subarrays, all at half-wavelength spacing.
ArrayLayout fpa_layout(BenchmarkKind kind, const ScenarioConfig& scenario, std::span<const Vec3> candidates);

/// Empty when the layout can be built, otherwise the reason it cannot.
std::string benchmark_unavailable(BenchmarkKind kind, const ScenarioConfig& scenario);

/// The 12 hotspot grids (0-based linear indices) of user-distribution type
/// 1, 2 or 3.
std::vector<int> hotspot_type(int type_id, const CoverageSpec& cov);

}  // namespace xlma
