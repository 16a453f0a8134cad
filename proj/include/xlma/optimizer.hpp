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
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "xlma/lp.hpp"
#include "xlma/rate.hpp"

namespace xlma {

/// LP relaxation used to seed the replacement loop. `xi` is row-major over
/// (model rows, sites); coverage rows come from the N highest-rho rows that
/// see at least one site, ties by lowest row.
LpProblem build_init_lp(const RateModel& model, std::span<const std::uint8_t> xi, int n);

struct SelectionState {
  std::vector<int> n_mu;       // slot -> site
  std::vector<bool> replaced;  // slot already rehomed
  double objective = 0.0;
};

/// Slot whose temporary removal keeps the highest weighted sum rate, among
/// slots not yet replaced; ties by lowest slot.
int select_victim(const RateModel& model, const SelectionState& state);

struct Replacement {
  int site = -1;
  double objective = 0.0;
};

/// Best site for `slot` given the other slots stay put. The slot's current
/// site is admissible; ties go to the lowest site index.
Replacement best_replacement(const RateModel& model, const SelectionState& state, int slot, unsigned threads = 0);

struct TraceEntry {
  int iteration = 0;
  int victim_slot = -1;
  int removed_site = -1;
  int chosen_site = -1;
  double objective_before = 0.0;
  double candidate_objective = 0.0;
  bool accepted = false;
};

struct PlacementResult {
  std::vector<int> n_mu;
  std::vector<std::uint8_t> chi;
  double initial_objective = 0.0;
  double objective = 0.0;
  LpSolution lp;
  std::vector<TraceEntry> trace;
  int accepted_steps = 0;
};

/// Successive replacement: LP initialization, rounding to the top N, then
/// up to N victim/replacement rounds accepting only gains above 1e-12.
PlacementResult successive_replacement(const RateModel& model, std::span<const std::uint8_t> xi, int n,
                                       unsigned threads = 0);

struct ExhaustiveResult {
  std::vector<int> support;
  double objective = 0.0;
  std::uint64_t combinations = 0;
};

constexpr std::uint64_t kDefaultExhaustiveLimit = 10'000'000;

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(int n, int k);

/// Global optimum over all n-subsets; the lexicographically smallest support
/// wins ties. Throws DomainError when C(N0, n) exceeds `limit`.
ExhaustiveResult exhaustive_search(const RateModel& model, int n, std::uint64_t limit = kDefaultExhaustiveLimit);

/// N x N0 placement matrix with Phi(slot, n_mu[slot]) = 1.
Eigen::MatrixXi placement_matrix(std::span<const int> n_mu, int num_sites);
std::vector<std::uint8_t> support_indicator(std::span<const int> n_mu, int num_sites);
/// At most one subarray per column, exactly one column per row.
bool placement_matrix_valid(const Eigen::MatrixXi& phi);

void write_trace_jsonl(std::ostream& os, std::span<const TraceEntry> trace);

}  // namespace xlma
