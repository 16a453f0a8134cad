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
#include <span>
#include <string>
#include <vector>

namespace xlma {

/// maximize c^T x  s.t.  sum(x) = n_select,  mask_r^T x >= 1 for every
/// coverage row r,  0 <= x <= 1.
struct LpProblem {
  std::vector<double> c;
  std::vector<std::vector<std::uint8_t>> coverage;
  int n_select = 1;

  int num_vars() const { return static_cast<int>(c.size()); }
  void validate() const;
};

struct LpSolution {
  std::vector<double> x;
  double objective = 0.0;
  /// Row duals, coverage rows first and the cardinality row last.
  std::vector<double> duals;
  /// Largest violation of any row or bound.
  double primal_residual = 0.0;
  /// Largest violation of the bounded-variable optimality conditions
  /// (reduced-cost sign at each bound, zero on basic variables, dual times
  /// slack on coverage rows).
  double slackness_residual = 0.0;
  int pivots = 0;
  /// Coverage rows could not all be met; they were moved into the objective
  /// with a linear penalty and the problem was re-solved.
  bool penalty_fallback = false;
  std::vector<std::string> log;
};

/// Dense bounded-variable two-phase primal simplex with Bland's rule.
/// Deterministic for a fixed input.
LpSolution solve_lp(const LpProblem& problem);

/// Indices of the n largest entries in descending value order; equal values
/// are taken lowest index first.
std::vector<int> round_top_n(std::span<const double> x, int n);

}  // namespace xlma
