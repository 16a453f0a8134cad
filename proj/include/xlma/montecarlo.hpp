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

#include <Eigen/Dense>

#include "xlma/channel.hpp"

namespace xlma {

/// gamma = p_k ||h_k||^4 / (sum_{i != k} p_i alpha_i |h_k^H h_i|^2 + ||h_k||^2).
/// `snr` holds p = P / sigma^2 per column. A zero column gives 0.
double mrc_sinr(const Eigen::MatrixXcd& H, std::span<const std::uint8_t> alpha, int k, std::span<const double> snr);

/// gamma = p_k h_k^H (sum_{i != k} p_i alpha_i h_i h_i^H + I)^{-1} h_k, solved
/// directly in the antenna domain. Reference route for one column.
double mmse_sinr(const Eigen::MatrixXcd& H, std::span<const std::uint8_t> alpha, int k, std::span<const double> snr);

/// MMSE SINR of every active column (0 elsewhere). Uses the Gram form
/// 1 / [(I + D^1/2 H^H H D^1/2)^{-1}]_kk - 1 when there are fewer active
/// users than antennas, otherwise the antenna-domain form.
std::vector<double> mmse_sinr_all(const Eigen::MatrixXcd& H, std::span<const std::uint8_t> alpha,
                                  std::span<const double> snr);

struct SimOptions {
  int trials = 1000;
  std::uint64_t seed = 1;
  /// Row forced active in every trial; the estimate becomes that row's
  /// conditional rate instead of the weighted sum.
  std::optional<int> force_active_grid;
  bool mrc = true;
  bool mmse = false;
  unsigned threads = 0;
  /// Keep the per-trial sums in the report.
  bool keep_trials = false;
};

struct SimEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

struct SimReport {
  SimEstimate mrc;
  SimEstimate mmse;
  /// Smallest per-trial (MMSE sum - MRC sum); +inf unless both combiners ran.
  double min_mmse_gap = 0.0;
  std::vector<double> mrc_trials;
  std::vector<double> mmse_trials;
};

/// Per trial t, a stream derived from (seed, t) draws the activations and
/// then the channel; the active users' rates are summed. The mean over
/// trials estimates sum_k rho_k R_k. Trials run in parallel but are reduced
/// in index order, so the result does not depend on the thread count.
SimReport simulate(const ChannelSampler& sampler, std::span<const double> rho, std::span<const double> snr,
                   const SimOptions& options);

}  // namespace xlma
