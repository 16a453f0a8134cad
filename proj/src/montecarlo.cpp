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

#include "xlma/montecarlo.hpp"

#include <cmath>
#include <limits>

#include "xlma/parallel.hpp"
#include "xlma/rate.hpp"

namespace xlma {
namespace {

SimEstimate summarize(const std::vector<double>& v, std::uint64_t seed) {
  SimEstimate e;
  e.trials = static_cast<int>(v.size());
  e.seed = seed;
  if (v.empty()) return e;
  double sum = 0.0;
  for (double x : v) sum += x;
  e.estimate = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - e.estimate) * (x - e.estimate);
    e.std_error = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return e;
}

}  // namespace

double mrc_sinr(const Eigen::MatrixXcd& H, std::span<const std::uint8_t> alpha, int k, std::span<const double> snr) {
  const auto h = H.col(k);
  const double n2 = h.squaredNorm();
  if (n2 == 0.0) return 0.0;
  double interference = 0.0;
  for (int i = 0; i < H.cols(); ++i) {
    if (i == k || !alpha[i]) continue;
    interference += snr[i] * std::norm(h.dot(H.col(i)));
  }
  return snr[k] * n2 * n2 / (interference + n2);
}

double mmse_sinr(const Eigen::MatrixXcd& H, std::span<const std::uint8_t> alpha, int k, std::span<const double> snr) {
  const Eigen::Index m = H.rows();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Identity(m, m);
  for (int i = 0; i < H.cols(); ++i) {
    if (i == k || !alpha[i]) continue;
    c.noalias() += snr[i] * H.col(i) * H.col(i).adjoint();
  }
  const Eigen::VectorXcd x = c.llt().solve(H.col(k));
  return snr[k] * std::real(H.col(k).dot(x));
}

std::vector<double> mmse_sinr_all(const Eigen::MatrixXcd& H, std::span<const std::uint8_t> alpha,
                                  std::span<const double> snr) {
  std::vector<double> out(H.cols(), 0.0);
  std::vector<int> act;
  for (int i = 0; i < H.cols(); ++i) {
    if (alpha[i]) act.push_back(i);
  }
  if (act.empty()) return out;
  const Eigen::Index m = H.rows();
  const Eigen::Index a = static_cast<Eigen::Index>(act.size());
  Eigen::MatrixXcd hs(m, a);
  for (Eigen::Index j = 0; j < a; ++j) hs.col(j) = std::sqrt(snr[act[j]]) * H.col(act[j]);
  if (a < m) {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(a, a);
    g.noalias() += hs.adjoint() * hs;
    const Eigen::MatrixXcd inv = g.llt().solve(Eigen::MatrixXcd::Identity(a, a));
    for (Eigen::Index j = 0; j < a; ++j) out[act[j]] = std::max(0.0, 1.0 / std::real(inv(j, j)) - 1.0);
  } else {
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Identity(m, m);
    c.noalias() += hs * hs.adjoint();
    const Eigen::LLT<Eigen::MatrixXcd> llt(c);
    const Eigen::MatrixXcd x = llt.solve(hs);
    for (Eigen::Index j = 0; j < a; ++j) {
      const double t = std::real(hs.col(j).dot(x.col(j)));
      out[act[j]] = t / (1.0 - t);
    }
  }
  return out;
}

SimReport simulate(const ChannelSampler& sampler, std::span<const double> rho, std::span<const double> snr,
                   const SimOptions& options) {
  if (options.trials < 1) throw ConfigError("trials must be at least 1");
  const int rows = sampler.num_grids();
  if (static_cast<int>(rho.size()) != rows || static_cast<int>(snr.size()) != rows) {
    throw DomainError("rho and snr must have one entry per channel column");
  }
  if (options.force_active_grid && (*options.force_active_grid < 0 || *options.force_active_grid >= rows)) {
    throw DomainError("forced grid is out of range");
  }
  const std::size_t trials = static_cast<std::size_t>(options.trials);
  std::vector<double> mrc(options.mrc ? trials : 0);
  std::vector<double> mmse(options.mmse ? trials : 0);

  parallel_for(trials, options.threads, [&](std::size_t t) {
    RngStream rng(options.seed, "trial", t);
    std::vector<std::uint8_t> alpha = sample_activation(rho, rng);
    if (options.force_active_grid) alpha[*options.force_active_grid] = 1;
    const ChannelRealization r = sampler.sample(alpha, rng);
    auto counted = [&](int k) {
      return options.force_active_grid ? k == *options.force_active_grid : alpha[k] != 0;
    };
    if (options.mrc) {
      double sum = 0.0;
      for (int k = 0; k < rows; ++k) {
        if (counted(k)) sum += rate_from_sinr(mrc_sinr(r.H, r.alpha, k, snr));
      }
      mrc[t] = sum;
    }
    if (options.mmse) {
      const std::vector<double> gamma = mmse_sinr_all(r.H, r.alpha, snr);
      double sum = 0.0;
      for (int k = 0; k < rows; ++k) {
        if (counted(k)) sum += rate_from_sinr(gamma[k]);
      }
      mmse[t] = sum;
    }
  });

  SimReport report;
  report.mrc = summarize(mrc, options.seed);
  report.mmse = summarize(mmse, options.seed);
  report.min_mmse_gap = std::numeric_limits<double>::infinity();
  if (options.mrc && options.mmse) {
    for (std::size_t t = 0; t < trials; ++t) report.min_mmse_gap = std::min(report.min_mmse_gap, mmse[t] - mrc[t]);
  }
  if (options.keep_trials) {
    report.mrc_trials = std::move(mrc);
    report.mmse_trials = std::move(mmse);
  }
  return report;
}

}  // namespace xlma
