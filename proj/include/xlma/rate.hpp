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

#include "xlma/channel.hpp"
#include "xlma/common.hpp"

namespace xlma {

/// Squared magnitude of the inner product of two steering vectors: the
/// product of per-axis Fejer kernels sin^2(M x) / sin^2(x). Each axis falls
/// back to its limit M'^2 when |sin(x)| < 1e-9.
double fejer_correlation(const Vec3& u_k, const Vec3& u_i, const SubarrayGeometry& geometry, double wavelength);

/// Per-link large-scale description used by the moment kernels.
struct LinkGain {
  double beta_los = 0.0;
  double beta_nlos = 0.0;
  bool xi = false;

  double total() const { return (xi ? beta_los : 0.0) + beta_nlos; }
  /// beta_nlos / beta_total, i.e. 1 / (kappa * xi + 1). Exactly 0 in pure LoS
  /// with a visible path and 1 for a blocked path.
  double nlos_fraction() const;
};

/// Second- and fourth-moment auxiliary factors for one site.
///   f = M (2a + 1) / (a + 1)^2
///   g = a b / ((a + 1)(b + 1))
///   q = M (1 + a + b) / ((a + 1)(b + 1))
/// with a = kappa_k xi_k, b = kappa_i xi_i. Evaluated through the NLoS
/// fractions so the pure-LoS limits are exact.
double aux_f(const LinkGain& k, int antennas);
double aux_g(const LinkGain& k, const LinkGain& i);
double aux_q(const LinkGain& k, const LinkGain& i, int antennas);

/// Closed-form channel moments at one site (expectations over phases and NLoS).
double moment_power(const LinkGain& k, int antennas);                        // E ||h_k||^2
double moment_fourth(const LinkGain& k, int antennas);                       // E ||h_k||^4
double moment_cross(const LinkGain& k, const LinkGain& i, double phi, int antennas);  // E |h_k^H h_i|^2

/// Dense phi/f/g/q tables over (row k, row i, site). Only built when the
/// entry count fits the memory budget.
struct KernelTables {
  int num_grids = 0;
  int num_sites = 0;
  std::vector<double> phi, g, q;  // [(k * G + i) * S + s]
  std::vector<double> f;          // [k * S + s]

  std::size_t at(int k, int i, int s) const {
    return (static_cast<std::size_t>(k) * num_grids + i) * num_sites + s;
  }
};

constexpr std::size_t kDefaultKernelBudget = 200'000'000;

std::optional<KernelTables> build_kernel_tables(const GainTables& gains, const SubarrayGeometry& geometry,
                                                double wavelength, std::size_t budget = kDefaultKernelBudget);

/// Closed-form MRC rate model over a gain table. Every grid with a positive
/// activation probability must be a row of the table; rows with rho = 0 may
/// be present and are skipped in interference and in the weighted sum.
///
/// A placement is a set of distinct site indices (the support of chi). The
/// model folds the pairwise kernels into three per-(site, grid) terms so a
/// support change costs O(G):
///   signal   = beta_k
///   fourth   = beta_k^2 f_k
///   denom    = M beta_k + sum_{i != k} snr_i rho_i beta_k beta_i (phi g + q)
/// and then  sinr_k = snr_k (M^2 (sum signal)^2 + sum fourth) / sum denom.
class RateModel {
 public:
  RateModel(const GainTables& gains, const SubarrayGeometry& geometry, double wavelength,
            std::span<const double> snr, std::span<const double> rho, unsigned threads = 0);

  /// Builds the folded terms from explicit kernel tables.
  RateModel(const GainTables& gains, const KernelTables& kernels, int antennas, std::span<const double> snr,
            std::span<const double> rho);

  int num_sites() const { return num_sites_; }
  int num_grids() const { return num_grids_; }
  int antennas() const { return antennas_; }
  std::span<const double> rho() const { return rho_; }
  std::span<const double> snr() const { return snr_; }

  double signal_term(int s, int g) const { return signal_[idx(s, g)]; }
  double fourth_term(int s, int g) const { return fourth_[idx(s, g)]; }
  double denom_term(int s, int g) const { return denom_[idx(s, g)]; }

  double expected_sinr(std::span<const int> support, int g) const;
  double expected_rate(std::span<const int> support, int g) const;
  double weighted_sum_rate(std::span<const int> support) const;
  double marginal_rate(int site, int g) const;
  double upper_bound_rate(std::span<const int> support, int g) const;
  double weighted_upper_bound(std::span<const int> support) const;
  /// c_n = sum_k rho_k marginal_rate(n, k) for every site.
  std::vector<double> marginal_objective() const;

  /// Running per-grid sums for a changing support.
  class Accumulator {
   public:
    explicit Accumulator(const RateModel& model);
    void add(int site);
    void remove(int site);
    int size() const { return count_; }
    double weighted_sum_rate() const;
    /// Weighted sum after hypothetically adding `site`, without mutating.
    double weighted_sum_rate_with(int site) const;

   private:
    const RateModel* model_;
    std::vector<double> s1_, s2_, den_;
    int count_ = 0;
  };

 private:
  std::size_t idx(int s, int g) const { return static_cast<std::size_t>(s) * num_grids_ + g; }
  void check_support(std::span<const int> support) const;
  double sinr_from_sums(int g, double s1, double s2, double den) const;

  int num_sites_ = 0;
  int num_grids_ = 0;
  int antennas_ = 0;
  std::vector<double> snr_, rho_;
  std::vector<double> signal_, fourth_, denom_;  // site-major [s * G + g]
};

/// Bits per second per hertz.
inline double rate_from_sinr(double sinr) { return std::log2(1.0 + sinr); }

}  // namespace xlma
