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

#include "xlma/rate.hpp"

#include <algorithm>
#include <cmath>

#include "xlma/parallel.hpp"

namespace xlma {
namespace {

double fejer_axis(int m, double spacing, double wavelength, double du) {
  if (m == 1) return 1.0;
  const double x = kPi * spacing / wavelength * du;
  const double s = std::sin(x);
  if (std::abs(s) < 1e-9) return static_cast<double>(m) * m;
  const double sm = std::sin(m * x);
  return (sm * sm) / (s * s);
}

LinkGain link_at(const GainTables& t, int g, int s) {
  const std::size_t i = t.at(g, s);
  return {t.beta_los[i], t.beta_nlos[i], t.xi[i] != 0};
}

}  // namespace

double fejer_correlation(const Vec3& u_k, const Vec3& u_i, const SubarrayGeometry& geometry, double wavelength) {
  return fejer_axis(geometry.m_v, geometry.d_v, wavelength, u_k.z() - u_i.z()) *
         fejer_axis(geometry.m_h, geometry.d_h, wavelength, u_k.y() - u_i.y());
}

double LinkGain::nlos_fraction() const {
  const double t = total();
  if (!xi || t == 0.0) return 1.0;
  return beta_nlos / t;
}

double aux_f(const LinkGain& k, int antennas) {
  const double r = k.nlos_fraction();
  return antennas * (2.0 * r - r * r);
}

double aux_g(const LinkGain& k, const LinkGain& i) {
  return (1.0 - k.nlos_fraction()) * (1.0 - i.nlos_fraction());
}

double aux_q(const LinkGain& k, const LinkGain& i, int antennas) {
  const double rk = k.nlos_fraction();
  const double ri = i.nlos_fraction();
  return antennas * (rk + ri - rk * ri);
}

double moment_power(const LinkGain& k, int antennas) { return antennas * k.total(); }

double moment_fourth(const LinkGain& k, int antennas) {
  const double m = antennas;
  const double los = k.xi ? k.beta_los : 0.0;
  const double t = k.total();
  return m * k.beta_nlos * k.beta_nlos + m * m * t * t + 2.0 * m * los * k.beta_nlos;
}

double moment_cross(const LinkGain& k, const LinkGain& i, double phi, int antennas) {
  const double m = antennas;
  const double lk = k.xi ? k.beta_los : 0.0;
  const double li = i.xi ? i.beta_los : 0.0;
  return lk * li * phi + m * k.beta_nlos * i.beta_nlos + m * lk * i.beta_nlos + m * k.beta_nlos * li;
}

std::optional<KernelTables> build_kernel_tables(const GainTables& gains, const SubarrayGeometry& geometry,
                                                double wavelength, std::size_t budget) {
  const std::size_t entries =
      static_cast<std::size_t>(gains.num_grids) * gains.num_grids * static_cast<std::size_t>(gains.num_sites);
  if (entries > budget) return std::nullopt;
  KernelTables kt;
  kt.num_grids = gains.num_grids;
  kt.num_sites = gains.num_sites;
  kt.phi.resize(entries);
  kt.g.resize(entries);
  kt.q.resize(entries);
  kt.f.resize(static_cast<std::size_t>(gains.num_grids) * gains.num_sites);
  const int m = geometry.size();
  for (int k = 0; k < gains.num_grids; ++k) {
    for (int s = 0; s < gains.num_sites; ++s) {
      const LinkGain lk = link_at(gains, k, s);
      kt.f[gains.at(k, s)] = aux_f(lk, m);
      for (int i = 0; i < gains.num_grids; ++i) {
        const LinkGain li = link_at(gains, i, s);
        const std::size_t e = kt.at(k, i, s);
        kt.phi[e] = fejer_correlation(gains.u[gains.at(k, s)], gains.u[gains.at(i, s)], geometry, wavelength);
        kt.g[e] = aux_g(lk, li);
        kt.q[e] = aux_q(lk, li, m);
      }
    }
  }
  return kt;
}

RateModel::RateModel(const GainTables& gains, const SubarrayGeometry& geometry, double wavelength,
                     std::span<const double> snr, std::span<const double> rho, unsigned threads)
    : num_sites_(gains.num_sites),
      num_grids_(gains.num_grids),
      antennas_(geometry.size()),
      snr_(snr.begin(), snr.end()),
      rho_(rho.begin(), rho.end()) {
  if (static_cast<int>(snr_.size()) != num_grids_ || static_cast<int>(rho_.size()) != num_grids_) {
    throw DomainError("snr and rho must have one entry per gain-table row");
  }
  const std::size_t n = static_cast<std::size_t>(num_sites_) * num_grids_;
  signal_.assign(n, 0.0);
  fourth_.assign(n, 0.0);
  denom_.assign(n, 0.0);
  std::vector<int> interferers;
  for (int i = 0; i < num_grids_; ++i) {
    if (rho_[i] > 0.0) interferers.push_back(i);
  }
  const int m = antennas_;
  parallel_for(static_cast<std::size_t>(num_sites_), threads, [&](std::size_t site) {
    const int s = static_cast<int>(site);
    std::vector<LinkGain> links(num_grids_);
    for (int g = 0; g < num_grids_; ++g) links[g] = link_at(gains, g, s);
    for (int k = 0; k < num_grids_; ++k) {
      const double bk = links[k].total();
      const std::size_t out = idx(s, k);
      signal_[out] = bk;
      fourth_[out] = bk * bk * aux_f(links[k], m);
      if (bk == 0.0) continue;
      double interference = 0.0;
      for (int i : interferers) {
        if (i == k) continue;
        const double bi = links[i].total();
        if (bi == 0.0) continue;
        const double g = aux_g(links[k], links[i]);
        const double phi =
            g == 0.0 ? 0.0
                     : fejer_correlation(gains.u[gains.at(k, s)], gains.u[gains.at(i, s)], geometry, wavelength);
        interference += snr_[i] * rho_[i] * bi * (phi * g + aux_q(links[k], links[i], m));
      }
      denom_[out] = m * bk + bk * interference;
    }
  });
}

RateModel::RateModel(const GainTables& gains, const KernelTables& kernels, int antennas, std::span<const double> snr,
                     std::span<const double> rho)
    : num_sites_(gains.num_sites),
      num_grids_(gains.num_grids),
      antennas_(antennas),
      snr_(snr.begin(), snr.end()),
      rho_(rho.begin(), rho.end()) {
  if (kernels.num_grids != num_grids_ || kernels.num_sites != num_sites_) {
    throw DomainError("kernel tables do not match the gain tables");
  }
  if (static_cast<int>(snr_.size()) != num_grids_ || static_cast<int>(rho_.size()) != num_grids_) {
    throw DomainError("snr and rho must have one entry per gain-table row");
  }
  const std::size_t n = static_cast<std::size_t>(num_sites_) * num_grids_;
  signal_.assign(n, 0.0);
  fourth_.assign(n, 0.0);
  denom_.assign(n, 0.0);
  for (int s = 0; s < num_sites_; ++s) {
    for (int k = 0; k < num_grids_; ++k) {
      const double bk = gains.beta_total[gains.at(k, s)];
      double interference = 0.0;
      for (int i = 0; i < num_grids_; ++i) {
        if (i == k || !(rho_[i] > 0.0)) continue;
        const std::size_t e = kernels.at(k, i, s);
        interference += snr_[i] * rho_[i] * gains.beta_total[gains.at(i, s)] *
                        (kernels.phi[e] * kernels.g[e] + kernels.q[e]);
      }
      signal_[idx(s, k)] = bk;
      fourth_[idx(s, k)] = bk * bk * kernels.f[gains.at(k, s)];
      denom_[idx(s, k)] = antennas * bk + bk * interference;
    }
  }
}

void RateModel::check_support(std::span<const int> support) const {
  if (support.empty()) throw DomainError("placement selects no positions");
  std::vector<int> sorted(support.begin(), support.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 0 || sorted.back() >= num_sites_) throw DomainError("placement index out of range");
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError("placement selects a position twice");
  }
}

double RateModel::sinr_from_sums(int g, double s1, double s2, double den) const {
  const double m = antennas_;
  const double num = snr_[g] * (m * m * s1 * s1 + s2);
  if (num == 0.0) return 0.0;
  return num / den;
}

double RateModel::expected_sinr(std::span<const int> support, int g) const {
  check_support(support);
  double s1 = 0.0, s2 = 0.0, den = 0.0;
  for (int s : support) {
    s1 += signal_[idx(s, g)];
    s2 += fourth_[idx(s, g)];
    den += denom_[idx(s, g)];
  }
  return sinr_from_sums(g, s1, s2, den);
}

double RateModel::expected_rate(std::span<const int> support, int g) const {
  return rate_from_sinr(expected_sinr(support, g));
}

double RateModel::weighted_sum_rate(std::span<const int> support) const {
  check_support(support);
  double total = 0.0;
  for (int g = 0; g < num_grids_; ++g) {
    if (!(rho_[g] > 0.0)) continue;
    total += rho_[g] * expected_rate(support, g);
  }
  return total;
}

double RateModel::marginal_rate(int site, int g) const {
  const int one[1] = {site};
  return expected_rate(one, g);
}

double RateModel::upper_bound_rate(std::span<const int> support, int g) const {
  check_support(support);
  double s1 = 0.0;
  for (int s : support) s1 += signal_[idx(s, g)];
  return rate_from_sinr(snr_[g] * antennas_ * s1);
}

double RateModel::weighted_upper_bound(std::span<const int> support) const {
  double total = 0.0;
  for (int g = 0; g < num_grids_; ++g) {
    if (!(rho_[g] > 0.0)) continue;
    total += rho_[g] * upper_bound_rate(support, g);
  }
  return total;
}

std::vector<double> RateModel::marginal_objective() const {
  std::vector<double> c(num_sites_, 0.0);
  for (int s = 0; s < num_sites_; ++s) {
    double total = 0.0;
    for (int g = 0; g < num_grids_; ++g) {
      if (!(rho_[g] > 0.0)) continue;
      const std::size_t i = idx(s, g);
      total += rho_[g] * rate_from_sinr(sinr_from_sums(g, signal_[i], fourth_[i], denom_[i]));
    }
    c[s] = total;
  }
  return c;
}

RateModel::Accumulator::Accumulator(const RateModel& model)
    : model_(&model),
      s1_(model.num_grids_, 0.0),
      s2_(model.num_grids_, 0.0),
      den_(model.num_grids_, 0.0) {}

void RateModel::Accumulator::add(int site) {
  const std::size_t base = static_cast<std::size_t>(site) * model_->num_grids_;
  for (int g = 0; g < model_->num_grids_; ++g) {
    s1_[g] += model_->signal_[base + g];
    s2_[g] += model_->fourth_[base + g];
    den_[g] += model_->denom_[base + g];
  }
  ++count_;
}

void RateModel::Accumulator::remove(int site) {
  const std::size_t base = static_cast<std::size_t>(site) * model_->num_grids_;
  for (int g = 0; g < model_->num_grids_; ++g) {
    s1_[g] -= model_->signal_[base + g];
    s2_[g] -= model_->fourth_[base + g];
    den_[g] -= model_->denom_[base + g];
  }
  --count_;
}

double RateModel::Accumulator::weighted_sum_rate() const {
  if (count_ == 0) throw DomainError("placement selects no positions");
  double total = 0.0;
  for (int g = 0; g < model_->num_grids_; ++g) {
    const double rho = model_->rho_[g];
    if (!(rho > 0.0)) continue;
    total += rho * rate_from_sinr(model_->sinr_from_sums(g, s1_[g], s2_[g], den_[g]));
  }
  return total;
}

double RateModel::Accumulator::weighted_sum_rate_with(int site) const {
  const std::size_t base = static_cast<std::size_t>(site) * model_->num_grids_;
  double total = 0.0;
  for (int g = 0; g < model_->num_grids_; ++g) {
    const double rho = model_->rho_[g];
    if (!(rho > 0.0)) continue;
    const double sinr = model_->sinr_from_sums(g, s1_[g] + model_->signal_[base + g],
                                               s2_[g] + model_->fourth_[base + g], den_[g] + model_->denom_[base + g]);
    total += rho * rate_from_sinr(sinr);
  }
  return total;
}

}  // namespace xlma
