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

#include "xlma/channel.hpp"

#include <cmath>
#include <ostream>

namespace xlma {

int ArrayLayout::total_antennas() const {
  int total = 0;
  for (const Subarray& s : elements) total += s.geometry.size();
  return total;
}

bool ArrayLayout::has_uniform_geometry() const {
  for (const Subarray& s : elements) {
    if (!(s.geometry == elements.front().geometry)) return false;
  }
  return true;
}

std::vector<Vec3> ArrayLayout::centers() const {
  std::vector<Vec3> out;
  out.reserve(elements.size());
  for (const Subarray& s : elements) out.push_back(s.center);
  return out;
}

std::vector<Vec3> ArrayLayout::element_positions() const {
  std::vector<Vec3> out;
  for (const Subarray& s : elements) {
    const SubarrayGeometry& g = s.geometry;
    for (int v = 0; v < g.m_v; ++v) {
      for (int h = 0; h < g.m_h; ++h) {
        const double dy = (h - 0.5 * (g.m_h - 1)) * g.d_h;
        const double dz = (v - 0.5 * (g.m_v - 1)) * g.d_v;
        out.push_back(s.center + Vec3(0.0, dy, dz));
      }
    }
  }
  return out;
}

ArrayLayout ArrayLayout::from_candidates(std::span<const int> indices, std::span<const Vec3> candidates,
                                         const SubarrayGeometry& geometry) {
  ArrayLayout layout;
  layout.elements.reserve(indices.size());
  for (int n : indices) {
    if (n < 0 || n >= static_cast<int>(candidates.size())) throw DomainError("candidate index out of range");
    layout.elements.push_back({candidates[n], geometry});
  }
  return layout;
}

Vec3 wave_vector(const Vec3& t, const Vec3& r) {
  const Vec3 d = t - r;
  const double norm = d.norm();
  if (norm == 0.0) throw DomainError("wave vector undefined for coincident points");
  return d / norm;
}

Eigen::VectorXcd steering_vector(const Vec3& u, const SubarrayGeometry& geometry, double wavelength) {
  const double k = 2.0 * kPi / wavelength;
  Eigen::VectorXcd a(geometry.size());
  for (int v = 0; v < geometry.m_v; ++v) {
    const cdouble av = std::polar(1.0, -k * geometry.d_v * v * u.z());
    for (int h = 0; h < geometry.m_h; ++h) {
      a[v * geometry.m_h + h] = av * std::polar(1.0, -k * geometry.d_h * h * u.y());
    }
  }
  return a;
}

double los_path_gain(double distance, double wavelength) {
  if (!(distance > 0.0)) throw DomainError("path gain needs a positive distance");
  const double r = wavelength / (4.0 * kPi * distance);
  return r * r;
}

void GainTables::write_csv(std::ostream& os) const {
  os << "k,n,xi,beta_los,beta_nlos\n";
  os.precision(17);
  for (int g = 0; g < num_grids; ++g) {
    for (int s = 0; s < num_sites; ++s) {
      const std::size_t i = at(g, s);
      os << grid_ids[g] << ',' << s << ',' << static_cast<int>(xi[i]) << ',' << beta_los[i] << ',' << beta_nlos[i]
         << '\n';
    }
  }
}

GainTables build_gain_tables(const ScenarioConfig& scenario, std::span<const Vec3> sites,
                             std::span<const Vec3> grid_positions, std::span<const int> grid_ids,
                             std::span<const std::uint8_t> xi) {
  GainTables t;
  t.num_grids = static_cast<int>(grid_positions.size());
  t.num_sites = static_cast<int>(sites.size());
  if (grid_ids.size() != grid_positions.size()) throw DomainError("grid id list does not match grid positions");
  if (xi.size() != static_cast<std::size_t>(t.num_grids) * t.num_sites) {
    throw DomainError("visibility table has the wrong shape");
  }
  t.grid_ids.assign(grid_ids.begin(), grid_ids.end());
  const std::size_t total = xi.size();
  t.u.resize(total);
  t.beta_los.resize(total);
  t.beta_nlos.resize(total);
  t.beta_total.resize(total);
  t.xi.assign(xi.begin(), xi.end());
  const bool pure = scenario.rician.pure_los();
  for (int g = 0; g < t.num_grids; ++g) {
    for (int s = 0; s < t.num_sites; ++s) {
      const std::size_t i = t.at(g, s);
      const Vec3 d = grid_positions[g] - sites[s];
      const double dist = d.norm();
      if (dist == 0.0) throw DomainError("grid center coincides with a site");
      t.u[i] = d / dist;
      t.beta_los[i] = los_path_gain(dist, scenario.wavelength);
      t.beta_nlos[i] = pure ? 0.0 : t.beta_los[i] / scenario.rician.linear;
      t.beta_total[i] = (t.xi[i] ? t.beta_los[i] : 0.0) + t.beta_nlos[i];
    }
  }
  return t;
}

std::vector<std::uint8_t> sample_activation(std::span<const double> rho, RngStream& rng) {
  std::vector<std::uint8_t> alpha(rho.size());
  for (std::size_t k = 0; k < rho.size(); ++k) alpha[k] = rng.bernoulli(rho[k]) ? 1 : 0;
  return alpha;
}

ChannelSampler::ChannelSampler(const ArrayLayout& layout, const GainTables& gains, double wavelength)
    : gains_(gains) {
  if (static_cast<int>(layout.elements.size()) != gains.num_sites) {
    throw DomainError("gain tables were not built for this layout");
  }
  for (const Subarray& s : layout.elements) {
    offsets_.push_back(total_);
    sizes_.push_back(s.geometry.size());
    total_ += s.geometry.size();
  }
  los_.resize(static_cast<std::size_t>(gains.num_grids) * gains.num_sites);
  for (int g = 0; g < gains.num_grids; ++g) {
    for (int s = 0; s < gains.num_sites; ++s) {
      const std::size_t i = gains.at(g, s);
      const double amp = gains.xi[i] ? std::sqrt(gains.beta_los[i]) : 0.0;
      los_[i] = amp * steering_vector(gains.u[i], layout.elements[s].geometry, wavelength);
    }
  }
}

void ChannelSampler::sample_column(int g, RngStream& rng, Eigen::Ref<Eigen::VectorXcd> out) const {
  for (int s = 0; s < gains_.num_sites; ++s) {
    const std::size_t i = gains_.at(g, s);
    const cdouble phase = std::polar(1.0, -rng.uniform(0.0, 2.0 * kPi));
    const double nlos = gains_.beta_nlos[i];
    auto block = out.segment(offsets_[s], sizes_[s]);
    block = phase * los_[i];
    if (nlos > 0.0) {
      for (int m = 0; m < sizes_[s]; ++m) block[m] += rng.complex_normal(nlos);
    }
  }
}

ChannelRealization ChannelSampler::sample(std::span<const std::uint8_t> alpha, RngStream& rng) const {
  ChannelRealization r;
  r.alpha.assign(alpha.begin(), alpha.end());
  r.H = Eigen::MatrixXcd::Zero(total_, gains_.num_grids);
  for (int g = 0; g < gains_.num_grids; ++g) {
    if (alpha[g]) sample_column(g, rng, r.H.col(g));
  }
  return r;
}

}  // namespace xlma
