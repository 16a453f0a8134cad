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

#include "xlma/common.hpp"
#include "xlma/rng.hpp"
#include "xlma/scenario.hpp"

namespace xlma {

struct Subarray {
  Vec3 center = Vec3::Zero();
  SubarrayGeometry geometry;
};

/// A set of subarrays at arbitrary centers. Covers both movable placements
/// (centers on candidate positions) and fixed baselines.
struct ArrayLayout {
  std::vector<Subarray> elements;

  int total_antennas() const;
  bool has_uniform_geometry() const;
  std::vector<Vec3> centers() const;
  /// Positions of every antenna element, subarray by subarray.
  std::vector<Vec3> element_positions() const;

  static ArrayLayout from_candidates(std::span<const int> indices, std::span<const Vec3> candidates,
                                     const SubarrayGeometry& geometry);
};

/// Unit vector from r toward t. Throws DomainError for coincident points.
Vec3 wave_vector(const Vec3& t, const Vec3& r);

/// a_V(u_z) kron a_H(u_y); entry (v, h) sits at index v * m_h + h.
Eigen::VectorXcd steering_vector(const Vec3& u, const SubarrayGeometry& geometry, double wavelength);

/// Free-space gain (lambda / (4 pi d))^2.
double los_path_gain(double distance, double wavelength);

/// Large-scale link parameters between a set of grids (rows) and a set of
/// sites (columns), stored row-major at [g * num_sites + s].
struct GainTables {
  int num_grids = 0;
  int num_sites = 0;
  std::vector<int> grid_ids;  // global grid index of each row
  std::vector<Vec3> u;
  std::vector<double> beta_los;
  std::vector<double> beta_nlos;
  std::vector<double> beta_total;
  std::vector<std::uint8_t> xi;

  std::size_t at(int g, int s) const { return static_cast<std::size_t>(g) * num_sites + s; }
  /// CSV with columns k,n,xi,beta_los,beta_nlos.
  void write_csv(std::ostream& os) const;
};

/// beta_los from center distances, beta_nlos = beta_los / kappa (0 in pure
/// LoS), beta_total = xi * beta_los + beta_nlos. `xi` is row-major over
/// (grid_positions, sites).
GainTables build_gain_tables(const ScenarioConfig& scenario, std::span<const Vec3> sites,
                             std::span<const Vec3> grid_positions, std::span<const int> grid_ids,
                             std::span<const std::uint8_t> xi);

std::vector<std::uint8_t> sample_activation(std::span<const double> rho, RngStream& rng);

/// One draw of activations and channels. H has one column per gain-table
/// row; columns of inactive grids are left at zero.
struct ChannelRealization {
  std::vector<std::uint8_t> alpha;
  Eigen::MatrixXcd H;
};

/// Draws channel columns for a fixed layout. The deterministic LoS part of
/// every (grid, subarray) block is precomputed; each draw applies an
/// independent uniform phase per block and adds CN(0, beta_nlos) noise.
class ChannelSampler {
 public:
  ChannelSampler(const ArrayLayout& layout, const GainTables& gains, double wavelength);

  int num_grids() const { return gains_.num_grids; }
  int num_subarrays() const { return static_cast<int>(offsets_.size()); }
  int total_antennas() const { return total_; }
  const GainTables& gains() const { return gains_; }

  void sample_column(int g, RngStream& rng, Eigen::Ref<Eigen::VectorXcd> out) const;
  ChannelRealization sample(std::span<const std::uint8_t> alpha, RngStream& rng) const;

 private:
  GainTables gains_;
  std::vector<int> offsets_;
  std::vector<int> sizes_;
  int total_ = 0;
  std::vector<Eigen::VectorXcd> los_;  // [g * S + s], already scaled by sqrt(beta_los) * xi
};

}  // namespace xlma
