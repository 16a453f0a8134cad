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

#include "xlma/maps.hpp"

#include <cmath>
#include <ostream>

#include "xlma/geometry.hpp"

namespace xlma {
namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

int nearest(const std::vector<double>& axis, double x) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(axis.size()); ++i) {
    if (std::abs(axis[i] - x) < std::abs(axis[best] - x)) best = i;
  }
  return best;
}

bool blocked(const Vec3& a, const Vec3& b, const std::vector<Obstacle>& obstacles) {
  for (const Obstacle& o : obstacles) {
    if (segment_intersects_box(a, b, o)) return true;
  }
  return false;
}

// Lattice of the request plane; `point(r, c)` maps indices to 3D.
struct Plane {
  MapGrid grid;
  bool xy = true;
  double fixed = 0.0;

  Vec3 point(int r, int c) const {
    return xy ? Vec3(grid.cols[c], grid.rows[r], fixed) : Vec3(fixed, grid.cols[c], grid.rows[r]);
  }
};

Plane make_plane(const MapRequest& req, const CoverageSpec& cov) {
  req.validate(cov);
  Plane p;
  p.xy = req.plane == "xy";
  if (p.xy) {
    p.fixed = req.fixed.value_or(cov.z_min);
    p.grid.row_axis = "y";
    p.grid.col_axis = "x";
    p.grid.rows = linspace(cov.y_min, cov.y_max, req.resolution);
    p.grid.cols = linspace(cov.x_min, cov.x_max, req.resolution);
  } else {
    p.fixed = req.fixed.value_or(cov.x_min);
    p.grid.row_axis = "z";
    p.grid.col_axis = "y";
    p.grid.rows = linspace(cov.z_min, cov.z_max, req.resolution);
    p.grid.cols = linspace(cov.y_min, cov.y_max, req.resolution);
  }
  p.grid.values.assign(p.grid.rows.size() * p.grid.cols.size(), 0.0);
  return p;
}

}  // namespace

void MapRequest::validate(const CoverageSpec& cov) const {
  if (resolution < 2) throw ConfigError("map resolution must be at least 2");
  if (plane != "xy" && plane != "yz") throw ConfigError("map plane must be \"xy\" or \"yz\"");
  if (layout.elements.empty()) throw ConfigError("map layout has no subarrays");
  if (!(blocked_placeholder_gain > 0.0)) throw ConfigError("blocked placeholder gain must be positive");
  if (kind == MapKind::correlation) {
    const double tol = 1e-9;
    if (probe.x() < cov.x_min - tol || probe.x() > cov.x_max + tol || probe.y() < cov.y_min - tol ||
        probe.y() > cov.y_max + tol || probe.z() < cov.z_min - tol || probe.z() > cov.z_max + tol) {
      throw ConfigError("map probe lies outside the coverage region");
    }
  }
}

void MapGrid::write_csv(std::ostream& os) const {
  os.precision(17);
  os << row_axis << '\\' << col_axis;
  for (double c : cols) os << ',' << c;
  os << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    os << rows[r];
    for (std::size_t c = 0; c < cols.size(); ++c) os << ',' << values[r * cols.size() + c];
    os << '\n';
  }
}

MapGrid power_gain_map(const MapRequest& request, const ScenarioConfig& scenario) {
  Plane plane = make_plane(request, scenario.coverage);
  const bool pure = scenario.rician.pure_los();
  for (std::size_t r = 0; r < plane.grid.rows.size(); ++r) {
    for (std::size_t c = 0; c < plane.grid.cols.size(); ++c) {
      const Vec3 p = plane.point(static_cast<int>(r), static_cast<int>(c));
      double total = 0.0;
      for (const Subarray& s : request.layout.elements) {
        const double los = los_path_gain((p - s.center).norm(), scenario.wavelength);
        const double nlos = pure ? 0.0 : los / scenario.rician.linear;
        const double direct = blocked(s.center, p, scenario.obstacles) ? request.blocked_placeholder_gain : los;
        total += s.geometry.size() * (direct + nlos);
      }
      plane.grid.values[r * plane.grid.cols.size() + c] = total;
    }
  }
  return plane.grid;
}

Eigen::VectorXcd los_channel(const ArrayLayout& layout, const Vec3& p, const ScenarioConfig& scenario) {
  Eigen::VectorXcd h = Eigen::VectorXcd::Zero(layout.total_antennas());
  Eigen::Index offset = 0;
  for (const Subarray& s : layout.elements) {
    const int m = s.geometry.size();
    if (!blocked(s.center, p, scenario.obstacles)) {
      const double d = (p - s.center).norm();
      const cdouble phase = std::polar(1.0, -2.0 * kPi * d / scenario.wavelength);
      const double amp = std::sqrt(los_path_gain(d, scenario.wavelength));
      h.segment(offset, m) = amp * phase * steering_vector(wave_vector(p, s.center), s.geometry, scenario.wavelength);
    }
    offset += m;
  }
  return h;
}

MapGrid correlation_map(const MapRequest& request, const ScenarioConfig& scenario) {
  Plane plane = make_plane(request, scenario.coverage);
  const Vec3& q = request.probe;
  const int pr = nearest(plane.grid.rows, plane.xy ? q.y() : q.z());
  const int pc = nearest(plane.grid.cols, plane.xy ? q.x() : q.y());
  plane.grid.probe = plane.point(pr, pc);
  Eigen::VectorXcd h0 = los_channel(request.layout, plane.grid.probe, scenario);
  const double n0 = h0.norm();
  if (n0 == 0.0) throw DomainError("channel at the map probe is zero (every path blocked)");
  h0 /= n0;
  for (std::size_t r = 0; r < plane.grid.rows.size(); ++r) {
    for (std::size_t c = 0; c < plane.grid.cols.size(); ++c) {
      const Eigen::VectorXcd h = los_channel(request.layout, plane.point(static_cast<int>(r), static_cast<int>(c)),
                                             scenario);
      const double n = h.norm();
      plane.grid.values[r * plane.grid.cols.size() + c] = n == 0.0 ? 0.0 : std::min(1.0, std::norm(h.dot(h0)) / (n * n));
    }
  }
  return plane.grid;
}

}  // namespace xlma
