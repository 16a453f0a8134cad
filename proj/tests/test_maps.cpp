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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"

#include "fixtures.hpp"
#include "xlma/benchmarks.hpp"
#include "xlma/maps.hpp"

using namespace xlma;

namespace {

ScenarioConfig desk() { return testing::preset("desk_full_los").scenario; }

ArrayLayout single(const Vec3& c, const SubarrayGeometry& g) {
  ArrayLayout l;
  l.elements.push_back({c, g});
  return l;
}

}  // namespace

TEST_SUITE("maps") {
  TEST_CASE("power map matches free-space gain") {
    const ScenarioConfig sc = desk();
    MapRequest req;
    req.layout = single(Vec3(0, 3, 20.5), sc.subarray);
    req.resolution = 7;
    const MapGrid g = power_gain_map(req, sc);
    REQUIRE(g.values.size() == 49);
    const double m = sc.subarray.size();
    for (int r = 0; r < 7; ++r) {
      for (int c = 0; c < 7; ++c) {
        const Vec3 p(g.cols[c], g.rows[r], sc.coverage.z_min);
        const double d = (p - Vec3(0, 3, 20.5)).norm();
        const double expect = m * std::pow(sc.wavelength / (4 * kPi * d), 2);
        CHECK(g.at(r, c) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("power adds over subarrays") {
    const ScenarioConfig sc = desk();
    MapRequest one, two;
    one.layout = single(Vec3(0, -7, 20.5), sc.subarray);
    two.layout = one.layout;
    two.layout.elements.push_back(one.layout.elements.front());
    one.resolution = two.resolution = 9;
    const MapGrid a = power_gain_map(one, sc), b = power_gain_map(two, sc);
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(b.values[i] == doctest::Approx(2 * a.values[i]));
  }

  TEST_CASE("symmetric layout gives a symmetric map") {
    const ScenarioConfig sc = desk();
    MapRequest req;
    req.layout = single(Vec3(0, -12, 20.5), sc.subarray);
    req.layout.elements.push_back({Vec3(0, 12, 20.5), sc.subarray});
    req.resolution = 11;
    const MapGrid g = power_gain_map(req, sc);
    for (int r = 0; r < 11; ++r) {
      for (int c = 0; c < 11; ++c) CHECK(g.at(r, c) == doctest::Approx(g.at(10 - r, c)).epsilon(1e-12));
    }
  }

  TEST_CASE("blocked paths use the placeholder") {
    ScenarioConfig sc = desk();
    sc.obstacles.push_back({Vec3(3, 0, 10), Vec3(1, 1000, 1000)});
    MapRequest req;
    req.layout = single(Vec3(0, 0, 20.5), sc.subarray);
    req.resolution = 4;
    req.blocked_placeholder_gain = 1e-12;
    const MapGrid g = power_gain_map(req, sc);
    for (double v : g.values) CHECK(v == doctest::Approx(sc.subarray.size() * 1e-12));
  }

  TEST_CASE("dense ULA power peaks in front of the array") {
    const ScenarioConfig sc = desk();
    const auto cands = build_candidate_grid(sc.ma_region);
    MapRequest req;
    req.layout = fpa_layout(BenchmarkKind::dense_ula, sc, cands);
    req.resolution = 51;
    const MapGrid g = power_gain_map(req, sc);
    int best = 0;
    for (int r = 1; r < 51; ++r) {
      if (g.at(r, 0) > g.at(best, 0)) best = r;
    }
    CHECK(best == 25);
  }

  TEST_CASE("correlation map") {
    const ScenarioConfig sc = desk();
    const auto cands = build_candidate_grid(sc.ma_region);
    MapRequest req;
    req.kind = MapKind::correlation;
    req.layout = fpa_layout(BenchmarkKind::horizontal_sparse, sc, cands);
    req.resolution = 21;
    req.probe = Vec3(30, 0, 0);
    const MapGrid g = correlation_map(req, sc);
    const int pr = static_cast<int>(std::find(g.rows.begin(), g.rows.end(), g.probe.y()) - g.rows.begin());
    const int pc = static_cast<int>(std::find(g.cols.begin(), g.cols.end(), g.probe.x()) - g.cols.begin());
    REQUIRE(pr < 21);
    REQUIRE(pc < 21);
    CHECK(g.at(pr, pc) == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : g.values) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(*std::min_element(g.values.begin(), g.values.end()) < 0.5);
  }

  TEST_CASE("single antenna correlates fully everywhere") {
    const ScenarioConfig sc = desk();
    MapRequest req;
    req.kind = MapKind::correlation;
    req.layout = single(Vec3(0, 0, 20.5), SubarrayGeometry{1, 1, sc.wavelength / 2, sc.wavelength / 2});
    req.resolution = 9;
    req.probe = Vec3(20, 10, 0);
    for (double v : correlation_map(req, sc).values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("invalid requests") {
    const ScenarioConfig sc = desk();
    MapRequest req;
    req.kind = MapKind::correlation;
    req.layout = single(Vec3(0, 0, 20.5), sc.subarray);
    req.probe = Vec3(100, 0, 0);
    CHECK_THROWS_AS(correlation_map(req, sc), ConfigError);
    req.probe = Vec3(20, 0, 0);
    req.resolution = 1;
    CHECK_THROWS_AS(correlation_map(req, sc), ConfigError);
    req.resolution = 5;
    req.plane = "xz";
    CHECK_THROWS_AS(power_gain_map(req, sc), ConfigError);
    req.plane = "xy";
    req.layout.elements.clear();
    CHECK_THROWS_AS(power_gain_map(req, sc), ConfigError);
  }

  TEST_CASE("csv layout") {
    const ScenarioConfig sc = desk();
    MapRequest req;
    req.layout = single(Vec3(0, 0, 20.5), sc.subarray);
    req.plane = "yz";
    req.resolution = 3;
    std::ostringstream os;
    power_gain_map(req, sc).write_csv(os);
    std::istringstream is(os.str());
    std::string line;
    int lines = 0;
    std::getline(is, line);
    CHECK(line.rfind("z\\y,", 0) == 0);
    while (std::getline(is, line)) {
      ++lines;
      CHECK(std::count(line.begin(), line.end(), ',') == 3);
    }
    CHECK(lines == 3);
  }
}
