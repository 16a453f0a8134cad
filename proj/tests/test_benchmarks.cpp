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
#include <set>

#include "doctest.h"

#include "fixtures.hpp"
#include "xlma/benchmarks.hpp"

using namespace xlma;

namespace {

ScenarioConfig ref_1d() { return testing::preset("ref_full_los").scenario; }

}  // namespace

TEST_SUITE("benchmarks") {
  TEST_CASE("names round trip") {
    for (BenchmarkKind k : kAllBenchmarks) CHECK(parse_benchmark(to_string(k)) == k);
    CHECK_FALSE(parse_benchmark("random").has_value());
  }

  TEST_CASE("horizontal sparse positions") {
    const ScenarioConfig sc = ref_1d();
    CHECK(sparse_indices(BenchmarkKind::horizontal_sparse, sc) == std::vector<int>{0, 14, 29, 43, 57, 71, 86, 100});
    ScenarioConfig one = sc;
    one.num_subarrays = 1;
    CHECK_THROWS_AS(sparse_indices(BenchmarkKind::horizontal_sparse, one), ConfigError);
    CHECK_THROWS_AS(fpa_layout(BenchmarkKind::horizontal_sparse, one, build_candidate_grid(one.ma_region)),
                    ConfigError);
    CHECK_FALSE(benchmark_unavailable(BenchmarkKind::horizontal_sparse, one).empty());
  }

  TEST_CASE("dense ULA geometry") {
    const ScenarioConfig sc = ref_1d();
    const auto cands = build_candidate_grid(sc.ma_region);
    const ArrayLayout l = fpa_layout(BenchmarkKind::dense_ula, sc, cands);
    CHECK(l.total_antennas() == 64);
    const auto pos = l.element_positions();
    double lo = 1e9, hi = -1e9;
    for (const Vec3& p : pos) {
      lo = std::min(lo, p.y());
      hi = std::max(hi, p.y());
      CHECK(p.z() == doctest::Approx(20.5));
    }
    CHECK(hi - lo == doctest::Approx(63 * sc.wavelength / 2).epsilon(1e-9));
    CHECK(0.5 * (hi + lo) == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
    std::vector<double> ys;
    for (const Vec3& p : pos) ys.push_back(p.y());
    std::sort(ys.begin(), ys.end());
    for (std::size_t i = 1; i < ys.size(); ++i) CHECK(ys[i] - ys[i - 1] == doctest::Approx(sc.wavelength / 2));
  }

  TEST_CASE("dense UPA geometry") {
    const ScenarioConfig sc = testing::preset("ref_3d_type1").scenario;
    const auto cands = build_candidate_grid(sc.ma_region);
    const ArrayLayout l = fpa_layout(BenchmarkKind::dense_upa, sc, cands);
    REQUIRE(l.elements.size() == 8);
    CHECK(l.total_antennas() == 128);
    std::set<std::pair<long, long>> grid;
    for (const Vec3& p : l.element_positions()) {
      grid.insert({std::lround(p.y() / (sc.wavelength / 2) * 2), std::lround(p.z() / (sc.wavelength / 2) * 2)});
    }
    CHECK(grid.size() == 128);
    ScenarioConfig odd = sc;
    odd.num_subarrays = 7;
    CHECK_THROWS_AS(fpa_layout(BenchmarkKind::dense_upa, odd, cands), ConfigError);
  }

  TEST_CASE("planar sparse layouts") {
    const ScenarioConfig sc = testing::preset("ref_3d_type1").scenario;
    const auto s24 = sparse_indices(BenchmarkKind::sparse_2x4, sc);
    CHECK(s24 == std::vector<int>{0, 33, 67, 100, 2929, 2962, 2996, 3029});
    const auto vs = sparse_indices(BenchmarkKind::vertical_sparse, sc);
    // column 51 (1-based), rows round(29/7 (n-1) + 1)
    CHECK(vs == std::vector<int>{50, 4 * 101 + 50, 8 * 101 + 50, 12 * 101 + 50, 17 * 101 + 50, 21 * 101 + 50,
                                 25 * 101 + 50, 29 * 101 + 50});
    CHECK_FALSE(benchmark_unavailable(BenchmarkKind::sparse_2x4, ref_1d()).empty());
  }

  TEST_CASE("hotspot types") {
    const CoverageSpec cov{7.5, 52.5, -52.5, 52.5, 0, 50, 9, 21, 10};
    for (int t : {1, 2, 3}) {
      const auto h = hotspot_type(t, cov);
      CHECK(h.size() == 12);
      CHECK(std::set<int>(h.begin(), h.end()).size() == 12);
    }
    const auto t1 = hotspot_type(1, cov);
    for (int k = 1; k <= 12; ++k) {
      const GridIndex g = grid_3d_index(cov, t1[k - 1]);
      CHECK(g.x == 0);
      CHECK(g.z == 0);
      CHECK(g.y + 1 == round_half_away(20.0 / 11.0 * (k - 1) + 1));
    }
    const auto t3 = hotspot_type(3, cov);
    const std::vector<int> ys = {2, 3, 4, 18, 19, 20};
    for (int i = 0; i < 12; ++i) {
      const GridIndex g = grid_3d_index(cov, t3[i]);
      CHECK(g.x == 1);
      CHECK(g.z + 1 == (i < 6 ? 8 : 10));
      CHECK(g.y + 1 == ys[i % 6]);
    }
    const auto t2 = hotspot_type(2, cov);
    for (int i = 0; i < 12; ++i) {
      const GridIndex g = grid_3d_index(cov, t2[i]);
      CHECK(g.y + 1 == (i < 6 ? 7 : 15));
    }
    CHECK_THROWS_AS(hotspot_type(4, cov), ConfigError);
    CHECK_THROWS_AS(hotspot_type(3, CoverageSpec{7.5, 52.5, -52.5, 52.5, 0, 0, 1, 21, 1}), ConfigError);
  }
}

TEST_CASE("dense layouts sit at the middle of the region" * doctest::test_suite("benchmarks")) {
  const ScenarioConfig sc = testing::preset("ref_3d_type1").scenario;
  const auto cands = build_candidate_grid(sc.ma_region);
  for (BenchmarkKind k : {BenchmarkKind::dense_ula, BenchmarkKind::dense_upa}) {
    Vec3 mean = Vec3::Zero();
    const auto pos = fpa_layout(k, sc, cands).element_positions();
    for (const Vec3& p : pos) mean += p;
    mean /= static_cast<double>(pos.size());
    CHECK(mean.y() == doctest::Approx(0.0).scale(1.0));
    CHECK(mean.z() == doctest::Approx(34.5));
  }
}
