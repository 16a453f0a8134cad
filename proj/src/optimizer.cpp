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

#include "xlma/optimizer.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "json.hpp"

#include "xlma/parallel.hpp"

namespace xlma {
namespace {

constexpr double kImprovementEps = 1e-12;

RateModel::Accumulator accumulate(const RateModel& model, std::span<const int> sites, int skip_slot = -1) {
  RateModel::Accumulator acc(model);
  for (int slot = 0; slot < static_cast<int>(sites.size()); ++slot) {
    if (slot != skip_slot) acc.add(sites[slot]);
  }
  return acc;
}

}  // namespace

LpProblem build_init_lp(const RateModel& model, std::span<const std::uint8_t> xi, int n) {
  const int rows = model.num_grids();
  const int sites = model.num_sites();
  if (xi.size() != static_cast<std::size_t>(rows) * sites) throw DomainError("visibility table has the wrong shape");
  LpProblem lp;
  lp.c = model.marginal_objective();
  lp.n_select = n;

  std::vector<int> eligible;
  const auto rho = model.rho();
  for (int k = 0; k < rows; ++k) {
    if (!(rho[k] > 0.0)) continue;
    const auto* row = xi.data() + static_cast<std::size_t>(k) * sites;
    if (std::any_of(row, row + sites, [](std::uint8_t v) { return v != 0; })) eligible.push_back(k);
  }
  std::stable_sort(eligible.begin(), eligible.end(), [&](int a, int b) { return rho[a] > rho[b]; });
  if (static_cast<int>(eligible.size()) > n) eligible.resize(n);
  std::sort(eligible.begin(), eligible.end());
  for (int k : eligible) {
    const auto* row = xi.data() + static_cast<std::size_t>(k) * sites;
    lp.coverage.emplace_back(row, row + sites);
  }
  return lp;
}

int select_victim(const RateModel& model, const SelectionState& state) {
  const int n = static_cast<int>(state.n_mu.size());
  int best = -1;
  double best_value = -std::numeric_limits<double>::infinity();
  int open = 0;
  for (int slot = 0; slot < n; ++slot) open += state.replaced[slot] ? 0 : 1;
  if (open == 0) throw DomainError("every slot has already been replaced");
  for (int slot = 0; slot < n; ++slot) {
    if (state.replaced[slot]) continue;
    if (n == 1) return slot;
    const double value = accumulate(model, state.n_mu, slot).weighted_sum_rate();
    if (value > best_value) {
      best_value = value;
      best = slot;
    }
  }
  return best;
}

Replacement best_replacement(const RateModel& model, const SelectionState& state, int slot, unsigned threads) {
  const int sites = model.num_sites();
  std::vector<std::uint8_t> taken(sites, 0);
  for (int s = 0; s < static_cast<int>(state.n_mu.size()); ++s) {
    if (s != slot) taken[state.n_mu[s]] = 1;
  }
  const RateModel::Accumulator rest = accumulate(model, state.n_mu, slot);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> value(sites, nan);
  parallel_for(static_cast<std::size_t>(sites), threads, [&](std::size_t s) {
    if (!taken[s]) value[s] = rest.weighted_sum_rate_with(static_cast<int>(s));
  });
  Replacement best;
  for (int s = 0; s < sites; ++s) {
    if (taken[s]) continue;
    if (best.site < 0 || value[s] > best.objective) {
      best.site = s;
      best.objective = value[s];
    }
  }
  return best;
}

PlacementResult successive_replacement(const RateModel& model, std::span<const std::uint8_t> xi, int n,
                                       unsigned threads) {
  if (n < 1 || n > model.num_sites()) throw ConfigError("N must lie in [1, N0]");
  PlacementResult result;
  result.lp = solve_lp(build_init_lp(model, xi, n));
  SelectionState state;
  state.n_mu = round_top_n(result.lp.x, n);
  state.replaced.assign(n, false);
  state.objective = model.weighted_sum_rate(state.n_mu);
  result.initial_objective = state.objective;

  for (int iteration = 1; iteration <= n; ++iteration) {
    if (std::all_of(state.replaced.begin(), state.replaced.end(), [](bool b) { return b; })) break;
    TraceEntry entry;
    entry.iteration = iteration;
    entry.victim_slot = select_victim(model, state);
    entry.removed_site = state.n_mu[entry.victim_slot];
    const Replacement rep = best_replacement(model, state, entry.victim_slot, threads);
    entry.chosen_site = rep.site;
    entry.objective_before = state.objective;
    entry.candidate_objective = rep.objective;
    entry.accepted = rep.objective > state.objective + kImprovementEps;
    result.trace.push_back(entry);
    if (!entry.accepted) break;
    state.n_mu[entry.victim_slot] = rep.site;
    state.replaced[entry.victim_slot] = true;
    state.objective = model.weighted_sum_rate(state.n_mu);
    ++result.accepted_steps;
  }
  result.n_mu = state.n_mu;
  result.objective = state.objective;
  result.chi = support_indicator(result.n_mu, model.num_sites());
  return result;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t f = static_cast<std::uint64_t>(n - k + i);
    if (r > kMax / f) return kMax;
    r = r * f / static_cast<std::uint64_t>(i);
  }
  return r;
}

ExhaustiveResult exhaustive_search(const RateModel& model, int n, std::uint64_t limit) {
  const int sites = model.num_sites();
  if (n < 1 || n > sites) throw ConfigError("N must lie in [1, N0]");
  const std::uint64_t count = binomial(sites, n);
  if (count > limit) {
    throw DomainError("exhaustive search refused: C(" + std::to_string(sites) + ", " + std::to_string(n) +
                      ") = " + std::to_string(count) + " combinations exceeds the limit " + std::to_string(limit));
  }
  ExhaustiveResult result;
  result.combinations = count;
  result.objective = -std::numeric_limits<double>::infinity();
  std::vector<RateModel::Accumulator> level(n + 1, RateModel::Accumulator(model));
  std::vector<int> current(n);

  auto descend = [&](auto&& self, int depth, int start) -> void {
    if (depth == n) {
      const double value = level[n].weighted_sum_rate();
      if (value > result.objective) {
        result.objective = value;
        result.support = current;
      }
      return;
    }
    for (int s = start; s <= sites - (n - depth); ++s) {
      current[depth] = s;
      level[depth + 1] = level[depth];
      level[depth + 1].add(s);
      self(self, depth + 1, s + 1);
    }
  };
  descend(descend, 0, 0);
  return result;
}

Eigen::MatrixXi placement_matrix(std::span<const int> n_mu, int num_sites) {
  Eigen::MatrixXi phi = Eigen::MatrixXi::Zero(static_cast<int>(n_mu.size()), num_sites);
  for (int slot = 0; slot < static_cast<int>(n_mu.size()); ++slot) {
    if (n_mu[slot] < 0 || n_mu[slot] >= num_sites) throw DomainError("placement index out of range");
    phi(slot, n_mu[slot]) = 1;
  }
  return phi;
}

std::vector<std::uint8_t> support_indicator(std::span<const int> n_mu, int num_sites) {
  std::vector<std::uint8_t> chi(num_sites, 0);
  for (int s : n_mu) {
    if (s < 0 || s >= num_sites) throw DomainError("placement index out of range");
    chi[s] = 1;
  }
  return chi;
}

bool placement_matrix_valid(const Eigen::MatrixXi& phi) {
  if ((phi.array() != 0 && phi.array() != 1).any()) return false;
  if ((phi.rowwise().sum().array() != 1).any()) return false;
  return (phi.colwise().sum().array() <= 1).all();
}

void write_trace_jsonl(std::ostream& os, std::span<const TraceEntry> trace) {
  for (const TraceEntry& t : trace) {
    nlohmann::json j = {{"iteration", t.iteration},
                        {"victim_slot", t.victim_slot},
                        {"removed_site", t.removed_site},
                        {"chosen_site", t.chosen_site},
                        {"objective_before", t.objective_before},
                        {"candidate_objective", t.candidate_objective},
                        {"accepted", t.accepted}};
    os << j.dump() << '\n';
  }
}

}  // namespace xlma
