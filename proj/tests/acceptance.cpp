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

// Acceptance driver: one PASS / FAIL / SKIP line per criterion.
//   xlma_acceptance [--only N]... [--long] [--threads T]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "lp_oracle.hpp"
#include "xlma/benchmarks.hpp"
#include "xlma/commands.hpp"
#include "xlma/montecarlo.hpp"
#include "xlma/optimizer.hpp"
#include "xlma/rng.hpp"
#include "xlma/system_model.hpp"

using namespace xlma;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict = Verdict::fail;
  std::string detail;
};

unsigned g_threads = 0;
bool g_long = false;

struct Run {
  std::string label;
  PlacementResult result;
  int n = 0;
};
std::vector<Run> g_runs;

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

PlacementResult place(const ScenarioModel& model, const std::string& label) {
  PlacementResult r = successive_replacement(model.candidate_model(), model.candidate_gains().xi,
                                             model.config().num_subarrays, model.threads());
  g_runs.push_back({label, r, model.config().num_subarrays});
  return r;
}

// Strictly increasing over accepted steps, at most N iterations. After an
// accepted step the optimizer re-evaluates the new support from scratch, so
// the next objective may differ from the candidate value by rounding.
bool trace_ok(const Run& run, std::string& why) {
  const PlacementResult& r = run.result;
  if (static_cast<int>(r.trace.size()) > run.n || r.accepted_steps > run.n) {
    why = run.label + ": " + std::to_string(r.trace.size()) + " iterations";
    return false;
  }
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
  double current = r.initial_objective;
  int accepted = 0;
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const TraceEntry& t = r.trace[i];
    if (t.objective_before != current) {
      why = run.label + ": trace objective out of step at iteration " + std::to_string(i);
      return false;
    }
    if (!t.accepted) continue;
    const double next = i + 1 < r.trace.size() ? r.trace[i + 1].objective_before : r.objective;
    if (!(next > current) || !near(next, t.candidate_objective)) {
      why = run.label + ": accepted step " + std::to_string(i) + " did not improve the objective";
      return false;
    }
    current = next;
    ++accepted;
  }
  if (accepted != r.accepted_steps || current != r.objective) {
    why = run.label + ": final objective does not match the trace";
    return false;
  }
  return true;
}

// 1. Closed-form channel moments against Monte Carlo.
Outcome moments() {
  const ScenarioConfig sc = testing::oracle_scenario();
  const GainTables gains = testing::oracle_gains(sc);
  const int m = sc.subarray.size();
  const int sites = gains.num_sites;
  const int grids = gains.num_grids;
  std::vector<int> all(sites);
  for (int s = 0; s < sites; ++s) all[s] = s;
  const ArrayLayout layout = ArrayLayout::from_candidates(all, build_candidate_grid(sc.ma_region), sc.subarray);
  const ChannelSampler sampler(layout, gains, sc.wavelength);

  const int trials = 100000;
  const std::size_t pairs = static_cast<std::size_t>(grids) * grids * sites;
  // running sums of ||h||^2, ||h||^4, ||h||^8 per (grid, site)
  std::vector<double> s2(grids * sites), s4(grids * sites), s8(grids * sites);
  std::vector<double> c1(pairs), c2(pairs);
  RngStream rng(sc.rng_seed, "acceptance-moments");
  std::vector<Eigen::VectorXcd> cols(grids, Eigen::VectorXcd(layout.total_antennas()));
  for (int t = 0; t < trials; ++t) {
    for (int g = 0; g < grids; ++g) sampler.sample_column(g, rng, cols[g]);
    for (int s = 0; s < sites; ++s) {
      for (int k = 0; k < grids; ++k) {
        const double n2 = cols[k].segment(s * m, m).squaredNorm();
        s2[k * sites + s] += n2;
        s4[k * sites + s] += n2 * n2;
        s8[k * sites + s] += n2 * n2 * n2 * n2;
        for (int i = 0; i < grids; ++i) {
          if (i == k) continue;
          const double x = std::norm(cols[k].segment(s * m, m).dot(cols[i].segment(s * m, m)));
          c1[(static_cast<std::size_t>(k) * grids + i) * sites + s] += x;
          c2[(static_cast<std::size_t>(k) * grids + i) * sites + s] += x * x;
        }
      }
    }
  }
  int checked = 0, failed = 0;
  double worst = 0.0;
  auto compare = [&](double sum, double sum_sq, double expected) {
    const double mean = sum / trials;
    const double var = std::max(0.0, sum_sq / trials - mean * mean);
    const double se = std::sqrt(var / (trials - 1));
    const double z = se > 0 ? std::abs(mean - expected) / se : (mean == expected ? 0.0 : 1e9);
    worst = std::max(worst, z);
    ++checked;
    if (z > 3.0) ++failed;
  };
  for (int k = 0; k < grids; ++k) {
    for (int s = 0; s < sites; ++s) {
      const std::size_t a = gains.at(k, s);
      const LinkGain lk{gains.beta_los[a], gains.beta_nlos[a], gains.xi[a] != 0};
      compare(s2[k * sites + s], s4[k * sites + s], moment_power(lk, m));
      compare(s4[k * sites + s], s8[k * sites + s], moment_fourth(lk, m));
      for (int i = 0; i < grids; ++i) {
        if (i == k) continue;
        const std::size_t b = gains.at(i, s);
        const LinkGain li{gains.beta_los[b], gains.beta_nlos[b], gains.xi[b] != 0};
        const double phi = fejer_correlation(gains.u[a], gains.u[b], sc.subarray, sc.wavelength);
        const std::size_t idx = (static_cast<std::size_t>(k) * grids + i) * sites + s;
        compare(c1[idx], c2[idx], moment_cross(lk, li, phi, m));
      }
    }
  }
  return {failed == 0 ? Verdict::pass : Verdict::fail,
          std::to_string(checked) + " moments, " + std::to_string(failed) + " beyond 3 SE, worst " + fmt(worst) +
              " SE"};
}

// 2. Closed-form rate against simulated MRC across subarray widths.
Outcome tightness() {
  const LoadedConfig base = testing::preset("desk_full_los");
  double worst = 0.0;
  std::string where;
  for (int mh : {2, 4, 8}) {
    LoadedConfig cfg = apply_sweep_value(base, "m_h", mh);
    cfg.run.trials = 2000;
    const ScenarioModel model(cfg.scenario, g_threads);
    place(model, "desk_full_los m_h=" + std::to_string(mh));
    for (const char* scheme : {"proposed", "horizontal_sparse", "dense_ula"}) {
      const SchemeLayout sl = resolve_scheme(model, scheme, cfg.run.exhaustive_limit);
      const LayoutEvaluation ev = evaluate_layout(model, sl.layout, true, false, cfg.run, g_threads);
      const double rel = std::abs(ev.approx_mrc - ev.sim_mrc.estimate) / ev.sim_mrc.estimate;
      if (rel > worst) {
        worst = rel;
        where = std::string(scheme) + " m_h=" + std::to_string(mh) + " (" + fmt(ev.approx_mrc) + " vs " +
                fmt(ev.sim_mrc.estimate) + ")";
      }
    }
  }
  return {worst <= 0.15 ? Verdict::pass : Verdict::fail, "worst relative gap " + fmt(worst) + " at " + where};
}

// 3. Successive replacement against exhaustive search.
Outcome near_optimality() {
  int close = 0;
  double worst = 1.0;
  for (int i = 0; i < 20; ++i) {
    const ScenarioConfig sc = testing::random_scenario(1000 + i, 20, 3, 10);
    const ScenarioModel model(sc, g_threads);
    const PlacementResult r = place(model, "random " + std::to_string(i));
    const ExhaustiveResult ex = exhaustive_search(model.candidate_model(), sc.num_subarrays);
    const double ratio = ex.objective > 0 ? r.objective / ex.objective : 1.0;
    worst = std::min(worst, ratio);
    if (ratio >= 0.99) ++close;
  }
  const bool ok = worst >= 0.95 && close >= 15;
  return {ok ? Verdict::pass : Verdict::fail,
          "worst ratio " + fmt(worst, 6) + ", " + std::to_string(close) + "/20 within 1%"};
}

// 4. Proposed placement against every fixed-position baseline.
Outcome dominance() {
  LoadedConfig cfg = testing::preset("desk_full_los");
  const ScenarioModel model(cfg.scenario, g_threads);
  place(model, "desk_full_los");
  const SchemeLayout prop = resolve_scheme(model, "proposed", cfg.run.exhaustive_limit);
  const LayoutEvaluation pe = evaluate_layout(model, prop.layout, false, true, cfg.run, g_threads);
  bool ok = true;
  std::string detail = "proposed " + fmt(pe.approx_mrc) + " / mmse " + fmt(pe.sim_mmse.estimate);
  int compared = 0;
  for (BenchmarkKind kind : kAllBenchmarks) {
    const SchemeLayout sl = resolve_scheme(model, std::string(to_string(kind)), cfg.run.exhaustive_limit);
    if (!sl.skipped.empty()) continue;
    const LayoutEvaluation be = evaluate_layout(model, sl.layout, false, true, cfg.run, g_threads);
    const double se = std::hypot(pe.sim_mmse.std_error, be.sim_mmse.std_error);
    const bool closed_ok = pe.approx_mrc >= be.approx_mrc;
    const bool mmse_ok = pe.sim_mmse.estimate >= be.sim_mmse.estimate - 2.0 * se;
    ok = ok && closed_ok && mmse_ok;
    ++compared;
    detail += "; " + std::string(to_string(kind)) + " " + fmt(be.approx_mrc) + " / " + fmt(be.sim_mmse.estimate) +
              (closed_ok && mmse_ok ? "" : " (!)");
  }
  return {ok && compared > 0 ? Verdict::pass : Verdict::fail, detail};
}

// 5. Single pure-LoS grid: every trial equals the closed form.
Outcome exactness() {
  LoadedConfig cfg = testing::preset("desk_full_los");
  ScenarioConfig& sc = cfg.scenario;
  sc.rician = RicianFactor::pure();
  sc.distribution.rho.assign(sc.num_grids(), 0.0);
  sc.distribution.rho[17] = 1.0;
  sc.distribution.expected_users = 1.0;
  const ScenarioModel model(sc, g_threads);
  const std::vector<int> sites = {3, 40, 41, 90};
  const ArrayLayout layout = model.placement_layout(sites);
  const GainTables gains = model.layout_gains(layout);
  const RateModel rm = model.layout_model(layout, gains);
  std::vector<int> all(layout.elements.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  const double closed = rm.weighted_sum_rate(all);
  const ChannelSampler sampler(layout, gains, sc.wavelength);
  SimOptions opt;
  opt.trials = 1000;
  opt.seed = 5;
  opt.threads = g_threads;
  opt.keep_trials = true;
  const SimReport rep = simulate(sampler, model.active_rho(), model.active_snr(), opt);
  double worst = 0.0;
  for (double v : rep.mrc_trials) worst = std::max(worst, std::abs(v - closed));
  const bool ok = worst < 1e-9 && rep.mrc.std_error < 1e-12;
  return {ok ? Verdict::pass : Verdict::fail,
          "rate " + fmt(closed, 10) + ", max error " + fmt(worst, 3) + ", se " + fmt(rep.mrc.std_error, 3)};
}

// 6. Every optimizer run so far, plus the desk presets and random instances.
Outcome monotone() {
  for (const char* name : {"desk_full_los", "desk_partial_los", "desk_3d"}) {
    const LoadedConfig cfg = testing::preset(name);
    const ScenarioModel model(cfg.scenario, g_threads);
    place(model, name);
  }
  for (int i = 0; i < 20; ++i) {
    const ScenarioModel model(testing::random_scenario(5000 + i, 40, 5, 12), g_threads);
    place(model, "random n0=40 " + std::to_string(i));
  }
  int accepted = 0;
  for (const Run& r : g_runs) {
    std::string why;
    if (!trace_ok(r, why)) return {Verdict::fail, why};
    accepted += r.result.accepted_steps;
  }
  return {Verdict::pass, std::to_string(g_runs.size()) + " runs, " + std::to_string(accepted) + " accepted steps"};
}

// 7. MMSE >= MRC per realization and the simulated MMSE under the bound.
Outcome mmse_structure() {
  std::string detail;
  bool ok = true;
  for (const char* name : {"desk_full_los", "desk_partial_los"}) {
    LoadedConfig cfg = testing::preset(name);
    cfg.run.trials = 1000;
    const ScenarioModel model(cfg.scenario, g_threads);
    const SchemeLayout sl = resolve_scheme(model, "proposed", cfg.run.exhaustive_limit);
    const LayoutEvaluation ev = evaluate_layout(model, sl.layout, true, true, cfg.run, g_threads);
    const bool gap_ok = ev.min_mmse_gap >= -1e-9;
    const bool bound_ok = ev.sim_mmse.estimate <= ev.upper_bound + 3.0 * ev.sim_mmse.std_error;
    ok = ok && gap_ok && bound_ok;
    if (!detail.empty()) detail += "; ";
    detail += std::string(name) + ": min gap " + fmt(ev.min_mmse_gap, 3) + ", mmse " + fmt(ev.sim_mmse.estimate) +
              " <= bound " + fmt(ev.upper_bound);
  }
  return {ok ? Verdict::pass : Verdict::fail, detail};
}

// 8. Sampled visibility against a dense oracle; monotone in the obstacle set.
Outcome visibility() {
  const ScenarioConfig sc = testing::preset("ref_partial_los").scenario;
  const auto cands = build_candidate_grid(sc.ma_region);
  const auto coarse = compute_los_visibility(cands, sc.coverage, sc.obstacles, 20, sc.rng_seed, g_threads);
  const auto dense = compute_los_visibility(cands, sc.coverage, sc.obstacles, 1000, sc.rng_seed + 1, g_threads);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < coarse.size(); ++i) agree += coarse[i] == dense[i];
  const double frac = static_cast<double>(agree) / coarse.size();

  std::vector<Obstacle> more = sc.obstacles;
  more.push_back({Vec3(20, 10, 5), Vec3(4, 6, 10)});
  const auto blocked = compute_los_visibility(cands, sc.coverage, more, 20, sc.rng_seed, g_threads);
  std::size_t violations = 0, lost = 0;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    if (blocked[i] > coarse[i]) ++violations;
    if (blocked[i] < coarse[i]) ++lost;
  }
  const bool ok = frac >= 0.99 && violations == 0 && lost > 0;
  return {ok ? Verdict::pass : Verdict::fail, "agreement " + fmt(100 * frac, 6) + "%, " + std::to_string(violations) +
                                                  " monotonicity violations, " + std::to_string(lost) +
                                                  " links lost to the extra obstacle"};
}

// 9. LP solver against dual vertex enumeration.
Outcome lp() {
  std::mt19937_64 eng(99);
  double worst = 0.0;
  bool deterministic = true;
  for (int t = 0; t < 50; ++t) {
    const LpProblem p = testing::random_lp(eng, 20);
    const LpSolution s = solve_lp(p);
    worst = std::max(worst, std::abs(s.objective - testing::dual_vertex_optimum(p)));
    const LpSolution again = solve_lp(p);
    deterministic = deterministic && again.x == s.x && again.objective == s.objective;
  }
  const bool ok = worst <= 1e-8 && deterministic;
  return {ok ? Verdict::pass : Verdict::fail,
          "max objective error " + fmt(worst, 3) + (deterministic ? ", deterministic" : ", NOT deterministic")};
}

// 10. Full-scale presets run to completion.
Outcome full_scale() {
  if (!g_long) return {Verdict::skip, "long-running; pass --long"};
  std::string detail;
  for (const char* name : {"ref_3d_type1", "ref_3d_type2", "ref_3d_type3"}) {
    LoadedConfig cfg = testing::preset(name);
    cfg.run.trials = 1000;
    const ScenarioModel model(cfg.scenario, g_threads);
    const PlacementResult r = place(model, name);
    const ArrayLayout layout = model.placement_layout(r.n_mu);
    const LayoutEvaluation ev = evaluate_layout(model, layout, true, true, cfg.run, g_threads);
    std::string why;
    if (!trace_ok(g_runs.back(), why) || !std::isfinite(ev.sim_mmse.estimate)) {
      return {Verdict::fail, std::string(name) + ": " + why};
    }
    if (!detail.empty()) detail += "; ";
    detail += std::string(name) + " " + fmt(r.objective) + " / mrc " + fmt(ev.sim_mrc.estimate) + " / mmse " +
              fmt(ev.sim_mmse.estimate);
  }
  return {Verdict::pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only.insert(std::stoi(argv[++i]));
    } else if (a == "--long") {
      g_long = true;
    } else if (a == "--threads" && i + 1 < argc) {
      g_threads = static_cast<unsigned>(std::stoul(argv[++i]));
    } else {
      std::cerr << "usage: xlma_acceptance [--only N]... [--long] [--threads T]\n";
      return 2;
    }
  }

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"moment identities", moments},
      {"closed form vs simulated MRC", tightness},
      {"near-optimality vs exhaustive search", near_optimality},
      {"benchmark dominance", dominance},
      {"single-grid exactness", exactness},
      {"monotone optimizer trace", monotone},
      {"MMSE dominance and upper bound", mmse_structure},
      {"visibility sampling", visibility},
      {"LP solver vs vertex enumeration", lp},
      {"full-scale presets", full_scale},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {Verdict::fail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::skip ? "SKIP" : "FAIL";
    if (o.verdict == Verdict::fail) ++failures;
    std::printf("%s %2d %s: %s [%.1fs]\n", tag, id, criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
