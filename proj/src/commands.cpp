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

#include "xlma/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "xlma/benchmarks.hpp"
#include "xlma/maps.hpp"
#include "xlma/parallel.hpp"

namespace xlma {
namespace {

using nlohmann::json;

const std::vector<std::string> kSchemes = {"proposed",        "optimal",   "sparse_2x4", "horizontal_sparse",
                                           "vertical_sparse", "dense_ula", "dense_upa"};
const std::vector<std::string> kEvaluators = {"approx_mrc", "sim_mrc", "sim_mmse", "upper_bound"};
const std::vector<std::string> kParameters = {"m_h", "ma_width", "expected_users", "rician_db"};

int guarded(std::ostream& log, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const json::type_error& e) {
    log << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string value_label(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_double(v.get<double>());
  return v.dump();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

GainTables subset(const GainTables& t, const std::vector<int>& rows, const std::vector<int>& sites) {
  GainTables s;
  s.num_grids = static_cast<int>(rows.size());
  s.num_sites = static_cast<int>(sites.size());
  for (int r : rows) {
    s.grid_ids.push_back(t.grid_ids[r]);
    for (int n : sites) {
      const std::size_t i = t.at(r, n);
      s.u.push_back(t.u[i]);
      s.beta_los.push_back(t.beta_los[i]);
      s.beta_nlos.push_back(t.beta_nlos[i]);
      s.beta_total.push_back(t.beta_total[i]);
      s.xi.push_back(t.xi[i]);
    }
  }
  return s;
}

std::vector<int> spread_indices(int count, int want) {
  std::vector<int> out;
  if (count <= 0) return out;
  want = std::min(want, count);
  for (int i = 0; i < want; ++i) {
    const int idx = want == 1 ? 0 : static_cast<int>(static_cast<long long>(i) * (count - 1) / (want - 1));
    if (out.empty() || out.back() != idx) out.push_back(idx);
  }
  return out;
}

}  // namespace

json plan_document(const ScenarioModel& model, const PlacementResult& r) {
  const ScenarioConfig& sc = model.config();
  json doc;
  doc["num_candidates"] = sc.num_candidates();
  doc["num_grids"] = sc.num_grids();
  doc["active_grids"] = model.active_grids().size();
  doc["num_subarrays"] = sc.num_subarrays;
  doc["n_mu"] = r.n_mu;
  json chi = json::array();
  for (auto v : r.chi) chi.push_back(static_cast<int>(v));
  doc["chi"] = chi;
  json rows = json::array();
  for (std::size_t slot = 0; slot < r.n_mu.size(); ++slot) {
    rows.push_back({{"slot", slot}, {"candidate", r.n_mu[slot]}, {"position", vec_json(model.candidates()[r.n_mu[slot]])}});
  }
  doc["phi_rows"] = rows;
  doc["objective"] = r.objective;
  doc["initial_objective"] = r.initial_objective;
  doc["upper_bound"] = model.candidate_model().weighted_upper_bound(r.n_mu);
  doc["accepted_steps"] = r.accepted_steps;
  doc["lp"] = {{"objective", r.lp.objective},
               {"pivots", r.lp.pivots},
               {"primal_residual", r.lp.primal_residual},
               {"slackness_residual", r.lp.slackness_residual},
               {"penalty_fallback", r.lp.penalty_fallback}};
  json trace = json::array();
  for (const TraceEntry& t : r.trace) {
    trace.push_back({{"iteration", t.iteration},
                     {"victim_slot", t.victim_slot},
                     {"removed_site", t.removed_site},
                     {"chosen_site", t.chosen_site},
                     {"objective_before", t.objective_before},
                     {"candidate_objective", t.candidate_objective},
                     {"accepted", t.accepted}});
  }
  doc["trace"] = trace;
  return doc;
}

SchemeLayout resolve_scheme(const ScenarioModel& model, const std::string& scheme, std::uint64_t exhaustive_limit) {
  SchemeLayout out;
  out.scheme = scheme;
  const ScenarioConfig& sc = model.config();
  if (scheme == "proposed") {
    const PlacementResult r =
        successive_replacement(model.candidate_model(), model.candidate_gains().xi, sc.num_subarrays, model.threads());
    out.sites = r.n_mu;
  } else if (scheme == "optimal") {
    try {
      out.sites = exhaustive_search(model.candidate_model(), sc.num_subarrays, exhaustive_limit).support;
    } catch (const DomainError& e) {
      out.skipped = e.what();
      return out;
    }
  } else {
    const auto kind = parse_benchmark(scheme);
    if (!kind) throw ConfigError("unknown scheme '" + scheme + "'");
    out.skipped = benchmark_unavailable(*kind, sc);
    if (!out.skipped.empty()) return out;
    out.layout = fpa_layout(*kind, sc, model.candidates());
    if (*kind != BenchmarkKind::dense_ula && *kind != BenchmarkKind::dense_upa) out.sites = sparse_indices(*kind, sc);
    return out;
  }
  out.layout = model.placement_layout(out.sites);
  return out;
}

LayoutEvaluation evaluate_layout(const ScenarioModel& model, const ArrayLayout& layout, bool simulate_mrc,
                                 bool simulate_mmse, const RunSettings& run, unsigned threads) {
  LayoutEvaluation ev;
  const GainTables gains = model.layout_gains(layout);
  const RateModel rm = model.layout_model(layout, gains);
  std::vector<int> all(layout.elements.size());
  std::iota(all.begin(), all.end(), 0);
  ev.approx_mrc = rm.weighted_sum_rate(all);
  ev.upper_bound = rm.weighted_upper_bound(all);
  if (simulate_mrc || simulate_mmse) {
    const ChannelSampler sampler(layout, gains, model.config().wavelength);
    SimOptions opt;
    opt.trials = run.trials;
    opt.seed = run.sim_seed;
    opt.mrc = simulate_mrc;
    opt.mmse = simulate_mmse;
    opt.threads = threads;
    const SimReport rep = simulate(sampler, model.active_rho(), model.active_snr(), opt);
    ev.sim_mrc = rep.mrc;
    ev.sim_mmse = rep.mmse;
    ev.min_mmse_gap = rep.min_mmse_gap;
  }
  return ev;
}

SweepSpec parse_sweep(const json& doc) {
  if (!doc.is_object()) throw ConfigError("sweep spec must be an object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() != "parameter" && it.key() != "values" && it.key() != "schemes" && it.key() != "evaluators") {
      throw ConfigError("unknown sweep field '" + it.key() + "'");
    }
  }
  SweepSpec s;
  if (!doc.contains("parameter") || !doc.at("parameter").is_string()) {
    throw ConfigError("sweep field 'parameter' must be one of m_h, ma_width, expected_users, rician_db");
  }
  s.parameter = doc.at("parameter").get<std::string>();
  if (std::find(kParameters.begin(), kParameters.end(), s.parameter) == kParameters.end()) {
    throw ConfigError("sweep field 'parameter' must be one of m_h, ma_width, expected_users, rician_db");
  }
  if (!doc.contains("values") || !doc.at("values").is_array() || doc.at("values").empty()) {
    throw ConfigError("sweep field 'values' must be a nonempty list");
  }
  for (const json& v : doc.at("values")) s.values.push_back(v);
  if (!doc.contains("schemes") || !doc.at("schemes").is_array() || doc.at("schemes").empty()) {
    throw ConfigError("sweep field 'schemes' must be a nonempty list");
  }
  for (const json& v : doc.at("schemes")) {
    if (!v.is_string() || std::find(kSchemes.begin(), kSchemes.end(), v.get<std::string>()) == kSchemes.end()) {
      throw ConfigError("unknown scheme " + v.dump() + " in sweep field 'schemes'");
    }
    s.schemes.push_back(v.get<std::string>());
  }
  const json ev = doc.value("evaluators", json::array({"approx_mrc"}));
  if (!ev.is_array() || ev.empty()) throw ConfigError("sweep field 'evaluators' must be a nonempty list");
  for (const json& v : ev) {
    if (!v.is_string() || std::find(kEvaluators.begin(), kEvaluators.end(), v.get<std::string>()) == kEvaluators.end()) {
      throw ConfigError("unknown evaluator " + v.dump() + " in sweep field 'evaluators'");
    }
    s.evaluators.push_back(v.get<std::string>());
  }
  return s;
}

LoadedConfig apply_sweep_value(const LoadedConfig& base, const std::string& parameter, const json& value) {
  LoadedConfig cfg = base;
  ScenarioConfig& sc = cfg.scenario;
  auto need_number = [&]() {
    if (!value.is_number()) throw ConfigError("sweep value " + value.dump() + " for " + parameter + " is not a number");
    return value.get<double>();
  };
  if (parameter.empty()) return cfg;
  if (parameter == "m_h") {
    if (!value.is_number_integer() || value.get<int>() < 1) throw ConfigError("m_h sweep values must be positive integers");
    sc.subarray.m_h = value.get<int>();
  } else if (parameter == "ma_width") {
    const double w = need_number();
    if (!(w > 0.0)) throw ConfigError("ma_width sweep values must be positive");
    if (sc.ma_region.y_max <= sc.ma_region.y_min) throw ConfigError("ma_width sweep needs a non-degenerate y axis");
    const double step = sc.ma_region.step_y();
    const double center = 0.5 * (sc.ma_region.y_min + sc.ma_region.y_max);
    const int n = std::max(1, static_cast<int>(round_half_away(w / step)));
    sc.ma_region.n_y = n;
    sc.ma_region.y_min = center - 0.5 * n * step;
    sc.ma_region.y_max = center + 0.5 * n * step;
  } else if (parameter == "expected_users") {
    if (cfg.explicit_rho) throw ConfigError("expected_users sweep needs hotspot sets, not an explicit rho");
    sc.distribution.expected_users = need_number();
    reassign_probabilities(sc);
  } else if (parameter == "rician_db") {
    if (value.is_string() && value.get<std::string>() == "infinite") {
      sc.rician = RicianFactor::pure();
    } else {
      sc.rician = RicianFactor::from_db(need_number());
    }
  } else {
    throw ConfigError("unknown sweep parameter '" + parameter + "'");
  }
  sc.validate();
  return cfg;
}

std::vector<SweepRow> run_sweep(const LoadedConfig& base, const SweepSpec& spec, unsigned threads) {
  if (spec.schemes.empty()) throw ConfigError("sweep needs at least one scheme");
  if (spec.evaluators.empty()) throw ConfigError("sweep needs at least one evaluator");
  const std::vector<json> values = spec.values.empty() ? std::vector<json>{json("base")} : spec.values;
  const bool want_mrc = std::count(spec.evaluators.begin(), spec.evaluators.end(), "sim_mrc") > 0;
  const bool want_mmse = std::count(spec.evaluators.begin(), spec.evaluators.end(), "sim_mmse") > 0;

  struct Cell {
    std::size_t value;
    std::string scheme;
    std::string skipped;
    LayoutEvaluation ev;
  };
  std::vector<std::unique_ptr<ScenarioModel>> models(values.size());
  std::vector<LoadedConfig> configs(values.size());
  std::vector<std::string> value_error(values.size());
  for (std::size_t v = 0; v < values.size(); ++v) {
    try {
      configs[v] = apply_sweep_value(base, spec.parameter, values[v]);
      models[v] = std::make_unique<ScenarioModel>(configs[v].scenario, threads);
    } catch (const ConfigError& e) {
      value_error[v] = e.what();
    }
  }
  std::vector<Cell> cells;
  for (std::size_t v = 0; v < values.size(); ++v) {
    for (const std::string& s : spec.schemes) cells.push_back({v, s, value_error[v], {}});
  }
  const unsigned inner = cells.size() > 1 ? 1u : threads;
  parallel_for(cells.size(), cells.size() > 1 ? threads : 1u, [&](std::size_t i) {
    Cell& c = cells[i];
    if (!c.skipped.empty()) return;
    const ScenarioModel& model = *models[c.value];
    const SchemeLayout sl = resolve_scheme(model, c.scheme, configs[c.value].run.exhaustive_limit);
    if (!sl.skipped.empty()) {
      c.skipped = sl.skipped;
      return;
    }
    c.ev = evaluate_layout(model, sl.layout, want_mrc, want_mmse, configs[c.value].run, inner);
  });

  std::vector<SweepRow> rows;
  for (const std::string& evaluator : spec.evaluators) {
    for (const Cell& c : cells) {
      SweepRow row;
      row.value = value_label(values[c.value]);
      row.scheme = c.scheme;
      row.evaluator = evaluator;
      if (!c.skipped.empty()) {
        row.status = "skipped: " + c.skipped;
      } else {
        row.status = "ok";
        if (evaluator == "approx_mrc") {
          row.rate = c.ev.approx_mrc;
        } else if (evaluator == "upper_bound") {
          row.rate = c.ev.upper_bound;
        } else if (evaluator == "sim_mrc") {
          row.rate = c.ev.sim_mrc.estimate;
          row.std_error = c.ev.sim_mrc.std_error;
        } else {
          row.rate = c.ev.sim_mmse.estimate;
          row.std_error = c.ev.sim_mmse.std_error;
        }
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "value,scheme,evaluator,rate,stderr,status\n";
  for (const SweepRow& r : rows) {
    os << csv_field(r.value) << ',' << csv_field(r.scheme) << ',' << csv_field(r.evaluator) << ','
       << (r.rate ? format_double(*r.rate) : "") << ',' << (r.std_error ? format_double(*r.std_error) : "") << ','
       << csv_field(r.status) << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& is) {
  std::vector<SweepRow> rows;
  std::string line;
  if (!std::getline(is, line)) return rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 6) throw std::runtime_error("malformed sweep row: " + line);
    SweepRow r;
    r.value = f[0];
    r.scheme = f[1];
    r.evaluator = f[2];
    if (!f[3].empty()) r.rate = std::stod(f[3]);
    if (!f[4].empty()) r.std_error = std::stod(f[4]);
    r.status = f[5];
    rows.push_back(r);
  }
  return rows;
}

std::vector<CheckResult> run_validation(const LoadedConfig& config, unsigned threads, bool corrupt_kernels) {
  std::vector<CheckResult> checks;
  auto add = [&](std::string name, bool pass, std::string detail) {
    checks.push_back({std::move(name), pass, std::move(detail)});
  };
  std::ostringstream msg;
  auto fmt = [](double v) {
    std::ostringstream s;
    s << std::setprecision(4) << v;
    return s.str();
  };

  const ScenarioModel model(config.scenario, threads);
  const ScenarioConfig& sc = model.config();
  const SubarrayGeometry& geo = sc.subarray;
  const int m = geo.size();
  const GainTables& gains = model.candidate_gains();

  {
    double sum = 0.0;
    bool in_range = true;
    for (double r : sc.distribution.rho) {
      sum += r;
      in_range = in_range && r >= 0.0 && r <= 1.0;
    }
    const double err = std::abs(sum - sc.distribution.expected_users);
    add("probabilities", in_range && err <= 1e-9, "|sum rho - K| = " + fmt(err));
  }

  {
    std::mt19937_64 eng(derive_seed(sc.rng_seed, "validate-fejer"));
    std::uniform_int_distribution<std::size_t> pick(0, gains.u.empty() ? 0 : gains.u.size() - 1);
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 200 && !gains.u.empty(); ++trial) {
      const Vec3& a = gains.u[pick(eng)];
      const Vec3& b = gains.u[pick(eng)];
      const double ab = fejer_correlation(a, b, geo, sc.wavelength);
      const double ba = fejer_correlation(b, a, geo, sc.wavelength);
      const double aa = fejer_correlation(a, a, geo, sc.wavelength);
      worst = std::max(worst, std::abs(ab - ba));
      ok = ok && std::abs(ab - ba) <= 1e-9 * m * m && ab <= m * m * (1 + 1e-12) && ab >= 0.0 && aa == m * m;
    }
    const SubarrayGeometry single{1, 1, geo.d_h, geo.d_v};
    ok = ok && fejer_correlation(Vec3(1, 0, 0), Vec3(0, 1, 0), single, sc.wavelength) == 1.0;
    add("fejer_limits", ok, "max asymmetry " + fmt(worst));
  }

  {
    std::mt19937_64 eng(derive_seed(sc.rng_seed, "validate-selection"));
    const int n0 = sc.num_candidates();
    bool ok = true;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<int> all(n0);
      std::iota(all.begin(), all.end(), 0);
      std::shuffle(all.begin(), all.end(), eng);
      all.resize(sc.num_subarrays);
      const Eigen::MatrixXi phi = placement_matrix(all, n0);
      const std::vector<std::uint8_t> chi = support_indicator(all, n0);
      Eigen::MatrixXi diag = Eigen::MatrixXi::Zero(n0, n0);
      for (int j = 0; j < n0; ++j) diag(j, j) = chi[j];
      ok = ok && placement_matrix_valid(phi) && (phi.transpose() * phi) == diag;
    }
    add("selection_identity", ok, "Phi^T Phi = diag(chi) on 20 random placements");
  }

  const std::vector<int> rows = spread_indices(gains.num_grids, 3);
  const std::vector<int> sites = spread_indices(gains.num_sites, 3);
  if (rows.empty()) {
    add("moments", true, "no grid with positive rho; nothing to check");
  } else {
    const GainTables sub = subset(gains, rows, sites);
    KernelTables kt = *build_kernel_tables(sub, geo, sc.wavelength);
    if (corrupt_kernels) {
      for (double& v : kt.phi) v *= 1.5;
      for (double& v : kt.q) v *= 1.5;
      for (double& v : kt.f) v = 1.5 * v + 0.5 * m;
    }
    const int trials = 20000;
    bool ok = true;
    double worst_sigma = 0.0;
    double worst_identity = 0.0;
    for (int s = 0; s < sub.num_sites; ++s) {
      const GainTables one = subset(sub, [&] {
        std::vector<int> r(sub.num_grids);
        std::iota(r.begin(), r.end(), 0);
        return r;
      }(), {s});
      ArrayLayout layout;
      layout.elements.push_back({model.candidates()[sites[s]], geo});
      const ChannelSampler sampler(layout, one, sc.wavelength);
      const int g = one.num_grids;
      std::vector<double> p_sum(g, 0.0), p_sq(g, 0.0), f_sum(g, 0.0), f_sq(g, 0.0);
      std::vector<double> c_sum(g * g, 0.0), c_sq(g * g, 0.0);
      const std::vector<std::uint8_t> alpha(g, 1);
      RngStream rng(sc.rng_seed, "validate-moments", static_cast<std::uint64_t>(s));
      for (int t = 0; t < trials; ++t) {
        const ChannelRealization r = sampler.sample(alpha, rng);
        for (int k = 0; k < g; ++k) {
          const double n2 = r.H.col(k).squaredNorm();
          p_sum[k] += n2;
          p_sq[k] += n2 * n2;
          f_sum[k] += n2 * n2;
          f_sq[k] += n2 * n2 * n2 * n2;
          for (int i = 0; i < g; ++i) {
            if (i == k) continue;
            const double c = std::norm(r.H.col(k).dot(r.H.col(i)));
            c_sum[k * g + i] += c;
            c_sq[k * g + i] += c * c;
          }
        }
      }
      auto test = [&](double sum, double sq, double predicted, double direct) {
        const double mean = sum / trials;
        const double var = std::max(0.0, sq / trials - mean * mean);
        const double se = std::sqrt(var / (trials - 1));
        const double dev = std::abs(mean - predicted);
        const double scale = std::max(std::abs(predicted), 1e-300);
        if (se > 0.0) worst_sigma = std::max(worst_sigma, dev / se);
        worst_identity = std::max(worst_identity, std::abs(predicted - direct) / scale);
        ok = ok && dev <= 4.0 * se + 1e-9 * scale && std::abs(predicted - direct) <= 1e-9 * scale;
      };
      for (int k = 0; k < g; ++k) {
        const std::size_t ik = one.at(k, 0);
        const LinkGain lk{one.beta_los[ik], one.beta_nlos[ik], one.xi[ik] != 0};
        const double bk = one.beta_total[ik];
        test(p_sum[k], p_sq[k], m * bk, moment_power(lk, m));
        test(f_sum[k], f_sq[k], m * m * bk * bk + bk * bk * kt.f[sub.at(k, s)], moment_fourth(lk, m));
        for (int i = 0; i < g; ++i) {
          if (i == k) continue;
          const std::size_t ii = one.at(i, 0);
          const LinkGain li{one.beta_los[ii], one.beta_nlos[ii], one.xi[ii] != 0};
          const double bi = one.beta_total[ii];
          const std::size_t e = kt.at(k, i, s);
          const double phi = fejer_correlation(one.u[ik], one.u[ii], geo, sc.wavelength);
          test(c_sum[k * g + i], c_sq[k * g + i], bk * bi * (kt.phi[e] * kt.g[e] + kt.q[e]),
               moment_cross(lk, li, phi, m));
        }
      }
    }
    add("moments", ok,
        "max deviation " + fmt(worst_sigma) + " standard errors, closed-form mismatch " + fmt(worst_identity));

    std::vector<double> snr, rho;
    for (int r : rows) {
      snr.push_back(model.active_snr()[r]);
      rho.push_back(model.active_rho()[r]);
    }
    const RateModel folded(sub, geo, sc.wavelength, snr, rho, 1);
    const RateModel tabled(sub, kt, m, snr, rho);
    std::vector<int> all(sub.num_sites);
    std::iota(all.begin(), all.end(), 0);
    double worst = 0.0;
    for (int k = 0; k < sub.num_grids; ++k) {
      const double a = folded.expected_sinr(all, k);
      const double b = tabled.expected_sinr(all, k);
      worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), 1e-300));
    }
    add("kernel_consistency", worst <= 1e-9, "max relative SINR difference " + fmt(worst));

    // Single user, pure LoS: every trial must hit the closed form.
    GainTables solo = subset(gains, {rows.front()}, spread_indices(gains.num_sites, sc.num_subarrays));
    for (std::size_t i = 0; i < solo.beta_nlos.size(); ++i) {
      solo.beta_nlos[i] = 0.0;
      solo.beta_total[i] = solo.xi[i] ? solo.beta_los[i] : 0.0;
    }
    std::vector<int> solo_sites = spread_indices(gains.num_sites, sc.num_subarrays);
    const ArrayLayout solo_layout = model.placement_layout(solo_sites);
    const std::vector<double> solo_snr{model.active_snr()[rows.front()]};
    const std::vector<double> one_rho{1.0};
    const RateModel solo_model(solo, geo, sc.wavelength, solo_snr, one_rho, 1);
    std::vector<int> solo_all(solo.num_sites);
    std::iota(solo_all.begin(), solo_all.end(), 0);
    const double closed = solo_model.weighted_sum_rate(solo_all);
    SimOptions opt;
    opt.trials = 100;
    opt.seed = config.run.sim_seed;
    opt.keep_trials = true;
    opt.threads = threads;
    const SimReport rep = simulate(ChannelSampler(solo_layout, solo, sc.wavelength), one_rho, solo_snr, opt);
    double err = 0.0;
    for (double v : rep.mrc_trials) err = std::max(err, std::abs(v - closed));
    add("single_user_exactness", err < 1e-9 && rep.mrc.std_error < 1e-12, "max |sim - closed form| = " + fmt(err));
  }

  {
    const PlacementResult plan =
        successive_replacement(model.candidate_model(), gains.xi, sc.num_subarrays, model.threads());
    add("lp_certificate", plan.lp.primal_residual <= 1e-8 && plan.lp.slackness_residual <= 1e-6,
        "primal " + fmt(plan.lp.primal_residual) + ", slackness " + fmt(plan.lp.slackness_residual));
    bool monotone = static_cast<int>(plan.trace.size()) <= sc.num_subarrays;
    double last = plan.initial_objective;
    for (const TraceEntry& t : plan.trace) {
      if (!t.accepted) continue;
      monotone = monotone && t.candidate_objective > last;
      last = t.candidate_objective;
    }
    add("monotone_trace", monotone, std::to_string(plan.accepted_steps) + " accepted steps");

    RunSettings run = config.run;
    run.trials = std::min(run.trials, 200);
    const LayoutEvaluation ev = evaluate_layout(model, model.placement_layout(plan.n_mu), true, true, run, threads);
    const bool dominance = ev.min_mmse_gap >= -1e-9;
    const bool bounded = ev.sim_mmse.estimate <= ev.upper_bound + 3.0 * ev.sim_mmse.std_error;
    add("mmse_dominance", dominance && bounded,
        "min per-trial MMSE - MRC = " + fmt(ev.min_mmse_gap) + ", MMSE " + fmt(ev.sim_mmse.estimate) +
            " vs bound " + fmt(ev.upper_bound));
  }
  return checks;
}

int cmd_plan(const fs::path& config, const fs::path& out, const std::optional<fs::path>& trace, unsigned threads,
             std::ostream& log) {
  return guarded(log, [&] {
    const LoadedConfig cfg = load_config(config);
    const ScenarioModel model(cfg.scenario, threads);
    const PlacementResult r = successive_replacement(model.candidate_model(), model.candidate_gains().xi,
                                                     cfg.scenario.num_subarrays, model.threads());
    for (const std::string& line : r.lp.log) log << "lp: " << line << '\n';
    write_text(out, plan_document(model, r).dump(2) + "\n");
    if (trace) {
      std::ostringstream os;
      write_trace_jsonl(os, r.trace);
      write_text(*trace, os.str());
    }
    log << "objective " << format_double(r.objective) << " bits/s/Hz after " << r.accepted_steps
        << " replacements\n";
    return kExitOk;
  });
}

int cmd_sweep(const fs::path& config, const fs::path& sweep, const fs::path& out_dir, unsigned threads,
              std::ostream& log) {
  return guarded(log, [&] {
    const LoadedConfig cfg = load_config(config);
    const SweepSpec spec = parse_sweep(read_json_file(sweep));
    const std::vector<SweepRow> rows = run_sweep(cfg, spec, threads);
    fs::create_directories(out_dir);
    for (const std::string& evaluator : spec.evaluators) {
      std::vector<SweepRow> part;
      for (const SweepRow& r : rows) {
        if (r.evaluator == evaluator) part.push_back(r);
      }
      std::ostringstream os;
      write_sweep_csv(os, part);
      write_text(out_dir / (evaluator + ".csv"), os.str());
    }
    for (const SweepRow& r : rows) {
      if (r.status != "ok") log << r.value << ' ' << r.scheme << ' ' << r.evaluator << ": " << r.status << '\n';
    }
    return kExitOk;
  });
}

MapGrid render_map(const LoadedConfig& cfg, const json& spec, unsigned threads) {
  if (!spec.is_object()) throw ConfigError("map spec must be an object");
  for (auto it = spec.begin(); it != spec.end(); ++it) {
    static const std::vector<std::string> keys = {"kind",  "layout", "plane", "fixed", "resolution",
                                                  "probe", "blocked_placeholder_dbm"};
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
      throw ConfigError("unknown map field '" + it.key() + "'");
    }
  }
  const ScenarioModel model(cfg.scenario, threads);
  MapRequest req;
  const std::string kind = spec.value("kind", "power");
  if (kind == "power") {
    req.kind = MapKind::power;
  } else if (kind == "correlation") {
    req.kind = MapKind::correlation;
  } else {
    throw ConfigError("map field 'kind' must be \"power\" or \"correlation\"");
  }
  const json layout = spec.value("layout", json("proposed"));
  if (layout.is_array()) {
    std::vector<int> sites;
    for (const json& v : layout) {
      if (!v.is_number_integer()) throw ConfigError("map field 'layout' must list candidate indices");
      sites.push_back(v.get<int>());
    }
    if (sites.empty()) throw ConfigError("map field 'layout' is empty");
    for (int s : sites) {
      if (s < 0 || s >= cfg.scenario.num_candidates()) throw ConfigError("map layout index out of range");
    }
    req.layout = model.placement_layout(sites);
  } else if (layout.is_string()) {
    const SchemeLayout sl = resolve_scheme(model, layout.get<std::string>(), cfg.run.exhaustive_limit);
    if (!sl.skipped.empty()) throw ConfigError("map layout unavailable: " + sl.skipped);
    req.layout = sl.layout;
  } else {
    throw ConfigError("map field 'layout' must be a scheme name or a list of candidate indices");
  }
  req.plane = spec.value("plane", "xy");
  if (spec.contains("fixed")) req.fixed = spec.at("fixed").get<double>();
  req.resolution = spec.value("resolution", 51);
  if (spec.contains("probe")) {
    const json& p = spec.at("probe");
    if (!p.is_array() || p.size() != 3) throw ConfigError("map field 'probe' must be a list of 3 numbers");
    req.probe = Vec3(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
  } else if (req.kind == MapKind::correlation) {
    throw ConfigError("correlation maps need field 'probe'");
  }
  req.blocked_placeholder_gain = dbm_to_mw(spec.value("blocked_placeholder_dbm", -65.0)) / 1000.0;

  MapGrid grid = req.kind == MapKind::power ? power_gain_map(req, cfg.scenario) : correlation_map(req, cfg.scenario);
  if (req.kind == MapKind::power) {
    for (double& v : grid.values) v = linear_to_db(v);
  }
  return grid;
}

int cmd_map(const fs::path& config, const fs::path& map_spec, const fs::path& out, unsigned threads,
            std::ostream& log) {
  return guarded(log, [&] {
    const MapGrid grid = render_map(load_config(config), read_json_file(map_spec), threads);
    std::ostringstream os;
    grid.write_csv(os);
    write_text(out, os.str());
    return kExitOk;
  });
}

int cmd_validate(const fs::path& config, bool corrupt_kernels, unsigned threads, std::ostream& out,
                 std::ostream& log) {
  return guarded(log, [&] {
    const LoadedConfig cfg = load_config(config);
    const std::vector<CheckResult> checks = run_validation(cfg, threads, corrupt_kernels);
    bool all = true;
    for (const CheckResult& c : checks) {
      out << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.detail << '\n';
      all = all && c.pass;
    }
    return all ? kExitOk : kExitValidation;
  });
}

int cmd_benchmark(const fs::path& config, const fs::path& out, bool simulate, unsigned threads,
                  std::ostream& out_table, std::ostream& log) {
  return guarded(log, [&] {
    const LoadedConfig cfg = load_config(config);
    SweepSpec spec;
    spec.schemes = kSchemes;
    spec.evaluators = {"approx_mrc", "upper_bound"};
    if (simulate) {
      spec.evaluators.push_back("sim_mrc");
      spec.evaluators.push_back("sim_mmse");
    }
    const std::vector<SweepRow> rows = run_sweep(cfg, spec, threads);
    std::ostringstream os;
    write_sweep_csv(os, rows);
    write_text(out, os.str());
    out_table << std::left << std::setw(20) << "scheme" << std::setw(14) << "evaluator" << "rate\n";
    for (const SweepRow& r : rows) {
      out_table << std::left << std::setw(20) << r.scheme << std::setw(14) << r.evaluator;
      if (r.rate) {
        out_table << std::setprecision(6) << *r.rate;
        if (r.std_error) out_table << " +/- " << std::setprecision(3) << *r.std_error;
      } else {
        out_table << r.status;
      }
      out_table << '\n';
    }
    return kExitOk;
  });
}

}  // namespace xlma
