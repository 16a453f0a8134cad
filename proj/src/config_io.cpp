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

#include "xlma/config_io.hpp"

#include <fstream>
#include <set>

#include "xlma/benchmarks.hpp"

namespace xlma {
namespace {

using nlohmann::json;

void allow_only(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError("unknown field '" + where + it.key() + "'");
  }
}

double number(const json& obj, const std::string& where, const char* key, std::optional<double> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError("missing field '" + where + key + "'");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("field '" + where + key + "' must be a number");
  return v.get<double>();
}

int integer(const json& obj, const std::string& where, const char* key, std::optional<int> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError("missing field '" + where + key + "'");
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError("field '" + where + key + "' must be an integer");
  return v.get<int>();
}

std::uint64_t unsigned_integer(const json& obj, const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
  if (v.is_number_float() && v.get<double>() >= 0.0 && v.get<double>() == std::floor(v.get<double>())) {
    return static_cast<std::uint64_t>(v.get<double>());
  }
  throw ConfigError(std::string("field '") + key + "' must be a non-negative integer");
}

Vec3 vec3(const json& v, const std::string& name) {
  if (!v.is_array() || v.size() != 3) throw ConfigError("field '" + name + "' must be a list of 3 numbers");
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) throw ConfigError("field '" + name + "' must be a list of 3 numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

std::vector<int> index_list(const json& v, const std::string& name) {
  if (!v.is_array()) throw ConfigError("field '" + name + "' must be a list of grid indices");
  std::vector<int> out;
  for (const json& e : v) {
    if (!e.is_number_integer()) throw ConfigError("field '" + name + "' must hold integers");
    out.push_back(e.get<int>());
  }
  return out;
}

}  // namespace

void reassign_probabilities(ScenarioConfig& sc) {
  UserDistribution& d = sc.distribution;
  d.rho = assign_probabilities(sc.num_grids(), d.expected_users, d.regular_ratio, d.hotspot, d.dense);
}

LoadedConfig parse_config(const json& doc) {
  allow_only(doc, "",
             {"carrier_freq", "m_h", "m_v", "d_h", "d_v", "num_subarrays", "tx_power_dbm", "noise_power_dbm",
              "rician_kappa_db", "rng_seed", "ma_region", "coverage", "obstacles", "distribution",
              "visibility_samples", "simulation", "exhaustive_limit", "name", "description"});
  LoadedConfig out;
  ScenarioConfig& sc = out.scenario;

  sc.carrier_freq = number(doc, "", "carrier_freq", 30e9);
  if (!(sc.carrier_freq > 0.0)) throw ConfigError("field 'carrier_freq' must be positive");
  sc.wavelength = kSpeedOfLight / sc.carrier_freq;
  sc.subarray.m_h = integer(doc, "", "m_h", 1);
  sc.subarray.m_v = integer(doc, "", "m_v", 1);
  sc.subarray.d_h = number(doc, "", "d_h", sc.wavelength / 2.0);
  sc.subarray.d_v = number(doc, "", "d_v", sc.wavelength / 2.0);
  sc.num_subarrays = integer(doc, "", "num_subarrays");
  sc.rng_seed = unsigned_integer(doc, "rng_seed", 1);
  sc.visibility_samples = integer(doc, "", "visibility_samples", 20);

  const json& ma = doc.contains("ma_region") ? doc.at("ma_region") : throw ConfigError("missing field 'ma_region'");
  allow_only(ma, "ma_region.", {"y_min", "y_max", "z_min", "z_max", "n_y", "n_z"});
  sc.ma_region = {number(ma, "ma_region.", "y_min"), number(ma, "ma_region.", "y_max"),
                  number(ma, "ma_region.", "z_min"), number(ma, "ma_region.", "z_max"),
                  integer(ma, "ma_region.", "n_y"),  integer(ma, "ma_region.", "n_z")};
  sc.ma_region.validate();

  const json& cov = doc.contains("coverage") ? doc.at("coverage") : throw ConfigError("missing field 'coverage'");
  allow_only(cov, "coverage.", {"x_min", "x_max", "y_min", "y_max", "z_min", "z_max", "k_x", "k_y", "k_z"});
  sc.coverage = {number(cov, "coverage.", "x_min"), number(cov, "coverage.", "x_max"),
                 number(cov, "coverage.", "y_min"), number(cov, "coverage.", "y_max"),
                 number(cov, "coverage.", "z_min"), number(cov, "coverage.", "z_max"),
                 integer(cov, "coverage.", "k_x"),  integer(cov, "coverage.", "k_y"),
                 integer(cov, "coverage.", "k_z")};
  sc.coverage.validate();
  const int grids = sc.num_grids();

  const json& power = doc.contains("tx_power_dbm") ? doc.at("tx_power_dbm") : json(5.0);
  if (power.is_number()) {
    sc.tx_power_mw.assign(grids, dbm_to_mw(power.get<double>()));
  } else if (power.is_array() && static_cast<int>(power.size()) == grids) {
    for (const json& p : power) {
      if (!p.is_number()) throw ConfigError("field 'tx_power_dbm' must hold numbers");
      sc.tx_power_mw.push_back(dbm_to_mw(p.get<double>()));
    }
  } else {
    throw ConfigError("field 'tx_power_dbm' must be a number or a list with one entry per grid");
  }
  sc.noise_power_mw = dbm_to_mw(number(doc, "", "noise_power_dbm", -80.0));

  if (doc.contains("rician_kappa_db")) {
    const json& k = doc.at("rician_kappa_db");
    if (k.is_string() && k.get<std::string>() == "infinite") {
      sc.rician = RicianFactor::pure();
    } else if (k.is_number()) {
      sc.rician = RicianFactor::from_db(k.get<double>());
    } else {
      throw ConfigError("field 'rician_kappa_db' must be a number (dB) or \"infinite\"");
    }
  }

  if (doc.contains("obstacles")) {
    const json& obs = doc.at("obstacles");
    if (!obs.is_array()) throw ConfigError("field 'obstacles' must be a list");
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const std::string where = "obstacles[" + std::to_string(i) + "].";
      allow_only(obs[i], where, {"center", "dims"});
      if (!obs[i].contains("center") || !obs[i].contains("dims")) {
        throw ConfigError("field '" + where + "' needs center and dims");
      }
      sc.obstacles.push_back({vec3(obs[i].at("center"), where + "center"), vec3(obs[i].at("dims"), where + "dims")});
    }
  }

  const json& dist = doc.contains("distribution") ? doc.at("distribution")
                                                  : throw ConfigError("missing field 'distribution'");
  allow_only(dist, "distribution.", {"expected_users", "regular_ratio", "hotspot", "dense", "hotspot_type", "rho"});
  UserDistribution& d = sc.distribution;
  if (dist.contains("rho")) {
    const json& r = dist.at("rho");
    if (!r.is_array() || static_cast<int>(r.size()) != grids) {
      throw ConfigError("field 'distribution.rho' must list one probability per grid");
    }
    for (const json& v : r) {
      if (!v.is_number()) throw ConfigError("field 'distribution.rho' must hold numbers");
      d.rho.push_back(v.get<double>());
    }
    d.expected_users = 0.0;
    for (double v : d.rho) d.expected_users += v;
    out.explicit_rho = true;
  } else {
    d.expected_users = number(dist, "distribution.", "expected_users");
    d.regular_ratio = number(dist, "distribution.", "regular_ratio", 0.0);
    if (dist.contains("hotspot")) d.hotspot = index_list(dist.at("hotspot"), "distribution.hotspot");
    if (dist.contains("dense")) d.dense = index_list(dist.at("dense"), "distribution.dense");
    if (dist.contains("hotspot_type")) {
      if (dist.contains("hotspot")) {
        throw ConfigError("fields 'distribution.hotspot' and 'distribution.hotspot_type' are exclusive");
      }
      d.hotspot = hotspot_type(integer(dist, "distribution.", "hotspot_type"), sc.coverage);
    }
    reassign_probabilities(sc);
  }

  if (doc.contains("simulation")) {
    const json& sim = doc.at("simulation");
    allow_only(sim, "simulation.", {"trials", "seed"});
    out.run.trials = integer(sim, "simulation.", "trials", 1000);
    out.run.sim_seed = unsigned_integer(sim, "seed", sc.rng_seed);
    if (out.run.trials < 1) throw ConfigError("field 'simulation.trials' must be at least 1");
  } else {
    out.run.sim_seed = sc.rng_seed;
  }
  out.run.exhaustive_limit = unsigned_integer(doc, "exhaustive_limit", out.run.exhaustive_limit);

  sc.validate();
  return out;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

LoadedConfig load_config(const std::filesystem::path& path) { return parse_config(read_json_file(path)); }

}  // namespace xlma
