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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"

#include "xlma/commands.hpp"
#include "xlma/lp.hpp"
#include "xlma/rate.hpp"
#include "xlma/system_model.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace xlma;

namespace {

json parse_text(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

LoadedConfig config_from(const std::string& text) { return parse_config(parse_text(text, "config")); }

py::list rows_to_python(const std::vector<SweepRow>& rows) {
  py::list out;
  for (const SweepRow& r : rows) {
    py::dict d;
    d["value"] = r.value;
    d["scheme"] = r.scheme;
    d["evaluator"] = r.evaluator;
    d["rate"] = r.rate ? py::cast(*r.rate) : py::none();
    d["stderr"] = r.std_error ? py::cast(*r.std_error) : py::none();
    d["status"] = r.status;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Movable-subarray placement and rate evaluation";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);

  m.def(
      "plan",
      [](const std::string& config, unsigned threads) {
        const LoadedConfig cfg = config_from(config);
        py::gil_scoped_release release;
        const ScenarioModel model(cfg.scenario, threads);
        const PlacementResult r = successive_replacement(model.candidate_model(), model.candidate_gains().xi,
                                                         cfg.scenario.num_subarrays, threads);
        return plan_document(model, r).dump();
      },
      py::arg("config"), py::arg("threads") = 0);

  m.def(
      "weighted_sum_rate",
      [](const std::string& config, const std::vector<int>& sites, unsigned threads) {
        const LoadedConfig cfg = config_from(config);
        py::gil_scoped_release release;
        const ScenarioModel model(cfg.scenario, threads);
        const RateModel& rm = model.candidate_model();
        return std::make_pair(rm.weighted_sum_rate(sites), rm.weighted_upper_bound(sites));
      },
      py::arg("config"), py::arg("sites"), py::arg("threads") = 0);

  m.def(
      "sweep",
      [](const std::string& config, const std::string& sweep, unsigned threads) {
        const LoadedConfig cfg = config_from(config);
        const SweepSpec spec = parse_sweep(parse_text(sweep, "sweep"));
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_sweep(cfg, spec, threads);
        }
        return rows_to_python(rows);
      },
      py::arg("config"), py::arg("sweep"), py::arg("threads") = 0);

  m.def(
      "validate",
      [](const std::string& config, unsigned threads, bool corrupt_kernels) {
        const LoadedConfig cfg = config_from(config);
        std::vector<CheckResult> checks;
        {
          py::gil_scoped_release release;
          checks = run_validation(cfg, threads, corrupt_kernels);
        }
        std::vector<std::tuple<std::string, bool, std::string>> out;
        for (const CheckResult& c : checks) out.emplace_back(c.name, c.pass, c.detail);
        return out;
      },
      py::arg("config"), py::arg("threads") = 0, py::arg("corrupt_kernels") = false);

  m.def(
      "render_map",
      [](const std::string& config, const std::string& spec, unsigned threads) {
        const LoadedConfig cfg = config_from(config);
        const json doc = parse_text(spec, "map spec");
        MapGrid g;
        {
          py::gil_scoped_release release;
          g = render_map(cfg, doc, threads);
        }
        py::array_t<double> values({g.rows.size(), g.cols.size()});
        std::copy(g.values.begin(), g.values.end(), values.mutable_data());
        py::dict d;
        d["row_axis"] = g.row_axis;
        d["col_axis"] = g.col_axis;
        d["rows"] = py::array_t<double>(g.rows.size(), g.rows.data());
        d["cols"] = py::array_t<double>(g.cols.size(), g.cols.data());
        d["values"] = values;
        d["probe"] = std::vector<double>{g.probe.x(), g.probe.y(), g.probe.z()};
        return d;
      },
      py::arg("config"), py::arg("spec"), py::arg("threads") = 0);

  m.def(
      "solve_lp",
      [](const std::vector<double>& c, const std::vector<std::vector<std::uint8_t>>& coverage, int n_select) {
        LpProblem p{c, coverage, n_select};
        const LpSolution s = solve_lp(p);
        py::dict d;
        d["x"] = s.x;
        d["objective"] = s.objective;
        d["duals"] = s.duals;
        d["pivots"] = s.pivots;
        d["primal_residual"] = s.primal_residual;
        d["slackness_residual"] = s.slackness_residual;
        d["penalty_fallback"] = s.penalty_fallback;
        return d;
      },
      py::arg("c"), py::arg("coverage"), py::arg("n_select"));

  m.def(
      "fejer_correlation",
      [](const std::array<double, 3>& u_k, const std::array<double, 3>& u_i, int m_h, int m_v, double d_h, double d_v,
         double wavelength) {
        return fejer_correlation(Vec3(u_k[0], u_k[1], u_k[2]), Vec3(u_i[0], u_i[1], u_i[2]),
                                 SubarrayGeometry{m_h, m_v, d_h, d_v}, wavelength);
      },
      py::arg("u_k"), py::arg("u_i"), py::arg("m_h"), py::arg("m_v"), py::arg("d_h"), py::arg("d_v"),
      py::arg("wavelength"));
}
