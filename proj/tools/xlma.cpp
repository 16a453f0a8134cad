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

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "xlma/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Movable-subarray placement and uplink rate toolkit"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();

  std::string config;
  auto add_config = [&](CLI::App* sub) { sub->add_option("config", config, "Scenario JSON")->required(); };

  CLI::App* plan = app.add_subcommand("plan", "Optimize the subarray placement");
  add_config(plan);
  std::string plan_out = "plan.json";
  std::string trace_out;
  plan->add_option("-o,--out", plan_out, "Placement JSON")->capture_default_str();
  plan->add_option("--trace", trace_out, "Optimizer trace (JSON lines)");

  CLI::App* sweep = app.add_subcommand("sweep", "Sweep one parameter across schemes");
  add_config(sweep);
  std::string sweep_spec;
  std::string sweep_dir = "sweep";
  sweep->add_option("sweep", sweep_spec, "Sweep JSON")->required();
  sweep->add_option("-o,--out-dir", sweep_dir, "Directory for one CSV per evaluator")->capture_default_str();

  CLI::App* map = app.add_subcommand("map", "Export a channel power or correlation map");
  add_config(map);
  std::string map_spec;
  std::string map_out = "map.csv";
  map->add_option("map", map_spec, "Map JSON")->required();
  map->add_option("-o,--out", map_out, "Map CSV")->capture_default_str();

  CLI::App* validate = app.add_subcommand("validate", "Run the identity checks on a scenario");
  add_config(validate);
  bool corrupt = false;
  validate->add_flag("--corrupt-kernels", corrupt, "Perturb the kernel tables (negative control)");

  CLI::App* bench = app.add_subcommand("benchmark", "Compare the proposed placement with every baseline");
  add_config(bench);
  std::string bench_out = "benchmark.csv";
  bool simulate = false;
  bench->add_option("-o,--out", bench_out, "Result CSV")->capture_default_str();
  bench->add_flag("--simulate", simulate, "Add simulated MRC and MMSE rates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return xlma::kExitValidation;
  }

  if (plan->parsed()) {
    std::optional<xlma::fs::path> trace;
    if (!trace_out.empty()) trace = trace_out;
    return xlma::cmd_plan(config, plan_out, trace, threads, std::cerr);
  }
  if (sweep->parsed()) return xlma::cmd_sweep(config, sweep_spec, sweep_dir, threads, std::cerr);
  if (map->parsed()) return xlma::cmd_map(config, map_spec, map_out, threads, std::cerr);
  if (validate->parsed()) return xlma::cmd_validate(config, corrupt, threads, std::cout, std::cerr);
  return xlma::cmd_benchmark(config, bench_out, simulate, threads, std::cout, std::cerr);
}
