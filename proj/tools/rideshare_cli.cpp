// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rideshare/cli.hpp"
#include "rideshare/config.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> max_iterations;
  std::optional<int> seeds;
  std::vector<int> fleet_sizes;
  std::vector<std::string> schemes;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON run configuration")->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Base seed");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--max-iters", o.max_iterations, "Solver iteration cap");
}

rideshare::RunConfig resolve(const Overrides& o) {
  rideshare::RunConfig c = rideshare::load_config(o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.output_dir = *o.out;
  if (o.max_iterations) c.solver.max_iterations = *o.max_iterations;
  if (o.seeds) c.seeds = *o.seeds;
  if (!o.fleet_sizes.empty()) c.fleet_sizes = o.fleet_sizes;
  if (!o.schemes.empty()) {
    c.schemes.clear();
    for (const auto& s : o.schemes) c.schemes.push_back(rideshare::parse_scheme(s));
  }
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Demand-aware joint routing and request assignment for shared rides"};
  app.require_subcommand(1);
  Overrides o;
  auto* build = app.add_subcommand("build", "Build the region graph and demand model");
  auto* solve = app.add_subcommand("solve", "Solve one dispatch snapshot");
  auto* simulate = app.add_subcommand("simulate", "Run fleet simulations and summarize");
  auto* oracle = app.add_subcommand("oracle-check", "Cross-check the solver against oracles");
  for (auto* cmd : {build, solve, simulate, oracle}) add_common(cmd, o);
  simulate->add_option("--seeds", o.seeds, "Number of seeds per instance and scheme");
  simulate->add_option("--fleet-sizes", o.fleet_sizes, "Fleet sizes to sweep")->delimiter(',');
  simulate->add_option("--schemes", o.schemes, "Schemes: joint, independent, fastest")
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);
  try {
    const rideshare::RunConfig config = resolve(o);
    if (build->parsed()) return rideshare::cmd_build(config);
    if (solve->parsed()) return rideshare::cmd_solve(config);
    if (simulate->parsed()) return rideshare::cmd_simulate(config);
    if (oracle->parsed()) return rideshare::cmd_oracle_check(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
