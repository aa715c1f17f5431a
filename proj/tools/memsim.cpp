/* Copyright 2026 The memsim Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "memsim/cli/runner.hpp"
#include "memsim/core/error.hpp"
#include "memsim/optimize/bound.hpp"

int main(int argc, char **argv) {
  CLI::App app{"memsim: atomic-ensemble quantum memory simulator"};
  app.require_subcommand(1);

  std::string run_config;
  std::size_t jobs = 0;
  std::string out_dir;
  std::uint64_t seed = 0;
  auto *run = app.add_subcommand("run", "Run a scenario config");
  run->add_option("config", run_config, "Scenario JSON file")->required();
  run->add_option("--jobs", jobs, "Worker threads (default: MEMSIM_JOBS or all cores)");
  auto *out_opt = run->add_option("--out", out_dir, "Output directory (overrides output.path)");
  auto *seed_opt = run->add_option("--seed", seed, "Seed (overrides output.seed)");

  std::string validate_config;
  auto *validate = app.add_subcommand("validate", "Validate a scenario config without running it");
  validate->add_option("config", validate_config, "Scenario JSON file")->required();

  double d = 0.0;
  std::size_t points = 200;
  auto *bound = app.add_subcommand("bound", "Print the optical-depth-limited storage efficiency");
  bound->add_option("--d", d, "Optical depth")->required();
  bound->add_option("--points", points, "Quadrature points (>= 32)");

  auto *version = app.add_subcommand("version", "Print the tool version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (*run) {
    memsim::cli::RunOptions opts;
    opts.jobs = jobs;
    if (*out_opt) opts.out_dir = out_dir;
    if (*seed_opt) opts.seed = seed;
    return memsim::cli::run_command(run_config, opts);
  }
  if (*validate) return memsim::cli::validate_command(validate_config);
  if (*bound) {
    try {
      const double eta = memsim::optimize::optimal_efficiency_bound(d, points);
      std::cout << std::setprecision(9) << eta << "\n";
      return 0;
    } catch (const memsim::NonconvergenceError &e) {
      std::cerr << e.what() << "\n";
      return 2;
    } catch (const std::exception &e) {
      std::cerr << e.what() << "\n";
      return 1;
    }
  }
  if (*version) {
    std::cout << "memsim " << MEMSIM_VERSION << "\n";
    return 0;
  }
  return 1;
}
