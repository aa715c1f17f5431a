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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "memsim/cli/scenario.hpp"

namespace memsim::cli {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Sampled envelope attached to one table row.
struct EnvelopeRecord {
  std::size_t row = 0;
  std::string name;
  double start = 0.0;
  double step = 0.0;
  std::vector<double> re, im;
};

struct ScenarioResult {
  Table table;
  std::vector<EnvelopeRecord> envelopes;
};

/// A grid point failed. `numerical` separates nonconvergence (exit 2)
/// from invalid parameter combinations (exit 1).
class PointError : public std::runtime_error {
 public:
  PointError(const std::string &what, bool numerical) : std::runtime_error(what), numerical_(numerical) {}
  bool numerical() const { return numerical_; }

 private:
  bool numerical_;
};

/// Evaluates every grid point (concurrently when jobs > 1) and returns the
/// rows in axis order. Throws PointError for the lowest failing index.
ScenarioResult execute_scenario(const Scenario &sc, std::size_t jobs, std::uint64_t seed);

/// Per-point seed derived from the run seed and the point index.
std::uint64_t point_seed(std::uint64_t seed, std::size_t index);

/// Fixed-precision (9 significant digits) number text used in every output.
std::string format_number(double v);

std::string table_csv(const Table &t);
std::string table_json(const Scenario &sc, const Table &t);
std::string envelopes_json(const std::vector<EnvelopeRecord> &env);

/// Hex SHA-256 of `data`.
std::string sha256_hex(const std::string &data);

struct RunOptions {
  std::size_t jobs = 0;  // 0: MEMSIM_JOBS, else all cores
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
};

/// `memsim run`: parse, execute, then write results, envelopes and
/// manifest.json. Nothing is written unless every point succeeds. Returns
/// the process exit code; messages go to stderr.
int run_command(const std::string &config_path, const RunOptions &opts);

/// `memsim validate`: prints every violation. Returns 0 or 1.
int validate_command(const std::string &config_path);

/// Worker count from --jobs, then MEMSIM_JOBS, then the hardware.
std::size_t resolve_job_count(std::size_t flag);

/// Number of per-mode efficiencies at or above `threshold`.
std::size_t multimode_capacity(const std::vector<double> &mode_efficiencies, double threshold);

}  // namespace memsim::cli
