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

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "memsim/solver/request.hpp"

namespace memsim::cli {

enum class ScenarioKind { absorption_sweep, gaussian_opt_map, sensitivity_map, protocol_table, single_run };
enum class OutputFormat { csv, json };

struct ParameterAxis {
  std::string name;
  std::vector<double> values;  // expanded from min/max/points/scale if needed
};

struct OutputSpec {
  std::string path = "out";
  OutputFormat format = OutputFormat::csv;
  bool include_envelopes = false;
  std::uint64_t seed = 1;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::single_run;
  std::vector<ParameterAxis> axes;
  std::map<std::string, double> fixed;
  std::optional<double> gamma_reference_mhz;
  solver::SolverConfig solver;
  OutputSpec output;

  /// Row-major points in axis order, the last axis fastest. Each point maps
  /// every axis name to its value.
  std::vector<std::map<std::string, double>> points() const;
};

/// Thrown when a configuration does not validate; carries every violation.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string> &violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

const char *kind_name(ScenarioKind kind);

/// Every violation in `text` (JSON), empty if it is a valid scenario.
std::vector<std::string> validate_scenario_text(const std::string &text);

/// Parses and validates; throws ConfigError listing all violations.
Scenario parse_scenario(const std::string &text);

/// Reads a file or throws ConfigError naming it.
std::string read_file(const std::string &path);

}  // namespace memsim::cli
