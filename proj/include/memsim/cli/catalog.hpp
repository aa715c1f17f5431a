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

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "memsim/cli/scenario.hpp"

namespace memsim::cli {

/// A named numeric parameter accepted in parameter_axes or fixed_parameters.
struct ParamInfo {
  std::string name;
  double lo = -1e300;
  bool lo_open = false;  // lo itself is excluded
  double hi = 1e300;
  bool hi_open = false;
  bool integer = false;
  std::string rule;  // human-readable bound, e.g. "must be ≥ 0"
  std::optional<double> fallback;
  std::string description;

  /// Message naming the violation, or nullopt for a valid value.
  std::optional<std::string> violation(double v) const;
};

const std::vector<ParamInfo> &parameter_catalog();
const ParamInfo *find_param(const std::string &name);

struct KindInfo {
  std::set<std::string> accepted;
  /// Each inner list must be covered by exactly one name.
  std::vector<std::vector<std::string>> required;
  bool uses(const std::string &name) const { return accepted.count(name) > 0; }
};

const KindInfo &kind_info(ScenarioKind kind);

/// Value of `name` at a point: axis value, fixed value, or catalog fallback.
double lookup(const Scenario &sc, const std::map<std::string, double> &point, const std::string &name);
bool has_value(const Scenario &sc, const std::map<std::string, double> &point, const std::string &name);

}  // namespace memsim::cli
