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

#include "memsim/core/result.hpp"

#include <cmath>

namespace memsim::core {

double EnergyBudget::relative_residual() const {
  if (!(input > 0.0)) return 0.0;
  return std::abs(input - accounted()) / input;
}

double SimulationResult::storage_efficiency() const {
  if (!(energy.signal > 0.0)) return 0.0;
  return energy.stored_b / energy.signal;
}

}  // namespace memsim::core
