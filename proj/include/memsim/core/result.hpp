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

#include <string>
#include <vector>

#include "memsim/core/envelope.hpp"

namespace memsim::core {

/// Where the photon energy of one run went. All entries are integrated
/// intensities in the normalized units of the field equations.
struct EnergyBudget {
  double input = 0.0;        // int |A_in|^2 dtau plus any initial P, B energy
  double signal = 0.0;       // int |A_in|^2 dtau alone
  double transmitted = 0.0;  // int |A(1,tau)|^2 dtau
  double stored_p = 0.0;     // int |P(z,tau_end)|^2 dz
  double stored_b = 0.0;     // int |B(z,tau_end)|^2 dz
  double decayed_p = 0.0;    // 2 Re(gamma_bar) int int |P|^2
  double decayed_b = 0.0;    // 2 gamma_B int int |B|^2

  double accounted() const {
    return transmitted + stored_p + stored_b + decayed_p + decayed_b;
  }
  /// |input - accounted| / input, or 0 for an empty run.
  double relative_residual() const;
};

struct SimulationResult {
  ComplexEnvelope a_out;    // A(z=1, tau) on the run's tau grid
  ComplexEnvelope p_final;  // P(z, tau_end)
  ComplexEnvelope b_final;  // B(z, tau_end)
  EnergyBudget energy;
  /// Validity-regime and override notes raised during the run.
  std::vector<std::string> warnings;

  /// int |B(z,tau_end)|^2 dz / int |A_in|^2 dtau.
  double storage_efficiency() const;
};

}  // namespace memsim::core
