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

#include "memsim/core/result.hpp"
#include "memsim/solver/request.hpp"

namespace memsim::protocols {

/// Adiabatic EIT model with P eliminated:
///   dA/dz = -d A + i sqrt(d) (Omega/2) B
///   dB/dtau = -i sqrt(d) (Omega*/2) A - (|Omega|^2/4) B - gamma_B B
/// Warns (in the result) when delta != 0 or d tau_FWHM < 10.
core::SimulationResult eit_reduced_simulate(const solver::StorageRequest &req,
                                            const solver::SolverConfig &cfg);

/// Far-detuned Raman model with normalized detuning D:
///   dA/dz = -i (d/D) A - (sqrt(d)/D)(Omega/2) B
///   dB/dtau = (sqrt(d)/D)(Omega*/2) A - i (|Omega|^2 / 4D) B - gamma_B B
/// Warns when |D| is not large against 1, the signal bandwidth or |Omega|.
core::SimulationResult raman_reduced_simulate(const solver::StorageRequest &req,
                                              double normalized_detuning,
                                              const solver::SolverConfig &cfg);

struct AtsState {
  double p;
  double b;
};

/// Constant-control ATS oscillation: P = sin(|Omega| t / 2), B = cos(|Omega| t / 2).
AtsState ats_closed_form(double control_magnitude, double t);

}  // namespace memsim::protocols
