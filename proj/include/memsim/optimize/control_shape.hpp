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
#include <optional>
#include <vector>

#include "memsim/core/control.hpp"
#include "memsim/core/envelope.hpp"
#include "memsim/core/params.hpp"
#include "memsim/optimize/kernel.hpp"
#include "memsim/optimize/minimize.hpp"
#include "memsim/solver/request.hpp"

namespace memsim::optimize {

struct ControlShapeOptions {
  std::size_t knots = 20;
  /// Starting control. Default: Gaussian of area 2 pi with the signal's
  /// intensity FWHM, centered on the signal.
  std::optional<core::GaussianControlSpec> initial;
  std::size_t kernel_nodes = kDefaultKernelNodes;
  BfgsOptions bfgs{};
  /// Allowed drop of eta between consecutive homotopy steps.
  double stall_drop = 0.05;
  std::size_t jobs = 1;
};

struct ControlShapeResult {
  core::SplineControlSpec control;
  double efficiency = 0.0;          // eta_stor of the target under `control`
  double initial_efficiency = 0.0;  // eta_stor of the target under the initial control
  std::vector<double> step_efficiencies;  // eta_stor(A_k) after each step
};

/// Homotopy from the initial control's optimal input mode to `target`:
/// A_k = normalize((1 - s_k) A_opt + s_k A_target) with s_k = k / (N - 1);
/// at each step the spline knots are re-optimized for A_k, seeding the next
/// step. Throws NonconvergenceError when eta drops by more than stall_drop
/// between steps.
ControlShapeResult optimize_control_shape(const core::MemoryParams &params,
                                          const core::ComplexEnvelope &target,
                                          std::size_t interpolation_steps,
                                          const solver::SolverConfig &cfg,
                                          const ControlShapeOptions &opts = {});

/// Knot values maximizing eta_stor(signal) from `init` by quasi-Newton
/// search. Knots stay real when `init` and the signal are real and the
/// memory is on resonance. Returns the refined control and its efficiency.
std::pair<core::SplineControlSpec, double> refine_control_knots(
    const core::MemoryParams &params, const core::ComplexEnvelope &signal,
    const core::SplineControlSpec &init, const solver::SolverConfig &cfg,
    const BfgsOptions &opts = {});

}  // namespace memsim::optimize
