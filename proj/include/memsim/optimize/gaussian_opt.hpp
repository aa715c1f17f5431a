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
#include <functional>

#include "memsim/core/control.hpp"
#include "memsim/core/envelope.hpp"
#include "memsim/core/params.hpp"
#include "memsim/solver/request.hpp"

namespace memsim::optimize {

/// Storage efficiency of `signal` under a control; the window is zero padded
/// to cover the control support.
using EfficiencyFn = std::function<double(const core::MemoryParams &, const core::ComplexEnvelope &,
                                          const core::ControlField &)>;

/// Time-domain storage efficiency with zero padding to the control support.
double stored_efficiency(const core::MemoryParams &params, const core::ComplexEnvelope &signal,
                         const core::ControlField &control, const solver::SolverConfig &cfg);

struct GaussianSearchOptions {
  std::size_t restarts = 4;              // starts in total, the first at `init`
  std::size_t evaluations_per_start = 150;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;                  // 0 = all cores
  double max_area = 20.0 * 3.14159265358979323846;
};

struct GaussianOptimum {
  core::GaussianControlSpec control;
  double efficiency = 0.0;
  std::size_t evaluations = 0;
  /// At least two starts ended within 1e-3 of the best efficiency.
  bool converged = false;
  /// The efficiency does not depend on the control (for example d = 0).
  bool degenerate = false;
};

/// Maximizes storage efficiency over (area, delay, duration) with a
/// box-constrained simplex search from several starts. Bounds: area in
/// [0, max_area], delay within the signal window, duration in
/// [4 step, window span].
GaussianOptimum optimize_gaussian_control(const core::MemoryParams &params,
                                          const core::ComplexEnvelope &signal,
                                          const core::GaussianControlSpec &init,
                                          const solver::SolverConfig &cfg,
                                          const GaussianSearchOptions &opts = {});

}  // namespace memsim::optimize
