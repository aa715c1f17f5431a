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
#include <vector>

#include "memsim/core/result.hpp"
#include "memsim/solver/request.hpp"

namespace memsim::solver::detail {

/// Ensemble of detuning bins sharing one z grid. A homogeneous medium is a
/// single bin with detuning 0, coupling 1 and weight 1.
struct BinSet {
  std::vector<double> detuning;  // added to the imaginary part: gamma_bar - i Delta
  std::vector<double> coupling;  // sqrt(p_Delta)
  std::vector<double> weight;    // quadrature weight of the bin
};

BinSet homogeneous_bins();

struct EngineOptions {
  std::optional<double> flip_time;
};

/// Shared tau-marching integrator behind the time-domain, inhomogeneous and
/// retrieval entry points.
core::SimulationResult run_engine(const StorageRequest &req, const BinSet &bins,
                                  const SolverConfig &cfg, const EngineOptions &opts);

/// Step bound used by every tau-marching solver.
double max_tau_step(const StorageRequest &req, const SolverConfig &cfg, double max_bin_detuning);

/// z node count after automatic refinement for optical depth d.
std::size_t effective_z_points(const SolverConfig &cfg, double d);

/// Trapezoid budget check shared by the solvers. Throws NonconvergenceError.
void check_energy(const core::EnergyBudget &e, const SolverConfig &cfg, const char *solver);

}  // namespace memsim::solver::detail
