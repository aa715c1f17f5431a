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

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

#include "memsim/core/control.hpp"
#include "memsim/core/envelope.hpp"
#include "memsim/core/params.hpp"
#include "memsim/solver/request.hpp"

namespace memsim::optimize {

using core::AxisGrid;
using core::ComplexEnvelope;

inline constexpr std::size_t kDefaultKernelNodes = 96;

/// Linear map from an input envelope sampled on `tau_grid` to the stored
/// spin wave on `z_grid`:  B(z_i) = sum_j matrix(i, j) tau_weights[j] a_j.
struct StorageKernel {
  AxisGrid z_grid;
  AxisGrid tau_grid;
  Eigen::MatrixXcd matrix;
  std::vector<double> z_weights;
  std::vector<double> tau_weights;
  /// Exact L2 Gram matrix of the solver's cubic interpolation basis on
  /// tau_grid, so that int |A(tau)|^2 dtau = a^H tau_gram a.
  Eigen::MatrixXd tau_gram;

  /// B(z) for an input sampled on tau_grid. GridError on a grid mismatch.
  ComplexEnvelope apply(const ComplexEnvelope &input) const;
};

/// Gram matrix int l_i l_j of the four-point Lagrange cardinal functions
/// used by core::CubicSampler on `grid`.
Eigen::MatrixXd cubic_gram(const AxisGrid &grid);

/// Builds the kernel column by column from time-domain runs with a unit
/// impulse on each tau node. `jobs` = 0 uses every core.
StorageKernel build_storage_kernel(const core::MemoryParams &params,
                                   const core::ControlField &control, const AxisGrid &tau_grid,
                                   const solver::SolverConfig &cfg, std::size_t jobs = 1);

struct ModeDecomposition {
  std::vector<double> singular_values;          // nonincreasing
  std::vector<ComplexEnvelope> input_modes;     // on tau_grid
  std::vector<ComplexEnvelope> output_modes;    // on z_grid
  std::vector<std::string> warnings;
};

/// Quadrature-weighted SVD. Input modes are orthonormal under tau_gram,
/// output modes under z_weights; storing input mode j gives efficiency
/// singular_values[j]^2.
ModeDecomposition decompose_kernel(const StorageKernel &kernel);

/// Largest |G - I| entry over the input and output mode Gram matrices.
double mode_gram_residual(const StorageKernel &kernel, const ModeDecomposition &modes);

struct SignalShapeOptimum {
  ComplexEnvelope signal;  // top input mode, unit norm
  double efficiency = 0.0; // lambda_max^2
};

/// Best input shape for a fixed control on `tau_grid`.
SignalShapeOptimum optimize_signal_shape(const core::MemoryParams &params,
                                         const core::ControlField &control,
                                         const AxisGrid &tau_grid,
                                         const solver::SolverConfig &cfg, std::size_t jobs = 1);

}  // namespace memsim::optimize
