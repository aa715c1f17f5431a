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

#include "memsim/core/profile.hpp"
#include "memsim/core/result.hpp"
#include "memsim/solver/request.hpp"

namespace memsim::solver {

/// Complex Maxwell-Bloch integration, marching in tau with RK4 (or RK2).
///
/// At every stage A(z) is rebuilt from P by cumulative trapezoid quadrature
/// in z. Throws NonconvergenceError when the energy budget does not close.
core::SimulationResult simulate_time_domain(const StorageRequest &req, const SolverConfig &cfg);

/// 1 - int |A_out|^2 / int |A_in|^2 for a control-free run.
double simulate_linear_absorption(const core::MemoryParams &params,
                                  const core::ComplexEnvelope &signal, const SolverConfig &cfg);

/// Absorbed fraction of a control-free run from the exact frequency filter
///   A_out(w) = A_in(w) exp(-d / (gamma_bar + i w)),
/// evaluated on the signal's own DFT grid.
double linear_absorption_filter(const core::MemoryParams &params,
                                const core::ComplexEnvelope &signal);

/// Absorbed fraction of a unit Gaussian signal of intensity FWHM
/// `duration_fwhm` from adaptive Gauss-Kronrod quadrature of
///   1 - int e^{-2 s^2 w^2} e^{-2d/(1+(w-delta)^2)} dw / int e^{-2 s^2 w^2} dw.
double gaussian_linear_absorption(const core::MemoryParams &params, double duration_fwhm);

/// Frequency-domain formulation: algebraic in omega, RK4 in z.
///
/// Fields are damped by e^{-alpha (tau - tau_0)} and zero padded so the
/// periodic transform is exact for causal responses. Throws GridError when
/// the control spectrum reaches the Nyquist band, and UnsupportedError for
/// instantaneous pi-pulses or initial coherences.
core::SimulationResult simulate_spectral(const StorageRequest &req, const SolverConfig &cfg);

/// Six real equations for the amplitudes and phases of A, P and B.
core::SimulationResult simulate_amplitude_phase(const StorageRequest &req, const SolverConfig &cfg);

/// Optional detuning-sign flip of every inhomogeneous bin at `at_time`.
struct DetuningFlip {
  double at_time = 0.0;
};

/// One (P, B) pair per detuning bin. P and B in the result are the
/// weighted coherent sums int sqrt(p) P_Delta dDelta.
core::SimulationResult simulate_inhomogeneous(const StorageRequest &req,
                                              const core::InhomogeneousProfile &profile,
                                              const SolverConfig &cfg,
                                              std::optional<DetuningFlip> flip = std::nullopt);

/// Forward retrieval from a stored spin wave with A(0, tau) = 0.
///
/// The retrieval window is [0, tau_end] where tau_end covers the control
/// support plus 10 decay times; `samples` fixes the output resolution.
core::SimulationResult simulate_retrieval(const core::ComplexEnvelope &stored_b,
                                          const core::MemoryParams &params,
                                          const core::ControlField &control,
                                          const SolverConfig &cfg, std::size_t samples = 1024);

/// Retrieval efficiency int |A_out|^2 / int |B(z, 0)|^2 of a retrieval
/// result, both from the run's own budget accumulators.
double retrieval_efficiency(const core::SimulationResult &result);

}  // namespace memsim::solver
