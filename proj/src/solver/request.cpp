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

#include "memsim/solver/request.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "memsim/core/error.hpp"

namespace memsim::solver {

void SolverConfig::validate() const {
  if (z_points < 16) throw DomainError("z_points must be >= 16");
  if (tau_points < 64) throw DomainError("tau_points must be >= 64");
  if (!(energy_tolerance > 0.0) || energy_tolerance > 1e-2)
    throw DomainError("energy_tolerance must lie in (0, 1e-2]");
}

namespace {

void check_z_envelope(const core::ComplexEnvelope &env, const char *name) {
  const auto &g = env.grid();
  if (std::abs(g.start()) > 1e-9 || std::abs(g.last() - 1.0) > 1e-9)
    throw GridError(std::string(name) + " must be sampled on z in [0, 1]");
}

}  // namespace

void StorageRequest::validate() const {
  params.validate();
  if (const auto *g = std::get_if<core::GaussianControlSpec>(&control)) g->validate();
  const auto &grid = signal.grid();
  const double tol = 1e-9 * std::max(1.0, grid.span());
  if (core::has_control(control)) {
    const auto [lo, hi] = core::control_support(control);
    if (lo < grid.start() - tol || hi > grid.last() + tol)
      throw GridError("signal grid [" + std::to_string(grid.start()) + ", " +
                      std::to_string(grid.last()) + "] does not cover the control support [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  if (pi_pulse.instantaneous) {
    if (!std::isfinite(pi_pulse.at_time) || pi_pulse.at_time < grid.start() ||
        pi_pulse.at_time > grid.last())
      throw GridError("instantaneous pi-pulse time lies outside the signal window");
  }
  if (gamma_bar_override) {
    const cplx g = *gamma_bar_override;
    if (!std::isfinite(g.real()) || !std::isfinite(g.imag()) || g.real() < 0.0)
      throw DomainError("gamma_bar override must be finite with Re >= 0");
  }
  if (initial_p) check_z_envelope(*initial_p, "initial_p");
  if (initial_b) check_z_envelope(*initial_b, "initial_b");
}

StorageRequest make_request(const core::MemoryParams &params, const core::ComplexEnvelope &signal,
                            const core::ControlField &control) {
  return StorageRequest{params, signal, control, PiPulseMode::explicit_mode(), std::nullopt,
                        std::nullopt, std::nullopt};
}

}  // namespace memsim::solver
