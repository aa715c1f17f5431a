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

#include <complex>
#include <cstddef>
#include <optional>

#include "memsim/core/control.hpp"
#include "memsim/core/envelope.hpp"
#include "memsim/core/params.hpp"

namespace memsim::solver {

using core::cplx;

enum class Method { rk4, rk2 };

struct SolverConfig {
  std::size_t z_points = 128;
  /// Minimum integration nodes across the signal window.
  std::size_t tau_points = 256;
  Method method = Method::rk4;
  double energy_tolerance = 1e-4;

  /// DomainError on z_points < 16, tau_points < 64 or a tolerance outside (0, 1e-2].
  void validate() const;
};

/// How the storage pi-pulse of a two-step protocol is applied.
struct PiPulseMode {
  bool instantaneous = false;
  double at_time = 0.0;

  /// Any pi-pulse is part of the control envelope (or absent).
  static PiPulseMode explicit_mode() { return {}; }
  /// Ideal transfer P -> -iB, B -> -iP at tau = t.
  static PiPulseMode instantaneous_at(double t) { return {true, t}; }
};

struct StorageRequest {
  core::MemoryParams params;
  core::ComplexEnvelope signal;  // A_in(tau) at z = 0
  core::ControlField control;
  PiPulseMode pi_pulse;

  /// Replaces 1 - i delta in the P equation. The result carries a warning
  /// and decayed_p uses 2 Re of the override.
  std::optional<cplx> gamma_bar_override;
  /// Coherences at the first signal node, over z in [0, 1]. Zero if absent.
  std::optional<core::ComplexEnvelope> initial_p;
  std::optional<core::ComplexEnvelope> initial_b;

  cplx gamma_bar() const { return gamma_bar_override.value_or(params.gamma_bar()); }
  /// Throws DomainError / GridError for inconsistent requests, including a
  /// control that extends past the signal window.
  void validate() const;
};

/// Convenience constructor for the common storage run.
StorageRequest make_request(const core::MemoryParams &params, const core::ComplexEnvelope &signal,
                            const core::ControlField &control = {});

}  // namespace memsim::solver
