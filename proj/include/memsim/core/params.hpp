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

namespace memsim::core {

/// Normalized physical parameters of one memory instance.
///
/// `d` is the resonant optical depth, `delta` the detuning in units of the
/// excited-state coherence decay rate gamma, `gamma_b` the storage-state
/// decay rate in the same units. gamma itself is the unit and is not stored.
struct MemoryParams {
  double d = 0.0;
  double delta = 0.0;
  double gamma_b = 0.0;

  /// Throws DomainError naming the offending field.
  void validate() const;

  /// Normalized complex detuning (gamma - i Delta) / gamma = 1 - i delta.
  std::complex<double> gamma_bar() const { return {1.0, -delta}; }

  /// Adiabaticity d * tau_FWHM * gamma for a signal of the given duration.
  double adiabaticity(double duration_fwhm) const { return d * duration_fwhm; }
};

}  // namespace memsim::core
