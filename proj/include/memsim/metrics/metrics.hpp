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

#include <span>

#include "memsim/core/envelope.hpp"

namespace memsim::metrics {

/// int |a_out|^2 / int |a_in|^2 over each envelope's own axis (time or
/// frequency). DomainError for a zero input.
double total_efficiency(const core::ComplexEnvelope &a_in, const core::ComplexEnvelope &a_out);

struct StageEfficiencies {
  double storage = 0.0;
  double retrieval = 0.0;  // 0 when !retrieval_defined
  double total = 0.0;      // storage * retrieval
  bool retrieval_defined = true;
};

/// Storage int|B|^2 dz / int|A_in|^2 dtau, retrieval int|A_out|^2 dtau /
/// int|B|^2 dz, and their product. A zero spin wave leaves retrieval
/// undefined and flagged. DomainError for a zero input.
StageEfficiencies stage_efficiencies(const core::ComplexEnvelope &a_in,
                                     const core::ComplexEnvelope &b_stored,
                                     const core::ComplexEnvelope &a_out);

struct FidelityResult {
  double fidelity = 0.0;
  double best_delay = 0.0;  // lag of a_out behind a_in
};

/// |int conj(A_out(tau + t_d)) A_in(tau) dtau|^2 / (int|A_in|^2 int|A_out|^2),
/// with A_out interpolated on the a_in grid. With `optimize_delay` t_d is
/// scanned over every overlapping shift at the a_in step and refined by a
/// three-point parabola; otherwise t_d = 0. DomainError for a zero norm.
FidelityResult fidelity(const core::ComplexEnvelope &a_in, const core::ComplexEnvelope &a_out,
                        bool optimize_delay);

/// lifetime * bandwidth * pi / (2 ln 2).
double time_bandwidth_product(double lifetime, double bandwidth_fwhm);

struct NoiseFigures {
  double snr = 0.0;   // +infinity for zero noise
  double tnr = 1.0;   // snr + 1
  double single_photon_fidelity = 1.0;  // 1 - 1/(snr + 1)
  double mu1 = 0.0;   // 1/snr
  double mean_noise_photons = 0.0;
};

/// Figures at one input photon per pulse: snr = efficiency / noise.
NoiseFigures noise_figures(double mean_noise_photons, double efficiency);

enum class DecayModel { exponential, gaussian };

struct LifetimeFit {
  double lifetime = 0.0;   // 1/e time T
  double half_life = 0.0;  // T ln 2 (exponential) or T sqrt(ln 2) (Gaussian)
  double initial = 0.0;    // fitted efficiency at zero storage time
  double rms_log_residual = 0.0;
};

/// Least-squares fit of eta0 e^{-t/T} or eta0 e^{-t^2/T^2} to retrieved
/// efficiency against storage time, linear in log eta. Needs at least two
/// points with positive efficiency and a decaying trend.
LifetimeFit fit_lifetime(std::span<const double> storage_times, std::span<const double> efficiencies,
                         DecayModel model);

}  // namespace memsim::metrics
