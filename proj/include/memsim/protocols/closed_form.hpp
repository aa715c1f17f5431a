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

#include "memsim/core/grid.hpp"
#include "memsim/core/profile.hpp"

namespace memsim::protocols {

/// Atomic frequency comb: Gaussian teeth under a Gaussian envelope.
struct AfcSpec {
  double total_width = 0.0;   // envelope FWHM
  double tooth_width = 0.0;   // tooth FWHM
  double tooth_spacing = 0.0;
  double peak_d = 0.0;

  double finesse() const { return tooth_spacing / tooth_width; }
  /// DomainError unless tooth_width < tooth_spacing <= total_width.
  void validate() const;
};

enum class AfcDirection { forward, backward };

/// Optical fiber used as a delay line.
struct FiberSpec {
  double loss_db_per_km = 0.0;
  double group_velocity = 2.04e8;  // m/s
  double gvd = 0.0;                // s^2/m

  void validate() const;
};

/// 1 - e^{-2d}: absorption with the polarization decay neglected, followed by
/// a perfect pi-pulse transfer.
double att_storage_efficiency(double d);

/// (1 - e^{-d r})^2 with r the ratio of the broadened to the bare linewidth.
double crib_efficiency(double d, double linewidth_ratio);

/// Forward: (d/F)^2 e^{-7/F^2} e^{-d/F}; backward: (1 - e^{-d/F})^2 e^{-7/F^2}.
double afc_efficiency(const AfcSpec &spec, AfcDirection direction);

/// d^2 e^{-d} e^{-4 gap / T2}. Pass an infinite t2 to drop the decay factor.
double rose_efficiency(double d, double rephase_gap, double t2);

/// 10^{-eps c_n tau / 10} with eps in dB/m.
double fiber_delay_efficiency(const FiberSpec &spec, double storage_time);

/// Storage time at which the fiber transmission falls to 1/e.
double fiber_one_over_e_time(const FiberSpec &spec);

/// Longest storage time whose dispersion keeps the fidelity above
/// `target_fidelity` for a Gaussian of intensity FWHM `bandwidth_fwhm` (Hz):
///   t = sqrt(1 - F^2) / (F sigma_w^2 |beta| c_n),  sigma_w = pi BW / sqrt(2 ln 2).
/// Returns +infinity when the fiber has no dispersion.
double fiber_dispersion_tradeoff(const FiberSpec &spec, double target_fidelity,
                                 double bandwidth_fwhm);

/// RMS angular width of the intensity spectrum for an FWHM bandwidth in Hz.
double spectral_sigma(double bandwidth_fwhm);

/// Normalized comb profile on `detuning_grid` (teeth centred on multiples of
/// the spacing). GridError if a tooth is sampled by fewer than 8 points.
core::InhomogeneousProfile afc_comb_profile(const AfcSpec &spec, const core::AxisGrid &detuning_grid);

/// Total optical depth that gives `spec.peak_d` at the comb tooth nearest
/// zero detuning, where the effective depth is d int p(D) / (1 + D^2) dD.
double afc_solver_depth(const AfcSpec &spec, const core::InhomogeneousProfile &profile);

}  // namespace memsim::protocols
