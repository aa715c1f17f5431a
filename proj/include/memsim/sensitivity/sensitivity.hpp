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
#include <string>
#include <utility>
#include <vector>

#include "memsim/core/control.hpp"
#include "memsim/core/envelope.hpp"
#include "memsim/core/params.hpp"
#include "memsim/solver/request.hpp"

namespace memsim::sensitivity {

/// Shot-to-shot fluctuations of (d, g = tau_FWHM gamma): independent
/// zero-mean normals with standard deviations epsilon_m d and epsilon_m g.
struct FluctuationSpec {
  double epsilon_m = 0.05;
  std::size_t samples = 200;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;  // 0 = all cores

  /// DomainError unless 0 <= epsilon_m < 0.5 and samples >= 100.
  void validate() const;
};

struct ParameterSensitivity {
  std::string name;
  double variance = 0.0;   // V_i
  double index = 0.0;      // V_i / V_tot clipped to [0, 1]
  double raw_index = 0.0;  // estimator output before clipping
};

struct SensitivityReport {
  double mean_efficiency = 0.0;
  double std_efficiency = 0.0;
  double total_variance = 0.0;
  /// Monte-Carlo standard error of std_efficiency (0 for a grid estimate).
  double std_error = 0.0;
  std::size_t evaluations = 0;
  std::vector<ParameterSensitivity> per_parameter;
};

/// The (d, g) pairs fluctuation_variance evaluates, in order. Draws with
/// d <= 0 or g <= 0 are rejected and redrawn.
std::vector<std::pair<double, double>> fluctuation_draws(double d, double g,
                                                         const FluctuationSpec &spec);

/// Mean and spread of eta(d', g') over fluctuation_draws. per_parameter
/// holds the linear first-order share of each of zeta_d and zeta_g. Throws
/// NonconvergenceError when the standard error of the spread exceeds 10%
/// of it.
SensitivityReport fluctuation_variance(const std::function<double(double, double)> &eta, double d,
                                       double g, const FluctuationSpec &spec);

/// Storage efficiency at fluctuated (d', g') with the control held fixed in
/// physical units: durations and delay scale by g'/g, the area is kept.
/// The signal is core::standard_gaussian_signal(g').
double fluctuated_efficiency(const core::MemoryParams &params, double signal_duration,
                             const core::GaussianControlSpec &control, double d, double g,
                             const solver::SolverConfig &cfg);

/// fluctuation_variance of fluctuated_efficiency around (params.d, signal_duration).
SensitivityReport fluctuation_variance(const core::MemoryParams &params, double signal_duration,
                                       const core::GaussianControlSpec &control,
                                       const FluctuationSpec &spec, const solver::SolverConfig &cfg);

/// Variance of eta under a uniform distribution of one parameter on
/// [lo, hi], by composite Simpson quadrature (grid_points is raised to the
/// next odd count).
double oat_variance(const std::function<double(double)> &eta, double lo, double hi,
                    std::size_t grid_points = 257);

/// First-order Sobol' indices from the paired-matrix estimator
///   V_i = mean f(B) (f(A_B^i) - f(A)),
/// with independent uniform draws on each range. Throws
/// NonconvergenceError if any raw index is below -0.05.
SensitivityReport sobol_first_order(const std::function<double(const std::vector<double> &)> &eta,
                                    const std::vector<std::pair<double, double>> &ranges,
                                    std::size_t base_samples, std::uint64_t seed,
                                    std::size_t jobs = 1);

/// Normalized max |d eta| when each knot value is scaled by 1 +- epsilon_g.
/// Zero knots give zero; the largest entry is 1 unless all are zero.
std::vector<double> control_spline_sensitivity_map(const core::MemoryParams &params,
                                                   const core::ComplexEnvelope &signal,
                                                   const core::SplineControlSpec &optimal_control,
                                                   double epsilon_g,
                                                   const solver::SolverConfig &cfg,
                                                   std::size_t jobs = 1);

}  // namespace memsim::sensitivity
