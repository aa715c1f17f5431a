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

#include <functional>
#include <span>
#include <vector>

#include "memsim/core/grid.hpp"

namespace memsim::core {

/// Normalized fraction of atoms p(Delta) at each inhomogeneous detuning.
///
/// The trapezoidal integral of the weights over the detuning grid is 1; the
/// same trapezoid weights are used when summing per-bin coherences.
class InhomogeneousProfile {
 public:
  /// Throws DomainError if any weight is negative or the integral is not 1
  /// within 1e-9.
  InhomogeneousProfile(AxisGrid detuning_grid, std::vector<double> weights);

  /// Normalizes an arbitrary nonnegative shape before construction.
  static InhomogeneousProfile from_shape(const AxisGrid &grid,
                                         const std::function<double(double)> &shape);
  static InhomogeneousProfile gaussian(double fwhm, const AxisGrid &grid, double center = 0.0);
  static InhomogeneousProfile lorentzian(double fwhm, const AxisGrid &grid, double center = 0.0);
  /// A single line at `detuning`: one interior bin carrying all the weight.
  /// The grid is built around it with `half_bins` empty bins on each side.
  static InhomogeneousProfile delta_line(double detuning, double bin_width,
                                         std::size_t half_bins = 1);

  const AxisGrid &detuning_grid() const { return grid_; }
  std::span<const double> weights() const { return weights_; }
  /// Trapezoid weight of each bin (quadrature weight times step).
  std::vector<double> quadrature_weights() const { return grid_.trapezoid_weights(); }
  double integral() const;

  /// Linear interpolation onto `finer`. DomainError if the interpolated
  /// weights integrate to 1 only worse than 1e-6; the residual is then
  /// removed by rescaling.
  InhomogeneousProfile resampled(const AxisGrid &finer) const;

 private:
  AxisGrid grid_;
  std::vector<double> weights_;
};

/// Raw linearly interpolated weights of `profile` on `finer` (zero outside
/// the original detuning range), without renormalization.
std::vector<double> interpolate_weights(const InhomogeneousProfile &profile, const AxisGrid &finer);

}  // namespace memsim::core
