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
#include <functional>
#include <span>
#include <vector>

#include "memsim/core/grid.hpp"

namespace memsim::core {

using cplx = std::complex<double>;

/// Complex field amplitude sampled on a uniform grid.
///
/// Immutable after construction. The samples may describe A, P, B slices
/// against tau or z, or their Fourier transforms against omega.
class ComplexEnvelope {
 public:
  /// Throws GridError if `samples.size() != grid.count()` and DomainError if
  /// any sample is not finite.
  ComplexEnvelope(AxisGrid grid, std::vector<cplx> samples);

  static ComplexEnvelope zeros(const AxisGrid &grid);
  static ComplexEnvelope from_function(const AxisGrid &grid,
                                       const std::function<cplx(double)> &f);

  const AxisGrid &grid() const { return grid_; }
  std::span<const cplx> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  cplx operator[](std::size_t i) const { return samples_[i]; }

  ComplexEnvelope scaled(cplx factor) const;
  /// Same samples on a translated axis.
  ComplexEnvelope shifted(double offset) const;
  /// Rescaled to unit L2 norm; DomainError for the zero envelope.
  ComplexEnvelope normalized() const;

 private:
  AxisGrid grid_;
  std::vector<cplx> samples_;
};

/// `env` extended with zero samples by whole grid steps until the grid
/// covers [lo, hi]. Returns `env` unchanged when it already does.
ComplexEnvelope zero_padded(const ComplexEnvelope &env, double lo, double hi);

/// Trapezoidal integral of |samples|^2 over the grid.
double envelope_l2(const ComplexEnvelope &env);

/// Trapezoidal inner product <a, b> = int conj(a) b. Grids must match.
cplx inner_product(const ComplexEnvelope &a, const ComplexEnvelope &b);

/// sigma of the amplitude Gaussian exp(-t^2/4 sigma^2) with intensity FWHM `fwhm`.
double gaussian_sigma(double fwhm);

/// Unit-norm Gaussian e^{-tau^2/4 sigma^2} centered at tau = 0.
/// Throws GridError unless the grid covers [-4 sigma, 4 sigma].
ComplexEnvelope make_gaussian_signal(double duration_fwhm, const AxisGrid &grid);

/// make_gaussian_signal on the window [-3 fwhm, 3 fwhm] with `samples` nodes.
ComplexEnvelope standard_gaussian_signal(double duration_fwhm, std::size_t samples = 256);

/// Full width at half maximum of |env|^2, from linear interpolation of the
/// outermost half-maximum crossings. DomainError for the zero envelope.
double intensity_fwhm(const ComplexEnvelope &env);

/// Fourier-limited spectral FWHM 2 ln2 / (pi tau_FWHM).
double bandwidth_from_duration(double duration_fwhm);
/// Inverse of bandwidth_from_duration.
double duration_from_bandwidth(double bandwidth_fwhm);

}  // namespace memsim::core
