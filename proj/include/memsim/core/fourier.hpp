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
#include <memory>
#include <span>
#include <vector>

#include "memsim/core/envelope.hpp"

namespace memsim::core {

/// In-place complex DFT of fixed length backed by FFTW.
///
/// forward:  X_k = sum_n x_n e^{-2 pi i k n / N}
/// backward: x_n = sum_k X_k e^{+2 pi i k n / N}   (unnormalized)
///
/// Plan creation is serialized internally; execution is reentrant, so one
/// plan may be shared by threads as long as each passes its own buffer.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);
  ~FftPlan();
  FftPlan(const FftPlan &) = delete;
  FftPlan &operator=(const FftPlan &) = delete;
  FftPlan(FftPlan &&) noexcept;
  FftPlan &operator=(FftPlan &&) noexcept;

  std::size_t size() const { return n_; }
  void forward(std::span<cplx> data) const;
  void backward(std::span<cplx> data) const;

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

/// Angular frequencies of DFT bin k in natural (unshifted) order.
std::vector<double> dft_frequencies(std::size_t n, double step);

/// Continuous Fourier transform with the convention
///   X(omega) = (1/sqrt(2 pi)) int x(tau) e^{-i omega tau} dtau,
/// sampled on the centered grid omega_k = (k - n/2) * 2 pi / (n * step).
ComplexEnvelope fourier_transform(const ComplexEnvelope &signal);

/// Inverse of fourier_transform onto a tau grid with `count` nodes starting at
/// `tau_start`; the spectrum grid must be the one fourier_transform produces
/// for that time grid.
ComplexEnvelope inverse_fourier_transform(const ComplexEnvelope &spectrum, double tau_start);

}  // namespace memsim::core
