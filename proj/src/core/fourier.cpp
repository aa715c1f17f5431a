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

#include "memsim/core/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

#include "memsim/core/error.hpp"

namespace memsim::core {

namespace {
std::mutex &planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct FftPlan::Impl {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

FftPlan::FftPlan(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n == 0) throw GridError("FFT length must be > 0");
  const int len = static_cast<int>(n);
  fftw_complex *buf = fftw_alloc_complex(n);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    // FFTW_UNALIGNED lets fftw_execute_dft run on caller buffers.
    impl_->fwd = fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    impl_->bwd = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  fftw_free(buf);
  if (!impl_->fwd || !impl_->bwd) throw GridError("FFTW plan creation failed");
}

FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan &&) noexcept = default;
FftPlan &FftPlan::operator=(FftPlan &&) noexcept = default;

void FftPlan::forward(std::span<cplx> data) const {
  if (data.size() != n_) throw GridError("FFT buffer length mismatch");
  auto *p = reinterpret_cast<fftw_complex *>(data.data());
  fftw_execute_dft(impl_->fwd, p, p);
}

void FftPlan::backward(std::span<cplx> data) const {
  if (data.size() != n_) throw GridError("FFT buffer length mismatch");
  auto *p = reinterpret_cast<fftw_complex *>(data.data());
  fftw_execute_dft(impl_->bwd, p, p);
}

std::vector<double> dft_frequencies(std::size_t n, double step) {
  std::vector<double> w(n);
  const double dw = 2.0 * std::numbers::pi / (static_cast<double>(n) * step);
  for (std::size_t k = 0; k < n; ++k) {
    const auto kk = static_cast<long long>(k);
    const auto nn = static_cast<long long>(n);
    w[k] = dw * static_cast<double>(kk < (nn + 1) / 2 ? kk : kk - nn);
  }
  return w;
}

ComplexEnvelope fourier_transform(const ComplexEnvelope &signal) {
  const std::size_t n = signal.size();
  const double dt = signal.grid().step();
  const double t0 = signal.grid().start();
  const double dw = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
  const auto half = static_cast<long long>(n / 2);

  std::vector<cplx> buf(signal.samples().begin(), signal.samples().end());
  FftPlan plan(n);
  plan.forward(buf);

  std::vector<cplx> out(n);
  const double scale = dt / std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t j = 0; j < n; ++j) {
    const long long k = static_cast<long long>(j) - half;
    const std::size_t src =
        static_cast<std::size_t>((k % static_cast<long long>(n) + static_cast<long long>(n)) %
                                 static_cast<long long>(n));
    const double w = dw * static_cast<double>(k);
    out[j] = scale * buf[src] * std::polar(1.0, -w * t0);
  }
  return ComplexEnvelope(AxisGrid(-dw * static_cast<double>(half), dw, n), std::move(out));
}

ComplexEnvelope inverse_fourier_transform(const ComplexEnvelope &spectrum, double tau_start) {
  const std::size_t n = spectrum.size();
  const double dw = spectrum.grid().step();
  const double dt = 2.0 * std::numbers::pi / (static_cast<double>(n) * dw);
  const auto half = static_cast<long long>(n / 2);
  const auto nn = static_cast<long long>(n);

  std::vector<cplx> buf(n);
  for (std::size_t j = 0; j < n; ++j) {
    const long long k = static_cast<long long>(j) - half;
    const std::size_t dst = static_cast<std::size_t>((k % nn + nn) % nn);
    const double w = dw * static_cast<double>(k);
    buf[dst] = spectrum[j] * std::polar(1.0, w * tau_start);
  }
  FftPlan plan(n);
  plan.backward(buf);
  const double scale = dw / std::sqrt(2.0 * std::numbers::pi);
  for (cplx &x : buf) x *= scale;
  return ComplexEnvelope(AxisGrid(tau_start, dt, n), std::move(buf));
}

}  // namespace memsim::core
