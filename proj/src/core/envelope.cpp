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

#include "memsim/core/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "memsim/core/error.hpp"

namespace memsim::core {

ComplexEnvelope::ComplexEnvelope(AxisGrid grid, std::vector<cplx> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.count()) {
    throw GridError("envelope has " + std::to_string(samples_.size()) + " samples for a grid of " +
                    std::to_string(grid_.count()) + " nodes");
  }
  for (const cplx &s : samples_) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
      throw DomainError("envelope samples must be finite");
    }
  }
}

ComplexEnvelope ComplexEnvelope::zeros(const AxisGrid &grid) {
  return ComplexEnvelope(grid, std::vector<cplx>(grid.count()));
}

ComplexEnvelope ComplexEnvelope::from_function(const AxisGrid &grid,
                                               const std::function<cplx(double)> &f) {
  std::vector<cplx> s(grid.count());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = f(grid.at(i));
  return ComplexEnvelope(grid, std::move(s));
}

ComplexEnvelope ComplexEnvelope::scaled(cplx factor) const {
  std::vector<cplx> s(samples_);
  for (cplx &x : s) x *= factor;
  return ComplexEnvelope(grid_, std::move(s));
}

ComplexEnvelope ComplexEnvelope::shifted(double offset) const {
  return ComplexEnvelope(grid_.shifted(offset), samples_);
}

ComplexEnvelope ComplexEnvelope::normalized() const {
  const double n = envelope_l2(*this);
  if (!(n > 0.0)) throw DomainError("cannot normalize a zero envelope");
  return scaled(1.0 / std::sqrt(n));
}

double envelope_l2(const ComplexEnvelope &env) {
  const auto s = env.samples();
  double acc = 0.0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) acc += std::norm(s[i]);
  acc += 0.5 * (std::norm(s.front()) + std::norm(s.back()));
  return acc * env.grid().step();
}

cplx inner_product(const ComplexEnvelope &a, const ComplexEnvelope &b) {
  if (!a.grid().same_as(b.grid())) throw GridError("inner product needs matching grids");
  const auto x = a.samples();
  const auto y = b.samples();
  cplx acc = 0.5 * (std::conj(x.front()) * y.front() + std::conj(x.back()) * y.back());
  for (std::size_t i = 1; i + 1 < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc * a.grid().step();
}

double gaussian_sigma(double fwhm) { return fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2)); }

ComplexEnvelope make_gaussian_signal(double duration_fwhm, const AxisGrid &grid) {
  if (!(duration_fwhm > 0.0)) throw DomainError("duration_fwhm must be > 0");
  const double sigma = gaussian_sigma(duration_fwhm);
  if (grid.start() > -4.0 * sigma || grid.last() < 4.0 * sigma) {
    throw GridError("signal grid must span at least +-4 sigma (sigma = " + std::to_string(sigma) +
                    ")");
  }
  const double inv = 1.0 / (4.0 * sigma * sigma);
  auto env = ComplexEnvelope::from_function(grid, [inv](double t) { return cplx(std::exp(-t * t * inv)); });
  return env.normalized();
}

double intensity_fwhm(const ComplexEnvelope &env) {
  const auto s = env.samples();
  double peak = 0.0;
  for (const cplx &x : s) peak = std::max(peak, std::norm(x));
  if (!(peak > 0.0)) throw DomainError("cannot measure the width of a zero envelope");
  const double half = 0.5 * peak;
  std::size_t lo = 0, hi = s.size() - 1;
  while (std::norm(s[lo]) < half) ++lo;
  while (std::norm(s[hi]) < half) --hi;
  const AxisGrid &g = env.grid();
  auto cross = [&](std::size_t inside, std::size_t outside) {
    const double fi = std::norm(s[inside]);
    const double fo = std::norm(s[outside]);
    const double f = (fi - half) / (fi - fo);
    return g.at(inside) + f * (g.at(outside) - g.at(inside));
  };
  const double left = lo == 0 ? g.at(0) : cross(lo, lo - 1);
  const double right = hi + 1 == s.size() ? g.last() : cross(hi, hi + 1);
  return right - left;
}

double bandwidth_from_duration(double duration_fwhm) {
  if (!(duration_fwhm > 0.0)) throw DomainError("duration_fwhm must be > 0");
  return 2.0 * std::numbers::ln2 / (std::numbers::pi * duration_fwhm);
}

double duration_from_bandwidth(double bandwidth_fwhm) {
  if (!(bandwidth_fwhm > 0.0)) throw DomainError("bandwidth must be > 0");
  return 2.0 * std::numbers::ln2 / (std::numbers::pi * bandwidth_fwhm);
}

ComplexEnvelope zero_padded(const ComplexEnvelope &env, double lo, double hi) {
  const AxisGrid &g = env.grid();
  const double h = g.step();
  const auto before = static_cast<std::size_t>(std::max(0.0, std::ceil((g.start() - lo) / h - 1e-9)));
  const auto after = static_cast<std::size_t>(std::max(0.0, std::ceil((hi - g.last()) / h - 1e-9)));
  if (before == 0 && after == 0) return env;
  std::vector<cplx> s(before, cplx{});
  s.insert(s.end(), env.samples().begin(), env.samples().end());
  s.resize(s.size() + after, cplx{});
  const AxisGrid out(g.start() - h * static_cast<double>(before), h, s.size());
  return ComplexEnvelope(out, std::move(s));
}

ComplexEnvelope standard_gaussian_signal(double duration_fwhm, std::size_t samples) {
  if (!(duration_fwhm > 0.0) || !std::isfinite(duration_fwhm))
    throw DomainError("signal duration must be finite and > 0");
  return make_gaussian_signal(duration_fwhm,
                              AxisGrid::from_range(-3.0 * duration_fwhm, 3.0 * duration_fwhm, samples));
}

}  // namespace memsim::core
