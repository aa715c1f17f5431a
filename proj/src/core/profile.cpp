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

#include "memsim/core/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "memsim/core/error.hpp"

namespace memsim::core {

namespace {

double trapezoid_integral(const AxisGrid &grid, std::span<const double> w) {
  double acc = 0.5 * (w.front() + w.back());
  for (std::size_t i = 1; i + 1 < w.size(); ++i) acc += w[i];
  return acc * grid.step();
}

}  // namespace

InhomogeneousProfile::InhomogeneousProfile(AxisGrid detuning_grid, std::vector<double> weights)
    : grid_(detuning_grid), weights_(std::move(weights)) {
  if (weights_.size() != grid_.count())
    throw GridError("profile weights do not match the detuning grid");
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) throw DomainError("profile weights must be finite and >= 0");
  }
  const double total = integral();
  if (std::abs(total - 1.0) > 1e-9)
    throw DomainError("profile must integrate to 1 (got " + std::to_string(total) + ")");
}

double InhomogeneousProfile::integral() const { return trapezoid_integral(grid_, weights_); }

InhomogeneousProfile InhomogeneousProfile::from_shape(const AxisGrid &grid,
                                                      const std::function<double(double)> &shape) {
  std::vector<double> w(grid.count());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = shape(grid.at(i));
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0) throw DomainError("profile shape must be finite and >= 0");
  }
  const double total = trapezoid_integral(grid, w);
  if (!(total > 0.0)) throw DomainError("profile shape integrates to zero on this grid");
  for (double &x : w) x /= total;
  return InhomogeneousProfile(grid, std::move(w));
}

InhomogeneousProfile InhomogeneousProfile::gaussian(double fwhm, const AxisGrid &grid,
                                                    double center) {
  if (!(fwhm > 0.0)) throw DomainError("profile fwhm must be > 0");
  const double s = fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
  return from_shape(grid, [=](double x) {
    const double u = (x - center) / s;
    return std::exp(-0.5 * u * u);
  });
}

InhomogeneousProfile InhomogeneousProfile::lorentzian(double fwhm, const AxisGrid &grid,
                                                      double center) {
  if (!(fwhm > 0.0)) throw DomainError("profile fwhm must be > 0");
  const double hw = 0.5 * fwhm;
  return from_shape(grid, [=](double x) {
    const double u = x - center;
    return hw / (u * u + hw * hw);
  });
}

InhomogeneousProfile InhomogeneousProfile::delta_line(double detuning, double bin_width,
                                                      std::size_t half_bins) {
  if (!(bin_width > 0.0)) throw DomainError("bin width must be > 0");
  if (half_bins == 0) throw DomainError("delta line needs at least one empty bin per side");
  const std::size_t n = 2 * half_bins + 1;
  AxisGrid grid(detuning - bin_width * static_cast<double>(half_bins), bin_width, n);
  std::vector<double> w(n, 0.0);
  w[half_bins] = 1.0 / bin_width;
  return InhomogeneousProfile(grid, std::move(w));
}

std::vector<double> interpolate_weights(const InhomogeneousProfile &profile,
                                        const AxisGrid &finer) {
  const AxisGrid &g = profile.detuning_grid();
  const auto w = profile.weights();
  std::vector<double> out(finer.count(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = (finer.at(i) - g.start()) / g.step();
    if (x < -1e-12 || x > static_cast<double>(g.count() - 1) + 1e-12) continue;
    const double xc = std::clamp(x, 0.0, static_cast<double>(g.count() - 1));
    std::size_t k = static_cast<std::size_t>(std::floor(xc));
    if (k >= g.count() - 1) k = g.count() - 2;
    const double f = xc - static_cast<double>(k);
    out[i] = (1.0 - f) * w[k] + f * w[k + 1];
  }
  return out;
}

InhomogeneousProfile InhomogeneousProfile::resampled(const AxisGrid &finer) const {
  std::vector<double> w = interpolate_weights(*this, finer);
  const double total = trapezoid_integral(finer, w);
  if (std::abs(total - 1.0) > 1e-6)
    throw DomainError("resampled profile integrates to " + std::to_string(total) +
                      "; the target grid is too coarse or does not cover the profile");
  for (double &x : w) x /= total;
  return InhomogeneousProfile(finer, std::move(w));
}

}  // namespace memsim::core
