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

#include "memsim/protocols/closed_form.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "memsim/core/error.hpp"

namespace memsim::protocols {

namespace {

void require_depth(double d) {
  if (!std::isfinite(d) || d < 0.0) throw DomainError("optical depth must be finite and >= 0");
}

constexpr double kVacuumLight = 299792458.0;

}  // namespace

void AfcSpec::validate() const {
  if (!(tooth_width > 0.0) || !(tooth_spacing > 0.0) || !(total_width > 0.0))
    throw DomainError("AFC widths must be > 0");
  if (!(tooth_width < tooth_spacing)) throw DomainError("AFC finesse must exceed 1");
  if (tooth_spacing > total_width) throw DomainError("AFC tooth spacing exceeds the comb width");
  require_depth(peak_d);
}

void FiberSpec::validate() const {
  if (!std::isfinite(loss_db_per_km) || loss_db_per_km < 0.0)
    throw DomainError("fiber loss must be finite and >= 0");
  if (!(group_velocity > 0.0) || group_velocity > kVacuumLight)
    throw DomainError("group velocity must lie in (0, c]");
  if (!std::isfinite(gvd)) throw DomainError("gvd must be finite");
}

double att_storage_efficiency(double d) {
  require_depth(d);
  return -std::expm1(-2.0 * d);
}

double crib_efficiency(double d, double linewidth_ratio) {
  require_depth(d);
  if (!(linewidth_ratio > 0.0) || linewidth_ratio > 1.0)
    throw DomainError("linewidth ratio must lie in (0, 1]");
  const double a = -std::expm1(-d * linewidth_ratio);
  return a * a;
}

double afc_efficiency(const AfcSpec &spec, AfcDirection direction) {
  if (!(spec.tooth_width > 0.0) || !(spec.tooth_spacing > 0.0))
    throw DomainError("AFC widths must be > 0");
  const double f = spec.finesse();
  if (!(f > 1.0)) throw DomainError("AFC finesse must exceed 1 (got " + std::to_string(f) + ")");
  require_depth(spec.peak_d);
  const double x = spec.peak_d / f;
  const double dephase = std::exp(-7.0 / (f * f));
  if (direction == AfcDirection::forward) return x * x * std::exp(-x) * dephase;
  const double a = -std::expm1(-x);
  return a * a * dephase;
}

double rose_efficiency(double d, double rephase_gap, double t2) {
  require_depth(d);
  if (!std::isfinite(rephase_gap) || rephase_gap < 0.0)
    throw DomainError("rephase gap must be finite and >= 0");
  if (!(t2 > 0.0)) throw DomainError("T2 must be > 0");
  const double decay = std::isinf(t2) ? 1.0 : std::exp(-4.0 * rephase_gap / t2);
  return d * d * std::exp(-d) * decay;
}

double fiber_delay_efficiency(const FiberSpec &spec, double storage_time) {
  spec.validate();
  if (!std::isfinite(storage_time) || storage_time < 0.0)
    throw DomainError("storage time must be finite and >= 0");
  const double eps = spec.loss_db_per_km * 1e-3;  // dB/m
  return std::pow(10.0, -eps * spec.group_velocity * storage_time / 10.0);
}

double fiber_one_over_e_time(const FiberSpec &spec) {
  spec.validate();
  const double eps = spec.loss_db_per_km * 1e-3;
  if (eps == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(std::numbers::e) / (eps * spec.group_velocity);
}

double spectral_sigma(double bandwidth_fwhm) {
  if (!(bandwidth_fwhm > 0.0)) throw DomainError("bandwidth must be > 0");
  return std::numbers::pi * bandwidth_fwhm / std::sqrt(2.0 * std::numbers::ln2);
}

double fiber_dispersion_tradeoff(const FiberSpec &spec, double target_fidelity,
                                 double bandwidth_fwhm) {
  spec.validate();
  if (!(target_fidelity > 0.0 && target_fidelity < 1.0))
    throw DomainError("target fidelity must lie in (0, 1)");
  const double s = spectral_sigma(bandwidth_fwhm);
  if (spec.gvd == 0.0) return std::numeric_limits<double>::infinity();
  const double f = target_fidelity;
  return std::sqrt(1.0 - f * f) / (f * s * s * std::abs(spec.gvd) * spec.group_velocity);
}

core::InhomogeneousProfile afc_comb_profile(const AfcSpec &spec, const core::AxisGrid &grid) {
  spec.validate();
  if (spec.tooth_width / grid.step() < 8.0)
    throw GridError("detuning grid resolves each tooth with fewer than 8 points (step " +
                    std::to_string(grid.step()) + ", tooth width " +
                    std::to_string(spec.tooth_width) + ")");
  const double k = 1.0 / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
  const double st = spec.tooth_width * k;
  const double se = spec.total_width * k;
  return core::InhomogeneousProfile::from_shape(grid, [&](double x) {
    const double n = std::round(x / spec.tooth_spacing);
    double teeth = 0.0;
    for (double m = n - 3.0; m <= n + 3.0; m += 1.0) {
      const double u = (x - m * spec.tooth_spacing) / st;
      teeth += std::exp(-0.5 * u * u);
    }
    const double v = x / se;
    return teeth * std::exp(-0.5 * v * v);
  });
}

double afc_solver_depth(const AfcSpec &spec, const core::InhomogeneousProfile &profile) {
  const auto &g = profile.detuning_grid();
  const auto w = profile.weights();
  const auto q = profile.quadrature_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < g.count(); ++i) {
    const double x = g.at(i);
    s += q[i] * w[i] / (1.0 + x * x);
  }
  if (!(s > 0.0)) throw DomainError("comb profile has no weight near zero detuning");
  return spec.peak_d / s;
}

}  // namespace memsim::protocols
