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
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace memsim::core {

/// Gaussian control Rabi frequency
///   Omega(t) = Omega_0 exp(-[(t - delay) / 2 sigma_c]^2),
/// with sigma_c = duration_fwhm / (2 sqrt(2 ln 2)) and
/// Omega_0 = area / (2 sqrt(pi) sigma_c), so that int Omega dt = area.
struct GaussianControlSpec {
  double area = 0.0;
  double delay = 0.0;
  double duration_fwhm = 1.0;

  void validate() const;
  double sigma() const;
  double peak() const;
  double operator()(double t) const;
  /// [delay - 6 sigma_c, delay + 6 sigma_c]
  std::pair<double, double> support() const;
};

enum class Interpolation { cubic, linear };

/// Free-form complex control envelope through knots (t_k, Omega_k).
/// Natural cubic (or linear) interpolation inside the knot range, zero
/// outside it.
class SplineControlSpec {
 public:
  SplineControlSpec(std::vector<double> knot_times, std::vector<std::complex<double>> knot_values,
                    Interpolation interpolation = Interpolation::cubic);

  std::span<const double> knot_times() const { return times_; }
  std::span<const std::complex<double>> knot_values() const { return values_; }
  Interpolation interpolation() const { return interpolation_; }
  std::size_t size() const { return times_.size(); }

  std::complex<double> operator()(double t) const;
  std::pair<double, double> support() const { return {times_.front(), times_.back()}; }

  /// Same knot times, new values.
  SplineControlSpec with_values(std::vector<std::complex<double>> values) const;

 private:
  std::vector<double> times_;
  std::vector<std::complex<double>> values_;
  std::vector<std::complex<double>> second_derivs_;
  Interpolation interpolation_;
};

/// Absent control (pure absorption), Gaussian, or spline Rabi envelope.
using ControlField = std::variant<std::monostate, GaussianControlSpec, SplineControlSpec>;

std::complex<double> control_value(const ControlField &control, double t);
bool has_control(const ControlField &control);
/// Interval outside which the control vanishes (empty pair for no control).
std::pair<double, double> control_support(const ControlField &control);
/// Sample a Gaussian control onto spline knots.
SplineControlSpec to_spline(const ControlField &control, std::span<const double> knot_times,
                            Interpolation interpolation = Interpolation::cubic);

}  // namespace memsim::core
