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

#include "memsim/core/control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "memsim/core/error.hpp"

namespace memsim::core {

void GaussianControlSpec::validate() const {
  if (!std::isfinite(area) || area < 0.0) throw DomainError("control area must be finite and >= 0");
  if (!std::isfinite(delay)) throw DomainError("control delay must be finite");
  if (!std::isfinite(duration_fwhm) || !(duration_fwhm > 0.0))
    throw DomainError("control duration must be > 0");
}

double GaussianControlSpec::sigma() const {
  return duration_fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

double GaussianControlSpec::peak() const {
  return area / (2.0 * std::sqrt(std::numbers::pi) * sigma());
}

double GaussianControlSpec::operator()(double t) const {
  const double x = (t - delay) / (2.0 * sigma());
  return peak() * std::exp(-x * x);
}

std::pair<double, double> GaussianControlSpec::support() const {
  const double s = 6.0 * sigma();
  return {delay - s, delay + s};
}

SplineControlSpec::SplineControlSpec(std::vector<double> knot_times,
                                     std::vector<std::complex<double>> knot_values,
                                     Interpolation interpolation)
    : times_(std::move(knot_times)), values_(std::move(knot_values)), interpolation_(interpolation) {
  const std::size_t n = times_.size();
  if (n < 2) throw DomainError("spline control needs at least 2 knots");
  if (values_.size() != n) throw DomainError("spline knot times and values differ in length");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(times_[i]) || !std::isfinite(values_[i].real()) ||
        !std::isfinite(values_[i].imag()))
      throw DomainError("spline knots must be finite");
    if (i > 0 && !(times_[i] > times_[i - 1]))
      throw DomainError("spline knot times must be strictly increasing");
  }
  second_derivs_.assign(n, {0.0, 0.0});
  if (interpolation_ != Interpolation::cubic || n < 3) return;

  // Natural spline: tridiagonal solve for interior second derivatives.
  std::vector<double> diag(n, 0.0), upper(n, 0.0);
  std::vector<std::complex<double>> rhs(n, {0.0, 0.0});
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = times_[i] - times_[i - 1];
    const double h1 = times_[i + 1] - times_[i];
    const double lower = h0 / 6.0;
    diag[i] = (h0 + h1) / 3.0;
    upper[i] = h1 / 6.0;
    rhs[i] = (values_[i + 1] - values_[i]) / h1 - (values_[i] - values_[i - 1]) / h0;
    if (i > 1) {
      const double m = lower / diag[i - 1];
      diag[i] -= m * upper[i - 1];
      rhs[i] -= m * rhs[i - 1];
    }
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    std::complex<double> r = rhs[i];
    if (i + 2 < n) r -= upper[i] * second_derivs_[i + 1];
    second_derivs_[i] = r / diag[i];
    if (i == 1) break;
  }
}

std::complex<double> SplineControlSpec::operator()(double t) const {
  if (t < times_.front() || t > times_.back()) return {0.0, 0.0};
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t k = static_cast<std::size_t>(it - times_.begin());
  if (k == 0) k = 1;
  if (k >= times_.size()) k = times_.size() - 1;
  const double t0 = times_[k - 1];
  const double t1 = times_[k];
  const double h = t1 - t0;
  const double a = (t1 - t) / h;
  const double b = (t - t0) / h;
  std::complex<double> v = a * values_[k - 1] + b * values_[k];
  if (interpolation_ == Interpolation::cubic) {
    v += ((a * a * a - a) * second_derivs_[k - 1] + (b * b * b - b) * second_derivs_[k]) * (h * h) /
         6.0;
  }
  return v;
}

SplineControlSpec SplineControlSpec::with_values(std::vector<std::complex<double>> values) const {
  return SplineControlSpec(times_, std::move(values), interpolation_);
}

std::complex<double> control_value(const ControlField &control, double t) {
  if (const auto *g = std::get_if<GaussianControlSpec>(&control)) return (*g)(t);
  if (const auto *s = std::get_if<SplineControlSpec>(&control)) return (*s)(t);
  return {0.0, 0.0};
}

bool has_control(const ControlField &control) {
  return !std::holds_alternative<std::monostate>(control);
}

std::pair<double, double> control_support(const ControlField &control) {
  if (const auto *g = std::get_if<GaussianControlSpec>(&control)) return g->support();
  if (const auto *s = std::get_if<SplineControlSpec>(&control)) return s->support();
  return {0.0, 0.0};
}

SplineControlSpec to_spline(const ControlField &control, std::span<const double> knot_times,
                            Interpolation interpolation) {
  std::vector<double> t(knot_times.begin(), knot_times.end());
  std::vector<std::complex<double>> v(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) v[i] = control_value(control, t[i]);
  return SplineControlSpec(std::move(t), std::move(v), interpolation);
}

}  // namespace memsim::core
