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

#include "memsim/core/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "memsim/core/error.hpp"

namespace memsim::core {

AxisGrid::AxisGrid(double start, double step, std::size_t count)
    : start_(start), step_(step), count_(count) {
  if (!std::isfinite(start)) throw GridError("grid start must be finite");
  if (!(step > 0.0) || !std::isfinite(step)) throw GridError("grid step must be > 0");
  if (count < 2) throw GridError("grid needs at least 2 nodes");
  if (!std::isfinite(span())) throw GridError("grid span must be finite");
}

AxisGrid AxisGrid::from_range(double first, double last, std::size_t count) {
  if (count < 2) throw GridError("grid needs at least 2 nodes");
  if (!(last > first)) throw GridError("grid range must be increasing");
  return AxisGrid(first, (last - first) / static_cast<double>(count - 1), count);
}

std::vector<double> AxisGrid::trapezoid_weights() const {
  std::vector<double> w(count_, step_);
  w.front() = 0.5 * step_;
  w.back() = 0.5 * step_;
  return w;
}

AxisGrid AxisGrid::refined(std::size_t factor) const {
  if (factor == 0) throw GridError("refinement factor must be >= 1");
  return AxisGrid(start_, step_ / static_cast<double>(factor), (count_ - 1) * factor + 1);
}

bool AxisGrid::same_as(const AxisGrid &other, double rel_tol) const {
  if (count_ != other.count_) return false;
  const double scale = std::max(std::abs(step_), 1e-300);
  return std::abs(step_ - other.step_) <= rel_tol * scale &&
         std::abs(start_ - other.start_) <= rel_tol * std::max(scale, std::abs(start_));
}

}  // namespace memsim::core
