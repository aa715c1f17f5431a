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

#include <cstddef>
#include <vector>

namespace memsim::core {

/// Uniform 1-D sampling axis: nodes start + i*step, i = 0..count-1.
///
/// Used for every axis in the toolkit (z in [0,1], tau, omega, detuning).
/// All lengths are normalized (times in 1/gamma, rates in gamma).
class AxisGrid {
 public:
  /// Throws GridError unless step > 0, count >= 2 and the span is finite.
  AxisGrid(double start, double step, std::size_t count);

  /// `count` nodes spanning [first, last] inclusive.
  static AxisGrid from_range(double first, double last, std::size_t count);

  double start() const { return start_; }
  double step() const { return step_; }
  std::size_t count() const { return count_; }
  double span() const { return step_ * static_cast<double>(count_ - 1); }
  double last() const { return start_ + span(); }
  double at(std::size_t i) const { return start_ + step_ * static_cast<double>(i); }

  /// Composite-trapezoid weights (step/2 at the ends, step inside).
  std::vector<double> trapezoid_weights() const;

  /// Same axis refined by an integer factor (shares both end points).
  AxisGrid refined(std::size_t factor) const;

  /// Translate the origin by `offset`.
  AxisGrid shifted(double offset) const { return AxisGrid(start_ + offset, step_, count_); }

  bool same_as(const AxisGrid &other, double rel_tol = 1e-12) const;

 private:
  double start_;
  double step_;
  std::size_t count_;
};

}  // namespace memsim::core
