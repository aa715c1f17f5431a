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

#include "memsim/core/envelope.hpp"

namespace memsim::core {

/// Four-point Lagrange interpolation of a uniformly sampled envelope.
/// Zero outside [first node, last node]; exact on the nodes and for cubics.
/// The map samples -> value is linear, which the kernel builder relies on.
class CubicSampler {
 public:
  explicit CubicSampler(const ComplexEnvelope &env) : env_(env) {}
  cplx operator()(double t) const;

 private:
  const ComplexEnvelope &env_;
};

/// Piecewise-linear resampling of `env` onto `grid` (zero outside).
ComplexEnvelope resample_linear(const ComplexEnvelope &env, const AxisGrid &grid);

}  // namespace memsim::core
