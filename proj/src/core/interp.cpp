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

#include "memsim/core/interp.hpp"

#include <algorithm>
#include <cmath>


namespace memsim::core {

cplx CubicSampler::operator()(double t) const {
  const AxisGrid &g = env_.grid();
  const double x = (t - g.start()) / g.step();
  const auto last = static_cast<double>(g.count() - 1);
  if (x < -1e-12 || x > last + 1e-12) return {0.0, 0.0};
  const std::size_t n = g.count();
  if (n < 4) {
    const double xc = std::clamp(x, 0.0, last);
    std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(xc), n - 2);
    const double f = xc - static_cast<double>(k);
    return (1.0 - f) * env_[k] + f * env_[k + 1];
  }
  // Stencil nodes k-1..k+2, shifted inward at the boundaries.
  long long k = static_cast<long long>(std::floor(x));
  k = std::clamp<long long>(k, 1, static_cast<long long>(n) - 3);
  const double u = x - static_cast<double>(k);
  const double l0 = -u * (u - 1.0) * (u - 2.0) / 6.0;
  const double l1 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
  const double l2 = -(u + 1.0) * u * (u - 2.0) / 2.0;
  const double l3 = (u + 1.0) * u * (u - 1.0) / 6.0;
  const auto i = static_cast<std::size_t>(k);
  return l0 * env_[i - 1] + l1 * env_[i] + l2 * env_[i + 1] + l3 * env_[i + 2];
}

ComplexEnvelope resample_linear(const ComplexEnvelope &env, const AxisGrid &grid) {
  const AxisGrid &g = env.grid();
  std::vector<cplx> out(grid.count());
  const auto last = static_cast<double>(g.count() - 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = (grid.at(i) - g.start()) / g.step();
    if (x < -1e-12 || x > last + 1e-12) continue;
    const double xc = std::clamp(x, 0.0, last);
    std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(xc), g.count() - 2);
    const double f = xc - static_cast<double>(k);
    out[i] = (1.0 - f) * env[k] + f * env[k + 1];
  }
  return ComplexEnvelope(grid, std::move(out));
}

}  // namespace memsim::core
