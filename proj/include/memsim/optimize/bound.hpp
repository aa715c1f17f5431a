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

namespace memsim::optimize {

/// Gauss-Legendre nodes and weights on [a, b] (Golub-Welsch).
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Quadrature gauss_legendre(std::size_t n, double a = 0.0, double b = 1.0);

/// e^{-x} I_0(x) for x >= 0, finite for all x.
double scaled_bessel_i0(double x);

/// (d/2) e^{-d(z+z')/2} I_0(d sqrt(z z')), evaluated in scaled form.
double optimal_kernel(double d, double z, double zp);

/// Largest eigenvalue of optimal_kernel on [0,1]^2 by Nystrom discretization
/// with `quadrature_points` Gauss-Legendre nodes, without a convergence check.
double nystrom_largest_eigenvalue(double d, std::size_t quadrature_points);

/// Optical-depth-limited storage efficiency eta_opt. Throws
/// NonconvergenceError when doubling the node count moves the eigenvalue by
/// more than 1e-4. The total (storage + retrieval) bound is eta_opt^2.
double optimal_efficiency_bound(double d, std::size_t quadrature_points = 200);

}  // namespace memsim::optimize
