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

#include "memsim/optimize/bound.hpp"

#include <Eigen/Dense>
#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "memsim/core/error.hpp"

namespace memsim::optimize {

Quadrature gauss_legendre(std::size_t n, double a, double b) {
  if (n < 1) throw DomainError("quadrature needs at least one node");
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 1; i < m; ++i) {
    const double k = static_cast<double>(i);
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jac(i, i - 1) = beta;
    jac(i - 1, i) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const double half = 0.5 * (b - a);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double v = es.eigenvectors()(0, i);
    q.nodes[static_cast<std::size_t>(i)] = a + half * (es.eigenvalues()(i) + 1.0);
    q.weights[static_cast<std::size_t>(i)] = 2.0 * v * v * half;
  }
  return q;
}

double scaled_bessel_i0(double x) {
  if (!(x >= 0.0)) throw DomainError("scaled_bessel_i0 needs x >= 0");
  if (x < 500.0) return boost::math::cyl_bessel_i(0, x) * std::exp(-x);
  // Asymptotic series; terms shrink quickly for x >= 500.
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 8; ++k) {
    const double c = 2.0 * k - 1.0;
    term *= c * c / (8.0 * k * x);
    sum += term;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

double optimal_kernel(double d, double z, double zp) {
  const double s = std::sqrt(z) - std::sqrt(zp);
  return 0.5 * d * std::exp(-0.5 * d * s * s) * scaled_bessel_i0(d * std::sqrt(z * zp));
}

double nystrom_largest_eigenvalue(double d, std::size_t quadrature_points) {
  if (!std::isfinite(d) || d < 0.0) throw DomainError("d must be finite and >= 0");
  if (quadrature_points < 32) throw DomainError("quadrature_points must be >= 32");
  if (d == 0.0) return 0.0;
  const Quadrature q = gauss_legendre(quadrature_points);
  const auto n = static_cast<Eigen::Index>(quadrature_points);
  Eigen::MatrixXd s(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      const double v = std::sqrt(q.weights[ui] * q.weights[uj]) * optimal_kernel(d, q.nodes[ui], q.nodes[uj]);
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(n - 1);
}

double optimal_efficiency_bound(double d, std::size_t quadrature_points) {
  const double a = nystrom_largest_eigenvalue(d, quadrature_points);
  const double b = nystrom_largest_eigenvalue(d, 2 * quadrature_points);
  if (std::abs(a - b) > 1e-4) {
    std::ostringstream os;
    os << "optimal bound not converged at d = " << d << ": " << a << " vs " << b << " on doubling";
    throw NonconvergenceError(os.str(), std::abs(a - b));
  }
  return b;
}

}  // namespace memsim::optimize
