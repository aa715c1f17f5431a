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

#include "memsim/optimize/minimize.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "memsim/core/error.hpp"

namespace memsim::optimize {

namespace {

void project(std::vector<double> &x, const std::vector<double> &lo, const std::vector<double> &hi) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
}

}  // namespace

MinimizeResult nelder_mead(const std::function<double(const std::vector<double> &)> &f,
                           std::vector<double> x0, const std::vector<double> &lower,
                           const std::vector<double> &upper, const NelderMeadOptions &opts) {
  const std::size_t n = x0.size();
  if (n == 0 || lower.size() != n || upper.size() != n)
    throw DomainError("nelder_mead: dimension mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (!(upper[i] > lower[i])) throw DomainError("nelder_mead: empty box");
  project(x0, lower, upper);

  MinimizeResult res;
  auto eval = [&](const std::vector<double> &x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = upper[i] - lower[i];
    double step = opts.initial_step * w;
    if (simplex[i + 1][i] + step > upper[i]) step = -step;
    simplex[i + 1][i] += step;
    project(simplex[i + 1], lower, upper);
  }
  for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  while (res.evaluations < opts.max_evaluations) {
    ++res.iterations;
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    double diam = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        diam = std::max(diam, std::abs(simplex[i][k] - simplex[best][k]) / (upper[k] - lower[k]));
    if (diam < opts.x_tolerance && std::abs(fv[worst] - fv[best]) < opts.f_tolerance) {
      res.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);

    for (std::size_t k = 0; k < n; ++k) xr[k] = centroid[k] + (centroid[k] - simplex[worst][k]);
    project(xr, lower, upper);
    const double fr = eval(xr);
    if (fr < fv[best]) {
      for (std::size_t k = 0; k < n; ++k) xe[k] = centroid[k] + 2.0 * (centroid[k] - simplex[worst][k]);
      project(xe, lower, upper);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        fv[worst] = fe;
      } else {
        simplex[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    for (std::size_t k = 0; k < n; ++k)
      xc[k] = outside ? centroid[k] + 0.5 * (xr[k] - centroid[k])
                      : centroid[k] + 0.5 * (simplex[worst][k] - centroid[k]);
    const double fc = eval(xc);
    if (fc < std::min(fr, fv[worst])) {
      simplex[worst] = xc;
      fv[worst] = fc;
      continue;
    }
    // Shrink towards the best vertex.
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < n; ++k)
        simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
      fv[i] = eval(simplex[i]);
    }
  }
  const auto it = std::min_element(fv.begin(), fv.end());
  res.x = simplex[static_cast<std::size_t>(it - fv.begin())];
  res.value = *it;
  return res;
}

MinimizeResult bfgs(const std::function<double(const std::vector<double> &)> &f,
                    std::vector<double> x0, const BfgsOptions &opts) {
  const auto n = static_cast<Eigen::Index>(x0.size());
  if (n == 0) throw DomainError("bfgs: empty parameter vector");
  MinimizeResult res;
  auto eval = [&](const Eigen::VectorXd &x) {
    ++res.evaluations;
    const double v = f(std::vector<double>(x.data(), x.data() + x.size()));
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };
  auto gradient = [&](const Eigen::VectorXd &x, double fx) {
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double h = opts.gradient_step * std::max(1.0, std::abs(x(i)));
      Eigen::VectorXd xp = x;
      xp(i) += h;
      g(i) = (eval(xp) - fx) / h;
    }
    return g;
  };

  Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(x0.data(), n);
  double fx = eval(x);
  Eigen::VectorXd g = gradient(x, fx);
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    ++res.iterations;
    if (g.lpNorm<Eigen::Infinity>() < opts.g_tolerance) {
      res.converged = true;
      break;
    }
    Eigen::VectorXd p = -hinv * g;
    if (p.dot(g) >= 0.0) {
      hinv.setIdentity();
      p = -g;
    }
    double alpha = 1.0;
    double fn = 0.0;
    Eigen::VectorXd xn;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      xn = x + alpha * p;
      fn = eval(xn);
      if (fn <= fx + 1e-4 * alpha * g.dot(p)) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted || fx - fn < opts.f_tolerance) {
      if (accepted && fn < fx) {
        x = xn;
        fx = fn;
      }
      res.converged = true;
      break;
    }
    const Eigen::VectorXd gn = gradient(xn, fn);
    const Eigen::VectorXd s = xn - x;
    const Eigen::VectorXd yv = gn - g;
    const double sy = s.dot(yv);
    if (sy > 1e-12 * s.norm() * yv.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
      hinv = (id - rho * s * yv.transpose()) * hinv * (id - rho * yv * s.transpose()) +
             rho * s * s.transpose();
    }
    x = xn;
    fx = fn;
    g = gn;
  }
  res.x.assign(x.data(), x.data() + n);
  res.value = fx;
  return res;
}

}  // namespace memsim::optimize
