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
#include <cstdint>
#include <functional>
#include <vector>

namespace memsim::optimize {

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct NelderMeadOptions {
  std::size_t max_evaluations = 400;
  double x_tolerance = 1e-4;   // simplex diameter, in units of the box width
  double f_tolerance = 1e-7;   // spread of simplex values
  double initial_step = 0.1;   // fraction of each box width
};

/// Nelder-Mead minimization with trial points projected onto the box
/// [lower, upper].
MinimizeResult nelder_mead(const std::function<double(const std::vector<double> &)> &f,
                           std::vector<double> x0, const std::vector<double> &lower,
                           const std::vector<double> &upper, const NelderMeadOptions &opts = {});

struct BfgsOptions {
  std::size_t max_iterations = 30;
  double gradient_step = 1e-4;   // relative forward-difference step
  double g_tolerance = 1e-6;     // gradient infinity norm
  double f_tolerance = 1e-8;     // minimum improvement per iteration
};

/// Quasi-Newton minimization with forward-difference gradients and a
/// backtracking Armijo line search. Never returns a point worse than x0.
MinimizeResult bfgs(const std::function<double(const std::vector<double> &)> &f,
                    std::vector<double> x0, const BfgsOptions &opts = {});

}  // namespace memsim::optimize
