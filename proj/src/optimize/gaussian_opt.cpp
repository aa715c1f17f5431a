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

#include "memsim/optimize/gaussian_opt.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "memsim/core/error.hpp"
#include "memsim/core/parallel.hpp"
#include "memsim/core/random.hpp"
#include "memsim/optimize/minimize.hpp"
#include "memsim/solver/solvers.hpp"

namespace memsim::optimize {

double stored_efficiency(const core::MemoryParams &params, const core::ComplexEnvelope &signal,
                         const core::ControlField &control, const solver::SolverConfig &cfg) {
  core::ComplexEnvelope s = signal;
  if (core::has_control(control)) {
    const auto [lo, hi] = core::control_support(control);
    s = core::zero_padded(signal, lo, hi);
  }
  return solver::simulate_time_domain(solver::make_request(params, s, control), cfg)
      .storage_efficiency();
}

GaussianOptimum optimize_gaussian_control(const core::MemoryParams &params,
                                          const core::ComplexEnvelope &signal,
                                          const core::GaussianControlSpec &init,
                                          const solver::SolverConfig &cfg,
                                          const GaussianSearchOptions &opts) {
  params.validate();
  cfg.validate();
  init.validate();
  if (opts.restarts < 1) throw DomainError("at least one start is required");
  const auto &g = signal.grid();
  const std::vector<double> lower{0.0, g.start(), 4.0 * g.step()};
  const std::vector<double> upper{opts.max_area, g.last(), g.span()};
  const std::vector<double> x_init{init.area, init.delay, init.duration_fwhm};
  for (std::size_t i = 0; i < 3; ++i)
    if (x_init[i] < lower[i] || x_init[i] > upper[i])
      throw DomainError("initial control lies outside the search bounds");

  // Starts after the first are log-uniform in area and duration within a
  // factor 2 of init, and the delay moves by up to the init duration.
  core::Rng rng(opts.seed);
  std::vector<std::vector<double>> starts{x_init};
  for (std::size_t r = 1; r < opts.restarts; ++r) {
    std::vector<double> x{init.area * std::exp2(2.0 * rng.uniform() - 1.0),
                          init.delay + init.duration_fwhm * (2.0 * rng.uniform() - 1.0),
                          init.duration_fwhm * std::exp2(2.0 * rng.uniform() - 1.0)};
    for (std::size_t i = 0; i < 3; ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
    starts.push_back(std::move(x));
  }

  auto objective = [&](const std::vector<double> &x) {
    const core::GaussianControlSpec c{x[0], x[1], x[2]};
    try {
      return -stored_efficiency(params, signal, c, cfg);
    } catch (const NonconvergenceError &) {
      return 1.0;  // worse than any attainable efficiency
    }
  };

  NelderMeadOptions nm;
  nm.max_evaluations = opts.evaluations_per_start;
  nm.x_tolerance = 1e-3;
  nm.f_tolerance = 1e-6;
  std::vector<MinimizeResult> runs(starts.size());
  core::parallel_for(starts.size(), core::resolve_jobs(opts.jobs), [&](std::size_t r) {
    runs[r] = nelder_mead(objective, starts[r], lower, upper, nm);
  });

  GaussianOptimum out;
  std::size_t best = 0;
  double worst = runs[0].value;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    out.evaluations += runs[r].evaluations;
    if (runs[r].value < runs[best].value) best = r;
    worst = std::max(worst, runs[r].value);
  }
  const auto &x = runs[best].x;
  out.control = core::GaussianControlSpec{x[0], x[1], x[2]};
  out.efficiency = std::clamp(stored_efficiency(params, signal, out.control, cfg), 0.0, 1.0);
  ++out.evaluations;
  std::size_t agree = 0;
  for (const auto &r : runs)
    if (r.value - runs[best].value <= 1e-3) ++agree;
  out.converged = agree >= std::min<std::size_t>(2, runs.size());
  out.degenerate = params.d == 0.0 || worst - runs[best].value <= 1e-12;
  return out;
}

}  // namespace memsim::optimize
