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

#include "memsim/optimize/control_shape.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "memsim/core/error.hpp"
#include "memsim/core/interp.hpp"
#include "memsim/optimize/gaussian_opt.hpp"

namespace memsim::optimize {

using core::cplx;

namespace {

bool all_real(std::span<const cplx> v) {
  return std::all_of(v.begin(), v.end(), [](cplx c) { return c.imag() == 0.0; });
}

ComplexEnvelope resample_cubic(const ComplexEnvelope &env, const AxisGrid &grid) {
  const core::CubicSampler s(env);
  return ComplexEnvelope::from_function(grid, [&](double t) { return s(t); });
}

}  // namespace

std::pair<core::SplineControlSpec, double> refine_control_knots(
    const core::MemoryParams &params, const core::ComplexEnvelope &signal,
    const core::SplineControlSpec &init, const solver::SolverConfig &cfg,
    const BfgsOptions &opts) {
  const bool real = params.delta == 0.0 && all_real(init.knot_values()) && all_real(signal.samples());
  const std::size_t n = init.size();
  auto unpack = [&](const std::vector<double> &x) {
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = real ? cplx{x[i], 0.0} : cplx{x[2 * i], x[2 * i + 1]};
    return init.with_values(std::move(v));
  };
  std::vector<double> x0;
  for (cplx c : init.knot_values()) {
    x0.push_back(c.real());
    if (!real) x0.push_back(c.imag());
  }
  auto objective = [&](const std::vector<double> &x) {
    try {
      return -stored_efficiency(params, signal, unpack(x), cfg);
    } catch (const NonconvergenceError &) {
      return 1.0;
    }
  };
  const MinimizeResult r = bfgs(objective, x0, opts);
  return {unpack(r.x), -r.value};
}

ControlShapeResult optimize_control_shape(const core::MemoryParams &params,
                                          const core::ComplexEnvelope &target,
                                          std::size_t interpolation_steps,
                                          const solver::SolverConfig &cfg,
                                          const ControlShapeOptions &opts) {
  params.validate();
  cfg.validate();
  if (interpolation_steps < 2) throw DomainError("interpolation_steps must be >= 2");
  if (opts.knots < 4) throw DomainError("a spline control needs at least 4 knots");
  const ComplexEnvelope tgt = target.normalized();

  core::GaussianControlSpec g0;
  if (opts.initial) {
    g0 = *opts.initial;
  } else {
    const double w = core::intensity_fwhm(tgt);
    double centre = 0.0, total = 0.0;
    const auto wt = tgt.grid().trapezoid_weights();
    for (std::size_t i = 0; i < tgt.size(); ++i) {
      centre += wt[i] * std::norm(tgt[i]) * tgt.grid().at(i);
      total += wt[i] * std::norm(tgt[i]);
    }
    g0 = {2.0 * std::numbers::pi, centre / total, w};
  }
  g0.validate();
  const auto [clo, chi] = g0.support();
  std::vector<double> knot_times(opts.knots);
  for (std::size_t i = 0; i < opts.knots; ++i)
    knot_times[i] = clo + (chi - clo) * static_cast<double>(i) / static_cast<double>(opts.knots - 1);
  core::SplineControlSpec control = core::to_spline(g0, knot_times);

  const AxisGrid tau = AxisGrid::from_range(std::min(clo, tgt.grid().start()),
                                            std::max(chi, tgt.grid().last()), opts.kernel_nodes);
  const ComplexEnvelope tgt_k = resample_cubic(tgt, tau).normalized();

  ControlShapeResult out{control, 0.0, stored_efficiency(params, tgt, control, cfg), {}};

  const SignalShapeOptimum first = optimize_signal_shape(params, control, tau, cfg, opts.jobs);
  // Align the mode's global phase with the target so the blend does not cancel.
  const cplx ov = core::inner_product(first.signal, tgt_k);
  // Both endpoints use the same (trapezoid) normalization, so a target equal
  // to the mode gives a zero blend distance.
  const ComplexEnvelope a_opt =
      (std::abs(ov) > 0.0 ? first.signal.scaled(ov / std::abs(ov)) : first.signal).normalized();

  double prev = first.efficiency;
  for (std::size_t k = 0; k < interpolation_steps; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(interpolation_steps - 1);
    std::vector<cplx> blend(tau.count());
    double dist = 0.0;
    for (std::size_t i = 0; i < blend.size(); ++i) {
      blend[i] = (1.0 - s) * a_opt[i] + s * tgt_k[i];
      dist = std::max(dist, std::abs(tgt_k[i] - a_opt[i]));
    }
    const ComplexEnvelope ak = ComplexEnvelope(tau, std::move(blend)).normalized();
    double eta = 0.0;
    if (k == 0) {
      eta = first.efficiency;  // A_0 is already the optimal mode of the seed control
    } else if (dist < 1e-9) {
      eta = prev;  // endpoints coincide: the current control is a fixed point
    } else {
      auto refined = refine_control_knots(params, ak, control, cfg, opts.bfgs);
      control = std::move(refined.first);
      eta = refined.second;
    }
    if (eta < prev - opts.stall_drop)
      throw NonconvergenceError("control-shape homotopy stalled at step " + std::to_string(k), prev - eta);
    out.step_efficiencies.push_back(eta);
    prev = eta;
  }
  out.control = control;
  out.efficiency = stored_efficiency(params, tgt, control, cfg);
  return out;
}

}  // namespace memsim::optimize
