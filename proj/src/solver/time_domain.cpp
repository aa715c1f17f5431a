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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "engine.hpp"
#include "memsim/core/error.hpp"
#include "memsim/core/fourier.hpp"
#include "memsim/solver/solvers.hpp"

namespace memsim::solver {

using core::AxisGrid;
using core::ComplexEnvelope;

core::SimulationResult simulate_time_domain(const StorageRequest &req, const SolverConfig &cfg) {
  return detail::run_engine(req, detail::homogeneous_bins(), cfg, {});
}

double simulate_linear_absorption(const core::MemoryParams &params, const ComplexEnvelope &signal,
                                  const SolverConfig &cfg) {
  const auto res = simulate_time_domain(make_request(params, signal), cfg);
  if (!(res.energy.signal > 0.0)) throw DomainError("signal has zero energy");
  return 1.0 - res.energy.transmitted / res.energy.signal;
}

double linear_absorption_filter(const core::MemoryParams &params, const ComplexEnvelope &signal) {
  params.validate();
  const ComplexEnvelope spec = core::fourier_transform(signal);
  const cplx gbar = params.gamma_bar();
  double in = 0.0, out = 0.0;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const double w = spec.grid().at(j);
    const double s = std::norm(spec[j]);
    const double t = std::exp(-2.0 * params.d * (1.0 / (gbar + cplx(0.0, w))).real());
    in += s;
    out += s * t;
  }
  if (!(in > 0.0)) throw DomainError("signal has zero energy");
  return 1.0 - out / in;
}

double gaussian_linear_absorption(const core::MemoryParams &params, double duration_fwhm) {
  params.validate();
  const double sigma = core::gaussian_sigma(duration_fwhm);
  const double s2 = 2.0 * sigma * sigma;
  const double d = params.d;
  const double delta = params.delta;
  using boost::math::quadrature::gauss_kronrod;
  const double lim = std::numeric_limits<double>::infinity();
  const double den = std::sqrt(std::numbers::pi / s2);
  auto f = [&](double w) {
    const double u = w - delta;
    return std::exp(-s2 * w * w - 2.0 * d / (1.0 + u * u));
  };
  // Split at the line centre so the dip is resolved for narrow spectra.
  const double num = gauss_kronrod<double, 61>::integrate(f, -lim, delta, 15, 1e-13) +
                     gauss_kronrod<double, 61>::integrate(f, delta, lim, 15, 1e-13);
  return 1.0 - num / den;
}

core::SimulationResult simulate_inhomogeneous(const StorageRequest &req,
                                              const core::InhomogeneousProfile &profile,
                                              const SolverConfig &cfg,
                                              std::optional<DetuningFlip> flip) {
  const AxisGrid &dg = profile.detuning_grid();
  const double window = req.signal.grid().span();
  if (dg.step() >= 2.0 * std::numbers::pi / window)
    throw GridError("detuning step " + std::to_string(dg.step()) +
                    " is too coarse for the signal window (needs < 2 pi / " +
                    std::to_string(window) + ")");
  detail::BinSet bins;
  const auto w = profile.weights();
  const auto q = profile.quadrature_weights();
  for (std::size_t i = 0; i < dg.count(); ++i) {
    if (w[i] <= 0.0) continue;  // empty bins carry no coupling
    bins.detuning.push_back(dg.at(i));
    bins.coupling.push_back(std::sqrt(w[i]));
    bins.weight.push_back(q[i]);
  }
  detail::EngineOptions opts;
  if (flip) opts.flip_time = flip->at_time;
  return detail::run_engine(req, bins, cfg, opts);
}

core::SimulationResult simulate_retrieval(const ComplexEnvelope &stored_b,
                                          const core::MemoryParams &params,
                                          const core::ControlField &control,
                                          const SolverConfig &cfg, std::size_t samples) {
  if (samples < 2) throw GridError("retrieval needs at least 2 samples");
  double lo = 0.0, hi = 10.0;
  if (core::has_control(control)) {
    const auto s = core::control_support(control);
    lo = std::min(0.0, s.first);
    hi = s.second + 10.0;
  }
  const AxisGrid grid = AxisGrid::from_range(lo, hi, samples);
  StorageRequest req = make_request(params, ComplexEnvelope::zeros(grid), control);
  req.initial_b = stored_b;
  return simulate_time_domain(req, cfg);
}

double retrieval_efficiency(const core::SimulationResult &result) {
  const double b = result.energy.input - result.energy.signal;
  if (!(b > 0.0)) return 0.0;
  return result.energy.transmitted / b;
}

}  // namespace memsim::solver
