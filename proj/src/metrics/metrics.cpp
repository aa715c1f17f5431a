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

#include "memsim/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "memsim/core/error.hpp"
#include "memsim/core/interp.hpp"

namespace memsim::metrics {

using core::ComplexEnvelope;
using core::cplx;

double total_efficiency(const ComplexEnvelope &a_in, const ComplexEnvelope &a_out) {
  const double in = core::envelope_l2(a_in);
  if (!(in > 0.0)) throw DomainError("total_efficiency: input has zero norm");
  return core::envelope_l2(a_out) / in;
}

StageEfficiencies stage_efficiencies(const ComplexEnvelope &a_in, const ComplexEnvelope &b_stored,
                                     const ComplexEnvelope &a_out) {
  const double in = core::envelope_l2(a_in);
  if (!(in > 0.0)) throw DomainError("stage_efficiencies: input has zero norm");
  const double b = core::envelope_l2(b_stored);
  StageEfficiencies s;
  s.storage = b / in;
  if (b > 0.0) {
    s.retrieval = core::envelope_l2(a_out) / b;
    s.total = s.storage * s.retrieval;
  } else {
    s.retrieval_defined = false;
  }
  return s;
}

namespace {

double overlap_fidelity(const ComplexEnvelope &a_in, const core::CubicSampler &out, double norm,
                        double delay) {
  const auto &g = a_in.grid();
  const auto w = g.trapezoid_weights();
  cplx acc{};
  for (std::size_t i = 0; i < a_in.size(); ++i) acc += w[i] * std::conj(out(g.at(i) + delay)) * a_in[i];
  return std::min(std::norm(acc) / norm, 1.0);
}

}  // namespace

FidelityResult fidelity(const ComplexEnvelope &a_in, const ComplexEnvelope &a_out, bool optimize_delay) {
  const double ni = core::envelope_l2(a_in), no = core::envelope_l2(a_out);
  if (!(ni > 0.0) || !(no > 0.0)) throw DomainError("fidelity: zero-norm envelope");
  const core::CubicSampler out(a_out);
  const double norm = ni * no;
  if (!optimize_delay) return {overlap_fidelity(a_in, out, norm, 0.0), 0.0};

  const double h = a_in.grid().step();
  const double lo = a_out.grid().start() - a_in.grid().last();
  const double hi = a_out.grid().last() - a_in.grid().start();
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / h)) + 1;
  std::vector<double> f(n);
  std::size_t best = 0;
  for (std::size_t k = 0; k < n; ++k) {
    f[k] = overlap_fidelity(a_in, out, norm, lo + h * static_cast<double>(k));
    if (f[k] > f[best]) best = k;
  }
  FidelityResult r{f[best], lo + h * static_cast<double>(best)};
  if (best > 0 && best + 1 < n) {
    const double fm = f[best - 1], f0 = f[best], fp = f[best + 1];
    const double den = fm - 2.0 * f0 + fp;
    if (den < 0.0) {
      const double off = 0.5 * (fm - fp) / den;
      const double t = r.best_delay + std::clamp(off, -0.5, 0.5) * h;
      const double ft = overlap_fidelity(a_in, out, norm, t);
      if (ft > r.fidelity) r = {ft, t};
    }
  }
  return r;
}

double time_bandwidth_product(double lifetime, double bandwidth_fwhm) {
  if (!(lifetime >= 0.0)) throw DomainError("lifetime must be >= 0");
  if (!(bandwidth_fwhm > 0.0)) throw DomainError("bandwidth must be > 0");
  return lifetime * bandwidth_fwhm * std::numbers::pi / (2.0 * std::numbers::ln2);
}

NoiseFigures noise_figures(double mean_noise_photons, double efficiency) {
  if (!(mean_noise_photons >= 0.0) || !std::isfinite(mean_noise_photons))
    throw DomainError("mean noise photon number must be finite and >= 0");
  if (!(efficiency > 0.0) || efficiency > 1.0) throw DomainError("efficiency must lie in (0, 1]");
  NoiseFigures nf;
  nf.mean_noise_photons = mean_noise_photons;
  if (mean_noise_photons == 0.0) {
    nf.snr = std::numeric_limits<double>::infinity();
    nf.tnr = nf.snr;
    nf.single_photon_fidelity = 1.0;
    nf.mu1 = 0.0;
    return nf;
  }
  nf.snr = efficiency / mean_noise_photons;
  nf.tnr = nf.snr + 1.0;
  nf.single_photon_fidelity = 1.0 - 1.0 / (nf.snr + 1.0);
  nf.mu1 = mean_noise_photons / efficiency;
  return nf;
}

LifetimeFit fit_lifetime(std::span<const double> storage_times, std::span<const double> efficiencies,
                         DecayModel model) {
  if (storage_times.size() != efficiencies.size()) throw DomainError("fit_lifetime: size mismatch");
  // ln eta = c0 - c1 x with x = t (exponential) or t^2 (Gaussian).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < storage_times.size(); ++i) {
    if (!(efficiencies[i] > 0.0)) continue;
    const double t = storage_times[i];
    const double x = model == DecayModel::exponential ? t : t * t;
    const double y = std::log(efficiencies[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw DomainError("fit_lifetime needs at least two positive efficiencies");
  const double nn = static_cast<double>(n);
  const double den = nn * sxx - sx * sx;
  if (!(den > 0.0)) throw DomainError("fit_lifetime needs distinct storage times");
  const double slope = (nn * sxy - sx * sy) / den;
  const double c0 = (sy - slope * sx) / nn;
  if (!(slope < 0.0)) throw DomainError("fit_lifetime: efficiencies do not decay");
  LifetimeFit fit;
  fit.initial = std::exp(c0);
  fit.lifetime = model == DecayModel::exponential ? -1.0 / slope : 1.0 / std::sqrt(-slope);
  fit.half_life = model == DecayModel::exponential ? fit.lifetime * std::numbers::ln2
                                                   : fit.lifetime * std::sqrt(std::numbers::ln2);
  double ss = 0.0;
  for (std::size_t i = 0; i < storage_times.size(); ++i) {
    if (!(efficiencies[i] > 0.0)) continue;
    const double t = storage_times[i];
    const double x = model == DecayModel::exponential ? t : t * t;
    const double e = std::log(efficiencies[i]) - (c0 + slope * x);
    ss += e * e;
  }
  fit.rms_log_residual = std::sqrt(ss / nn);
  return fit;
}

}  // namespace memsim::metrics
