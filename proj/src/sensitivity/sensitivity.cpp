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

#include "memsim/sensitivity/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "memsim/core/error.hpp"
#include "memsim/core/parallel.hpp"
#include "memsim/core/random.hpp"
#include "memsim/optimize/gaussian_opt.hpp"

namespace memsim::sensitivity {

void FluctuationSpec::validate() const {
  if (!(epsilon_m >= 0.0) || !(epsilon_m < 0.5)) throw DomainError("epsilon_m must lie in [0, 0.5)");
  if (samples < 100) throw DomainError("fluctuation runs need at least 100 samples");
}

std::vector<std::pair<double, double>> fluctuation_draws(double d, double g,
                                                         const FluctuationSpec &spec) {
  spec.validate();
  if (!(d > 0.0) || !(g > 0.0)) throw DomainError("fluctuations need d > 0 and g > 0");
  core::Rng rng(spec.seed);
  std::vector<std::pair<double, double>> out;
  out.reserve(spec.samples);
  while (out.size() < spec.samples) {
    const double dd = d + spec.epsilon_m * d * rng.normal();
    const double gg = g + spec.epsilon_m * g * rng.normal();
    if (dd > 0.0 && gg > 0.0) out.emplace_back(dd, gg);
  }
  return out;
}

SensitivityReport fluctuation_variance(const std::function<double(double, double)> &eta, double d,
                                       double g, const FluctuationSpec &spec) {
  const auto draws = fluctuation_draws(d, g, spec);
  SensitivityReport rep;
  if (spec.epsilon_m == 0.0) {
    rep.mean_efficiency = eta(d, g);
    rep.evaluations = 1;
    rep.per_parameter = {{"d", 0.0, 0.0, 0.0}, {"g", 0.0, 0.0, 0.0}};
    return rep;
  }
  const std::size_t n = draws.size();
  std::vector<double> y(n);
  core::parallel_for(n, core::resolve_jobs(spec.jobs),
                     [&](std::size_t i) { y[i] = eta(draws[i].first, draws[i].second); });
  rep.evaluations = n;

  const double nn = static_cast<double>(n);
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / nn;
  double m2 = 0.0, m4 = 0.0;
  for (double v : y) {
    const double e = (v - mean) * (v - mean);
    m2 += e;
    m4 += e * e;
  }
  m2 /= nn;
  m4 /= nn;
  rep.mean_efficiency = mean;
  rep.total_variance = m2 * nn / (nn - 1.0);
  rep.std_efficiency = std::sqrt(rep.total_variance);
  if (rep.std_efficiency > 0.0) {
    rep.std_error = std::sqrt(std::max(m4 - m2 * m2, 0.0) / nn) / (2.0 * std::sqrt(m2));
    if (rep.std_error > 0.1 * rep.std_efficiency) {
      std::ostringstream os;
      os << "standard error " << rep.std_error << " of sigma_eta " << rep.std_efficiency
         << " exceeds 10%; increase samples";
      throw NonconvergenceError(os.str(), rep.std_error / rep.std_efficiency);
    }
  }

  // Linear first-order share cov(y, x)^2 / var(x) of each input.
  const char *names[2] = {"d", "g"};
  for (int p = 0; p < 2; ++p) {
    double mx = 0.0;
    for (const auto &dr : draws) mx += p == 0 ? dr.first : dr.second;
    mx /= nn;
    double cxy = 0.0, cxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = (p == 0 ? draws[i].first : draws[i].second) - mx;
      cxy += x * (y[i] - mean);
      cxx += x * x;
    }
    const double v = cxx > 0.0 ? cxy * cxy / (cxx * (nn - 1.0)) : 0.0;
    const double raw = rep.total_variance > 0.0 ? v / rep.total_variance : 0.0;
    rep.per_parameter.push_back({names[p], v, std::clamp(raw, 0.0, 1.0), raw});
  }
  return rep;
}

double fluctuated_efficiency(const core::MemoryParams &params, double signal_duration,
                             const core::GaussianControlSpec &control, double d, double g,
                             const solver::SolverConfig &cfg) {
  const double s = g / signal_duration;
  core::MemoryParams p = params;
  p.d = d;
  const core::GaussianControlSpec c{control.area, control.delay * s, control.duration_fwhm * s};
  return optimize::stored_efficiency(p, core::standard_gaussian_signal(g), c, cfg);
}

SensitivityReport fluctuation_variance(const core::MemoryParams &params, double signal_duration,
                                       const core::GaussianControlSpec &control,
                                       const FluctuationSpec &spec, const solver::SolverConfig &cfg) {
  params.validate();
  control.validate();
  return fluctuation_variance(
      [&](double d, double g) {
        return fluctuated_efficiency(params, signal_duration, control, d, g, cfg);
      },
      params.d, signal_duration, spec);
}

double oat_variance(const std::function<double(double)> &eta, double lo, double hi,
                    std::size_t grid_points) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw DomainError("oat_variance needs a finite range with lo < hi");
  if (grid_points < 32) throw DomainError("oat_variance needs at least 32 grid points");
  if (grid_points % 2 == 0) ++grid_points;
  const double h = (hi - lo) / static_cast<double>(grid_points - 1);
  double s1 = 0.0, s2 = 0.0;
  std::vector<double> f(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) f[i] = eta(lo + h * static_cast<double>(i));
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double w = (i == 0 || i + 1 == grid_points) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    s1 += w * f[i];
    s2 += w * f[i] * f[i];
  }
  if (std::all_of(f.begin(), f.end(), [&](double v) { return v == f[0]; })) return 0.0;
  const double scale = h / 3.0 / (hi - lo);
  const double m1 = s1 * scale;
  return std::max(s2 * scale - m1 * m1, 0.0);
}

SensitivityReport sobol_first_order(const std::function<double(const std::vector<double> &)> &eta,
                                    const std::vector<std::pair<double, double>> &ranges,
                                    std::size_t base_samples, std::uint64_t seed,
                                    std::size_t jobs) {
  const std::size_t k = ranges.size();
  if (k < 2) throw DomainError("sobol_first_order needs at least 2 parameters");
  if (base_samples < 256) throw DomainError("sobol_first_order needs at least 256 base samples");
  for (const auto &[lo, hi] : ranges)
    if (!(hi > lo)) throw DomainError("every Sobol' range needs lo < hi");

  const std::size_t n = base_samples;
  core::Rng rng(seed);
  std::vector<std::vector<double>> a(n, std::vector<double>(k)), b = a;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) a[i][j] = rng.uniform(ranges[j].first, ranges[j].second);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) b[i][j] = rng.uniform(ranges[j].first, ranges[j].second);

  // Rows: A, B, then A with column j from B for each j.
  const std::size_t total = n * (k + 2);
  std::vector<double> y(total);
  core::parallel_for(total, core::resolve_jobs(jobs), [&](std::size_t idx) {
    const std::size_t block = idx / n, i = idx % n;
    if (block == 0) {
      y[idx] = eta(a[i]);
    } else if (block == 1) {
      y[idx] = eta(b[i]);
    } else {
      std::vector<double> x = a[i];
      x[block - 2] = b[i][block - 2];
      y[idx] = eta(x);
    }
  });

  SensitivityReport rep;
  rep.evaluations = total;
  const double nn = static_cast<double>(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < 2 * n; ++i) mean += y[i];
  mean /= 2.0 * nn;
  double var = 0.0;
  for (std::size_t i = 0; i < 2 * n; ++i) var += (y[i] - mean) * (y[i] - mean);
  var /= 2.0 * nn - 1.0;
  rep.mean_efficiency = mean;
  rep.total_variance = var;
  rep.std_efficiency = std::sqrt(var);
  for (std::size_t j = 0; j < k; ++j) {
    double vj = 0.0;
    for (std::size_t i = 0; i < n; ++i) vj += y[n + i] * (y[(j + 2) * n + i] - y[i]);
    vj /= nn;
    const double raw = var > 0.0 ? vj / var : 0.0;
    if (raw < -0.05) {
      std::ostringstream os;
      os << "first-order index of parameter " << j << " estimated at " << raw
         << "; increase base_samples";
      throw NonconvergenceError(os.str(), -raw);
    }
    rep.per_parameter.push_back({"x" + std::to_string(j + 1), std::max(vj, 0.0),
                                 std::clamp(raw, 0.0, 1.0), raw});
  }
  return rep;
}

std::vector<double> control_spline_sensitivity_map(const core::MemoryParams &params,
                                                   const core::ComplexEnvelope &signal,
                                                   const core::SplineControlSpec &optimal_control,
                                                   double epsilon_g,
                                                   const solver::SolverConfig &cfg,
                                                   std::size_t jobs) {
  if (!(epsilon_g > 0.0) || !(epsilon_g < 1.0)) throw DomainError("epsilon_g must lie in (0, 1)");
  const std::size_t n = optimal_control.size();
  const double base = optimize::stored_efficiency(params, signal, optimal_control, cfg);
  std::vector<double> delta(2 * n, 0.0);
  core::parallel_for(2 * n, core::resolve_jobs(jobs), [&](std::size_t idx) {
    const std::size_t i = idx / 2;
    const auto v = optimal_control.knot_values();
    if (v[i] == core::cplx{}) return;
    std::vector<core::cplx> w(v.begin(), v.end());
    w[i] *= idx % 2 == 0 ? 1.0 + epsilon_g : 1.0 - epsilon_g;
    delta[idx] = std::abs(
        optimize::stored_efficiency(params, signal, optimal_control.with_values(w), cfg) - base);
  });
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(delta[2 * i], delta[2 * i + 1]);
  const double peak = *std::max_element(out.begin(), out.end());
  if (peak > 0.0)
    for (double &v : out) v /= peak;
  return out;
}

}  // namespace memsim::sensitivity
