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

#include "engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "memsim/core/error.hpp"
#include "memsim/core/interp.hpp"

namespace memsim::solver::detail {

using core::AxisGrid;
using core::ComplexEnvelope;

BinSet homogeneous_bins() { return BinSet{{0.0}, {1.0}, {1.0}}; }

std::size_t effective_z_points(const SolverConfig &cfg, double d) {
  const auto need = static_cast<std::size_t>(std::ceil(16.0 * d)) + 1;
  return std::max(cfg.z_points, need);
}

namespace {

double control_peak(const core::ControlField &control) {
  if (const auto *g = std::get_if<core::GaussianControlSpec>(&control)) return g->peak();
  if (const auto *s = std::get_if<core::SplineControlSpec>(&control)) {
    double m = 0.0;
    for (const auto &v : s->knot_values()) m = std::max(m, std::abs(v));
    return 1.5 * m;
  }
  return 0.0;
}

double control_feature(const core::ControlField &control) {
  if (const auto *g = std::get_if<core::GaussianControlSpec>(&control))
    return g->duration_fwhm / 40.0;
  if (const auto *s = std::get_if<core::SplineControlSpec>(&control)) {
    const auto t = s->knot_times();
    double m = t.back() - t.front();
    for (std::size_t i = 1; i < t.size(); ++i) m = std::min(m, t[i] - t[i - 1]);
    return m / 4.0;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

double max_tau_step(const StorageRequest &req, const SolverConfig &cfg, double max_bin_detuning) {
  const auto &g = req.signal.grid();
  const double rate = std::abs(req.gamma_bar()) + req.params.d + req.params.gamma_b +
                      max_bin_detuning + 0.5 * control_peak(req.control);
  double h = std::min(g.step(), g.span() / static_cast<double>(cfg.tau_points - 1));
  h = std::min(h, 0.5 / rate);
  h = std::min(h, control_feature(req.control));
  return h;
}

void check_energy(const core::EnergyBudget &e, const SolverConfig &cfg, const char *solver) {
  const double r = e.relative_residual();
  if (!(r <= cfg.energy_tolerance)) {
    std::ostringstream os;
    os << solver << ": energy budget residual " << r << " exceeds tolerance "
       << cfg.energy_tolerance;
    throw NonconvergenceError(os.str(), r);
  }
}

core::SimulationResult run_engine(const StorageRequest &req, const BinSet &bins,
                                  const SolverConfig &cfg, const EngineOptions &opts) {
  cfg.validate();
  req.validate();
  const std::size_t nb = bins.detuning.size();
  if (nb == 0 || bins.coupling.size() != nb || bins.weight.size() != nb)
    throw DomainError("inconsistent detuning bins");
  if (nb > 1 && (req.initial_p || req.initial_b))
    throw UnsupportedError("initial coherences are only supported for a homogeneous medium");

  const double sd = std::sqrt(req.params.d);
  const cplx gbar = req.gamma_bar();
  const double gb = req.params.gamma_b;
  const std::size_t nz = effective_z_points(cfg, req.params.d);
  const AxisGrid zgrid = AxisGrid::from_range(0.0, 1.0, nz);
  const std::vector<double> wz = zgrid.trapezoid_weights();

  double max_det = 0.0;
  for (double x : bins.detuning) max_det = std::max(max_det, std::abs(x));
  const AxisGrid &sg = req.signal.grid();
  const double hmax = max_tau_step(req, cfg, max_det);
  const auto sub = static_cast<std::size_t>(std::ceil(sg.step() / hmax - 1e-9));
  const double h = sg.step() / static_cast<double>(sub);

  const core::CubicSampler a_in(req.signal);
  const std::size_t ns = nb * nz;
  const std::size_t np = 2 * ns;
  const std::size_t nacc = 4;  // input, transmitted, decayed_p, decayed_b
  std::vector<cplx> y(np + nacc, cplx{});

  double initial_energy = 0.0;
  if (req.initial_p) {
    const core::CubicSampler s(*req.initial_p);
    for (std::size_t k = 0; k < nz; ++k) y[k] = s(zgrid.at(k));
  }
  if (req.initial_b) {
    const core::CubicSampler s(*req.initial_b);
    for (std::size_t k = 0; k < nz; ++k) y[ns + k] = s(zgrid.at(k));
  }
  for (std::size_t k = 0; k < nz; ++k)
    for (std::size_t b = 0; b < nb; ++b)
      initial_energy += wz[k] * bins.weight[b] *
                        (std::norm(y[b * nz + k]) + std::norm(y[ns + b * nz + k]));

  double flip_sign = 1.0;
  std::vector<cplx> a_node(nz);

  // Field at the nodes used as the P source, and the output field.
  auto build_a = [&](const std::vector<cplx> &st, cplx ain) {
    cplx run = ain;
    for (std::size_t k = 0; k < nz; ++k) {
      cplx s{};
      for (std::size_t b = 0; b < nb; ++b) s += bins.weight[b] * bins.coupling[b] * st[b * nz + k];
      a_node[k] = run - sd * (0.5 * wz[k]) * s;
      run -= sd * wz[k] * s;
    }
    return run;
  };

  auto rhs = [&](double t, const std::vector<cplx> &st, std::vector<cplx> &dy) {
    const cplx ain = a_in(t);
    const cplx om = core::control_value(req.control, t);
    const cplx half_om = 0.5 * om;
    const cplx half_omc = 0.5 * std::conj(om);
    const cplx aout = build_a(st, ain);
    const cplx i1(0.0, 1.0);
    double dec_p = 0.0;
    double dec_b = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      const cplx rate = gbar - i1 * (flip_sign * bins.detuning[b]);
      const double src = sd * bins.coupling[b];
      const double wb = bins.weight[b];
      const cplx *p = &st[b * nz];
      const cplx *bb = &st[ns + b * nz];
      cplx *dp = &dy[b * nz];
      cplx *db = &dy[ns + b * nz];
      double sp = 0.0, sb = 0.0;
      for (std::size_t k = 0; k < nz; ++k) {
        dp[k] = -rate * p[k] + src * a_node[k] - i1 * half_om * bb[k];
        db[k] = -gb * bb[k] - i1 * half_omc * p[k];
        sp += wz[k] * std::norm(p[k]);
        sb += wz[k] * std::norm(bb[k]);
      }
      dec_p += wb * sp;
      dec_b += wb * sb;
    }
    dy[np + 0] = std::norm(ain);
    dy[np + 1] = std::norm(aout);
    dy[np + 2] = 2.0 * gbar.real() * dec_p;
    dy[np + 3] = 2.0 * gb * dec_b;
  };

  std::vector<cplx> k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());
  auto step = [&](double t, double dt) {
    const std::size_t n = y.size();
    if (cfg.method == Method::rk4) {
      rhs(t, y, k1);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + (0.5 * dt) * k1[i];
      rhs(t + 0.5 * dt, tmp, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + (0.5 * dt) * k2[i];
      rhs(t + 0.5 * dt, tmp, k3);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
      rhs(t + dt, tmp, k4);
      for (std::size_t i = 0; i < n; ++i)
        y[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    } else {
      rhs(t, y, k1);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k1[i];
      rhs(t + dt, tmp, k2);
      for (std::size_t i = 0; i < n; ++i) y[i] += (0.5 * dt) * (k1[i] + k2[i]);
    }
  };

  struct Event {
    double time;
    bool pi;  // otherwise a detuning flip
  };
  std::vector<Event> events;
  if (req.pi_pulse.instantaneous) events.push_back({req.pi_pulse.at_time, true});
  if (opts.flip_time) {
    if (*opts.flip_time < sg.start() || *opts.flip_time > sg.last())
      throw GridError("detuning flip time lies outside the signal window");
    events.push_back({*opts.flip_time, false});
  }
  std::sort(events.begin(), events.end(), [](const Event &a, const Event &b) { return a.time < b.time; });
  std::size_t next_event = 0;
  auto apply = [&](const Event &e) {
    if (e.pi) {
      const cplx mi(0.0, -1.0);
      for (std::size_t i = 0; i < ns; ++i) {
        const cplx p = y[i];
        y[i] = mi * y[ns + i];
        y[ns + i] = mi * p;
      }
    } else {
      flip_sign = -flip_sign;
    }
  };

  const double t0 = sg.start();
  while (next_event < events.size() && events[next_event].time <= t0) apply(events[next_event++]);

  std::vector<cplx> out(sg.count());
  out[0] = build_a(y, req.signal[0]);
  for (std::size_t n = 0; n + 1 < sg.count(); ++n) {
    for (std::size_t j = 0; j < sub; ++j) {
      double ta = sg.at(n) + h * static_cast<double>(j);
      const double tb = (j + 1 == sub) ? sg.at(n + 1) : ta + h;
      while (next_event < events.size() && events[next_event].time <= tb) {
        const Event &e = events[next_event++];
        if (e.time > ta) {
          step(ta, e.time - ta);
          ta = e.time;
        }
        apply(e);
      }
      if (tb > ta) step(ta, tb - ta);
    }
    out[n + 1] = build_a(y, req.signal[n + 1]);
  }

  std::vector<cplx> pf(nz), bf(nz);
  double stored_p = 0.0, stored_b = 0.0;
  for (std::size_t k = 0; k < nz; ++k) {
    for (std::size_t b = 0; b < nb; ++b) {
      const double c = bins.weight[b] * bins.coupling[b];
      pf[k] += c * y[b * nz + k];
      bf[k] += c * y[ns + b * nz + k];
      stored_p += wz[k] * bins.weight[b] * std::norm(y[b * nz + k]);
      stored_b += wz[k] * bins.weight[b] * std::norm(y[ns + b * nz + k]);
    }
  }
  core::EnergyBudget e;
  e.signal = y[np + 0].real();
  e.input = e.signal + initial_energy;
  e.transmitted = y[np + 1].real();
  e.stored_p = stored_p;
  e.stored_b = stored_b;
  e.decayed_p = y[np + 2].real();
  e.decayed_b = y[np + 3].real();

  core::SimulationResult res{ComplexEnvelope(sg, std::move(out)), ComplexEnvelope(zgrid, std::move(pf)),
                             ComplexEnvelope(zgrid, std::move(bf)), e, {}};
  if (req.gamma_bar_override) {
    std::ostringstream os;
    os << "gamma_bar overridden to (" << gbar.real() << ", " << gbar.imag()
       << "); decayed_p uses 2 Re of the override";
    res.warnings.push_back(os.str());
  }
  check_energy(e, cfg, "time-domain solver");
  return res;
}

}  // namespace memsim::solver::detail
