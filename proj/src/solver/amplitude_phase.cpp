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
#include <numbers>
#include <vector>

#include "engine.hpp"
#include "memsim/core/error.hpp"
#include "memsim/core/interp.hpp"
#include "memsim/solver/solvers.hpp"

namespace memsim::solver {

using core::AxisGrid;
using core::ComplexEnvelope;

namespace {

constexpr double kAmplitudeFloor = 1e-12;
constexpr std::size_t kZRefine = 4;
// Near an amplitude zero the phase turns fast and the phase equations are
// stiff. Steps are halved until no phase turns by more than this per step.
constexpr double kMaxPhaseTurn = 0.3;
constexpr int kMaxHalvings = 12;
// Below this fraction of the field scale (or kAmplitudeFloor) the P and B
// phases are frozen; signed amplitudes then pass through zero without
// spinning.
constexpr double kFrozenPhase = 1e-5;

// Ratio term of a phase equation, clamped where the amplitude vanishes.
double phase_ratio(double num, double amp, double floor) {
  return std::abs(amp) < floor ? 0.0 : num / amp;
}

}  // namespace

core::SimulationResult simulate_amplitude_phase(const StorageRequest &req, const SolverConfig &cfg) {
  cfg.validate();
  req.validate();

  const double sd = std::sqrt(req.params.d);
  const cplx gbar = req.gamma_bar();
  const double gr = gbar.real();
  const double gi = gbar.imag();
  const double gb = req.params.gamma_b;
  // Heun in z is not conservative; the finer grid keeps its budget error
  // well below the tolerance.
  const std::size_t nz = (detail::effective_z_points(cfg, req.params.d) - 1) * kZRefine + 1;
  const AxisGrid zgrid = AxisGrid::from_range(0.0, 1.0, nz);
  const std::vector<double> wz = zgrid.trapezoid_weights();
  const double dz = zgrid.step();

  const AxisGrid &sg = req.signal.grid();
  const double hmax = detail::max_tau_step(req, cfg, 0.0);
  const auto sub = static_cast<std::size_t>(std::ceil(sg.step() / hmax - 1e-9));
  const double h = sg.step() / static_cast<double>(sub);
  const core::CubicSampler a_in(req.signal);

  // State: |P|, arg P, |B|, arg B per node, then the budget accumulators.
  const std::size_t ip = 0, jp = nz, ib = 2 * nz, jb = 3 * nz, nacc = 4 * nz;
  std::vector<double> y(4 * nz + 4, 0.0);
  double initial_energy = 0.0;
  auto load = [&](const std::optional<ComplexEnvelope> &env, std::size_t amp, std::size_t ph) {
    if (!env) return;
    const core::CubicSampler s(*env);
    for (std::size_t k = 0; k < nz; ++k) {
      const cplx v = s(zgrid.at(k));
      y[amp + k] = std::abs(v);
      y[ph + k] = std::arg(v);
      initial_energy += wz[k] * std::norm(v);
    }
  };
  load(req.initial_p, ip, jp);
  load(req.initial_b, ib, jb);

  double scale = 0.0;
  for (cplx v : req.signal.samples()) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 0; k < nz; ++k) scale = std::max({scale, std::abs(y[ip + k]), std::abs(y[ib + k])});
  const double frozen = std::max(kAmplitudeFloor, kFrozenPhase * scale);

  std::vector<double> amp_a(nz), ph_a(nz);
  std::vector<cplx> src_p(nz), src_b(nz);

  // Heun march of (|A|, arg A) through the medium for the current P.
  auto march_a = [&](const std::vector<double> &st, cplx ain) {
    amp_a[0] = std::abs(ain);
    ph_a[0] = std::arg(ain);
    // P between nodes k and k+1 at fraction u, interpolated linearly as a
    // complex value (signed amplitudes make a phase interpolation ambiguous).
    auto p_at = [&](std::size_t k, double u, double &p, double &fp) {
      const cplx v = (1.0 - u) * std::polar(st[ip + k], st[jp + k]) +
                     u * std::polar(st[ip + k + 1], st[jp + k + 1]);
      p = std::abs(v);
      fp = std::arg(v);
    };
    auto f = [&](double p, double fp, double a, double phi, double &da, double &dphi) {
      const double rel = fp - phi;
      da = -sd * p * std::cos(rel);
      dphi = phase_ratio(-sd * p * std::sin(rel), a, kAmplitudeFloor);
    };
    // Heun over [u0, u0 + du] of interval k, halved while the phase turns fast.
    auto heun = [&](auto &&self, std::size_t k, double u0, double du, double &a, double &phi,
                    int depth) -> void {
      double p0, fp0, p1, fp1, da0, dphi0, da1, dphi1;
      p_at(k, u0, p0, fp0);
      f(p0, fp0, a, phi, da0, dphi0);
      const double h = du * dz;
      if (depth < kMaxHalvings && std::abs(dphi0) * h > kMaxPhaseTurn) {
        self(self, k, u0, 0.5 * du, a, phi, depth + 1);
        self(self, k, u0 + 0.5 * du, 0.5 * du, a, phi, depth + 1);
        return;
      }
      p_at(k, u0 + du, p1, fp1);
      f(p1, fp1, a + h * da0, phi + h * dphi0, da1, dphi1);
      a += 0.5 * h * (da0 + da1);
      phi += 0.5 * h * (dphi0 + dphi1);
    };
    for (std::size_t k = 0; k + 1 < nz; ++k) {
      double a = amp_a[k], phi = ph_a[k];
      heun(heun, k, 0.0, 1.0, a, phi, 0);
      amp_a[k + 1] = a;
      ph_a[k + 1] = phi;
    }
    return std::polar(1.0, ph_a[nz - 1]) * amp_a[nz - 1];
  };

  auto rhs = [&](double t, const std::vector<double> &st, std::vector<double> &dy) {
    const cplx ain = a_in(t);
    const cplx om = core::control_value(req.control, t);
    const double w = std::abs(om);
    const double th = std::arg(om);
    const cplx aout = march_a(st, ain);
    double sp = 0.0, sb = 0.0;
    for (std::size_t k = 0; k < nz; ++k) {
      const double a = amp_a[k], fa = ph_a[k];
      const double p = st[ip + k], fp = st[jp + k];
      const double b = st[ib + k], fb = st[jb + k];
      // d|P|/dtau and |P| d(arg P)/dtau
      dy[ip + k] = -gr * p + sd * a * std::cos(fa - fp) + 0.5 * w * b * std::sin(th + fb - fp);
      dy[jp + k] = std::abs(p) < frozen
                       ? 0.0
                       : -gi + (sd * a * std::sin(fa - fp) - 0.5 * w * b * std::cos(th + fb - fp)) / p;
      // d|B|/dtau and |B| d(arg B)/dtau
      dy[ib + k] = -gb * b + 0.5 * w * p * std::sin(fp - th - fb);
      dy[jb + k] = phase_ratio(-0.5 * w * p * std::cos(fp - th - fb), b, frozen);
      src_p[k] = sd * std::polar(a, fa) - cplx(0.0, 0.5) * om * std::polar(b, fb);
      src_b[k] = cplx(0.0, -0.5) * std::conj(om) * std::polar(p, fp);
      sp += wz[k] * p * p;
      sb += wz[k] * b * b;
    }
    dy[nacc + 0] = std::norm(ain);
    dy[nacc + 1] = std::norm(aout);
    dy[nacc + 2] = 2.0 * gr * sp;
    dy[nacc + 3] = 2.0 * gb * sb;
  };

  const std::size_t ny = y.size();
  std::vector<double> k1(ny), k2(ny), k3(ny), k4(ny), tmp(ny);
  // Fastest phase rate over the nodes that matter.
  auto fastest_turn = [&](const std::vector<double> &dy) {
    double m = 0.0;
    for (std::size_t k = 0; k < nz; ++k) {
      if (std::abs(y[ip + k]) > frozen) m = std::max(m, std::abs(dy[jp + k]));
      if (std::abs(y[ib + k]) > frozen) m = std::max(m, std::abs(dy[jb + k]));
    }
    return m;
  };
  auto step = [&](auto &&self, double t, double dt, int depth) -> void {
    rhs(t, y, k1);
    // Anchor undefined phases to the direction of their source.
    bool anchored = false;
    for (std::size_t k = 0; k < nz; ++k) {
      if (std::abs(y[ip + k]) < kAmplitudeFloor && std::abs(src_p[k]) > 0.0) {
        y[jp + k] = std::arg(src_p[k]);
        anchored = true;
      }
      if (std::abs(y[ib + k]) < kAmplitudeFloor && std::abs(src_b[k]) > 0.0) {
        y[jb + k] = std::arg(src_b[k]);
        anchored = true;
      }
    }
    if (anchored) rhs(t, y, k1);
    if (depth < kMaxHalvings && fastest_turn(k1) * dt > kMaxPhaseTurn) {
      self(self, t, 0.5 * dt, depth + 1);
      self(self, t + 0.5 * dt, 0.5 * dt, depth + 1);
      return;
    }
    if (cfg.method == Method::rk4) {
      for (std::size_t i = 0; i < ny; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
      rhs(t + 0.5 * dt, tmp, k2);
      for (std::size_t i = 0; i < ny; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
      rhs(t + 0.5 * dt, tmp, k3);
      for (std::size_t i = 0; i < ny; ++i) tmp[i] = y[i] + dt * k3[i];
      rhs(t + dt, tmp, k4);
      for (std::size_t i = 0; i < ny; ++i)
        y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    } else {
      for (std::size_t i = 0; i < ny; ++i) tmp[i] = y[i] + dt * k1[i];
      rhs(t + dt, tmp, k2);
      for (std::size_t i = 0; i < ny; ++i) y[i] += 0.5 * dt * (k1[i] + k2[i]);
    }
  };

  auto pi_pulse = [&] {
    for (std::size_t k = 0; k < nz; ++k) {
      std::swap(y[ip + k], y[ib + k]);
      std::swap(y[jp + k], y[jb + k]);
      y[jp + k] -= 0.5 * std::numbers::pi;
      y[jb + k] -= 0.5 * std::numbers::pi;
    }
  };
  bool pi_pending = req.pi_pulse.instantaneous;
  if (pi_pending && req.pi_pulse.at_time <= sg.start()) {
    pi_pulse();
    pi_pending = false;
  }

  std::vector<cplx> out(sg.count());
  out[0] = march_a(y, req.signal[0]);
  for (std::size_t n = 0; n + 1 < sg.count(); ++n) {
    for (std::size_t j = 0; j < sub; ++j) {
      double ta = sg.at(n) + h * static_cast<double>(j);
      const double tb = (j + 1 == sub) ? sg.at(n + 1) : ta + h;
      if (pi_pending && req.pi_pulse.at_time <= tb) {
        if (req.pi_pulse.at_time > ta) {
          step(step, ta, req.pi_pulse.at_time - ta, 0);
          ta = req.pi_pulse.at_time;
        }
        pi_pulse();
        pi_pending = false;
      }
      if (tb > ta) step(step, ta, tb - ta, 0);
    }
    out[n + 1] = march_a(y, req.signal[n + 1]);
  }

  std::vector<cplx> pf(nz), bf(nz);
  for (std::size_t k = 0; k < nz; ++k) {
    pf[k] = std::polar(1.0, y[jp + k]) * y[ip + k];
    bf[k] = std::polar(1.0, y[jb + k]) * y[ib + k];
  }
  ComplexEnvelope p_final(zgrid, std::move(pf));
  ComplexEnvelope b_final(zgrid, std::move(bf));

  core::EnergyBudget e;
  e.signal = y[nacc + 0];
  e.input = e.signal + initial_energy;
  e.transmitted = y[nacc + 1];
  e.stored_p = core::envelope_l2(p_final);
  e.stored_b = core::envelope_l2(b_final);
  e.decayed_p = y[nacc + 2];
  e.decayed_b = y[nacc + 3];

  core::SimulationResult res{ComplexEnvelope(sg, std::move(out)), std::move(p_final),
                             std::move(b_final), e, {}};
  if (req.gamma_bar_override) res.warnings.push_back("gamma_bar overridden; decayed_p uses 2 Re of the override");
  detail::check_energy(e, cfg, "amplitude-phase solver");
  return res;
}

}  // namespace memsim::solver
