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

#include "memsim/protocols/reduced.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "memsim/core/error.hpp"
#include "memsim/core/interp.hpp"

namespace memsim::protocols {

using core::AxisGrid;
using core::ComplexEnvelope;
using core::cplx;

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

// Both reductions eliminate P = g (sqrt(d) A - i (Omega/2) B) with g = 1/gamma_bar
// approximated (g = 1 on resonance, g = i/D far detuned).
core::SimulationResult run_reduced(const solver::StorageRequest &req, cplx g,
                                   const solver::SolverConfig &cfg,
                                   std::vector<std::string> warnings) {
  cfg.validate();
  req.validate();
  if (req.pi_pulse.instantaneous)
    throw UnsupportedError("reduced models do not support instantaneous pi-pulses");
  if (req.initial_p) throw UnsupportedError("reduced models have no polarization state");

  const double d = req.params.d;
  const double sd = std::sqrt(d);
  const double gb = req.params.gamma_b;
  const cplx i1(0.0, 1.0);
  const cplx kappa = d * g;
  // Odd node count: the budget integrals use Simpson's rule because the
  // z march is not conservative and |P|^2 varies on the scale 1/(2d).
  std::size_t nz = std::max(cfg.z_points, static_cast<std::size_t>(std::ceil(16.0 * d)) + 1);
  if (nz % 2 == 0) ++nz;
  const AxisGrid zgrid = AxisGrid::from_range(0.0, 1.0, nz);
  std::vector<double> wz(nz);
  for (std::size_t k = 0; k < nz; ++k) wz[k] = (k % 2 == 0 ? 2.0 : 4.0) * zgrid.step() / 3.0;
  wz.front() = wz.back() = zgrid.step() / 3.0;
  const double dz = zgrid.step();
  const cplx decay = std::exp(-kappa * dz);
  const double loss = g == cplx{} ? 0.0 : 2.0 * (1.0 / g).real();

  const AxisGrid &sg = req.signal.grid();
  const double om_max = control_peak(req.control);
  const double rate = std::abs(g) * (0.25 * om_max * om_max + 0.5 * sd * om_max) + gb + 1.0;
  double hmax = std::min(sg.step(), sg.span() / static_cast<double>(cfg.tau_points - 1));
  hmax = std::min(hmax, 0.5 / rate);
  if (const auto *gc = std::get_if<core::GaussianControlSpec>(&req.control))
    hmax = std::min(hmax, gc->duration_fwhm / 40.0);
  const auto sub = static_cast<std::size_t>(std::ceil(sg.step() / hmax - 1e-9));
  const double h = sg.step() / static_cast<double>(sub);
  const core::CubicSampler a_in(req.signal);

  std::vector<cplx> y(nz + 4, cplx{});
  double initial_energy = 0.0;
  if (req.initial_b) {
    const core::CubicSampler s(*req.initial_b);
    for (std::size_t k = 0; k < nz; ++k) {
      y[k] = s(zgrid.at(k));
      initial_energy += wz[k] * std::norm(y[k]);
    }
  }
  std::vector<cplx> a(nz);

  // Exponential integrator for dA/dz = -kappa A + c B(z): B is interpolated
  // by the cubic through four neighbouring nodes and the weights
  //   int_{z_k}^{z_k+1} e^{-kappa (z_k+1 - z)} L_j(z) dz
  // come from 5-point Gauss-Legendre quadrature. Stencils are shifted inward
  // at the two ends, giving three weight sets.
  if (nz < 4) throw GridError("reduced models need at least 4 z nodes");
  std::array<std::array<cplx, 4>, 3> wts{};
  {
    constexpr std::array<double, 5> gx{0.0, -0.5384693101056831, 0.5384693101056831,
                                       -0.9061798459386640, 0.9061798459386640};
    constexpr std::array<double, 5> gw{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                       0.2369268850561891, 0.2369268850561891};
    for (std::size_t pos = 0; pos < 3; ++pos) {
      for (std::size_t q = 0; q < 5; ++q) {
        // u in stencil units: nodes at 0, 1, 2, 3; interval [pos, pos + 1].
        const double u = static_cast<double>(pos) + 0.5 * (1.0 + gx[q]);
        const cplx f = 0.5 * dz * gw[q] * std::exp(-kappa * dz * (static_cast<double>(pos) + 1.0 - u));
        for (std::size_t j = 0; j < 4; ++j) {
          double l = 1.0;
          for (std::size_t m = 0; m < 4; ++m)
            if (m != j) l *= (u - static_cast<double>(m)) / (static_cast<double>(j) - static_cast<double>(m));
          wts[pos][j] += f * l;
        }
      }
    }
  }
  auto march = [&](const std::vector<cplx> &st, cplx ain, cplx om) {
    const cplx c = i1 * g * sd * 0.5 * om;
    a[0] = ain;
    for (std::size_t k = 0; k + 1 < nz; ++k) {
      const std::size_t s0 = k == 0 ? 0 : std::min(k - 1, nz - 4);
      const auto &w = wts[k - s0];
      const cplx src = w[0] * st[s0] + w[1] * st[s0 + 1] + w[2] * st[s0 + 2] + w[3] * st[s0 + 3];
      a[k + 1] = decay * a[k] + c * src;
    }
    return a[nz - 1];
  };

  auto rhs = [&](double t, const std::vector<cplx> &st, std::vector<cplx> &dy) {
    const cplx ain = a_in(t);
    const cplx om = core::control_value(req.control, t);
    const cplx aout = march(st, ain, om);
    const cplx ca = -i1 * g * sd * 0.5 * std::conj(om);
    const cplx cb = g * 0.25 * std::norm(om) + gb;
    double sp = 0.0, sb = 0.0;
    for (std::size_t k = 0; k < nz; ++k) {
      dy[k] = ca * a[k] - cb * st[k];
      const cplx p = g * (sd * a[k] - i1 * 0.5 * om * st[k]);
      sp += wz[k] * std::norm(p);
      sb += wz[k] * std::norm(st[k]);
    }
    dy[nz + 0] = std::norm(ain);
    dy[nz + 1] = std::norm(aout);
    dy[nz + 2] = loss * sp;
    dy[nz + 3] = 2.0 * gb * sb;
  };

  const std::size_t ny = y.size();
  std::vector<cplx> k1(ny), k2(ny), k3(ny), k4(ny), tmp(ny);
  auto step = [&](double t, double dt) {
    rhs(t, y, k1);
    for (std::size_t i = 0; i < ny; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    rhs(t + 0.5 * dt, tmp, k2);
    for (std::size_t i = 0; i < ny; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    rhs(t + 0.5 * dt, tmp, k3);
    for (std::size_t i = 0; i < ny; ++i) tmp[i] = y[i] + dt * k3[i];
    rhs(t + dt, tmp, k4);
    for (std::size_t i = 0; i < ny; ++i)
      y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  };
  auto step2 = [&](double t, double dt) {
    rhs(t, y, k1);
    for (std::size_t i = 0; i < ny; ++i) tmp[i] = y[i] + dt * k1[i];
    rhs(t + dt, tmp, k2);
    for (std::size_t i = 0; i < ny; ++i) y[i] += 0.5 * dt * (k1[i] + k2[i]);
  };

  std::vector<cplx> out(sg.count());
  out[0] = march(y, req.signal[0], core::control_value(req.control, sg.at(0)));
  for (std::size_t n = 0; n + 1 < sg.count(); ++n) {
    for (std::size_t j = 0; j < sub; ++j) {
      const double ta = sg.at(n) + h * static_cast<double>(j);
      const double dt = (j + 1 == sub) ? sg.at(n + 1) - ta : h;
      if (cfg.method == solver::Method::rk4) step(ta, dt);
      else step2(ta, dt);
    }
    out[n + 1] = march(y, req.signal[n + 1], core::control_value(req.control, sg.at(n + 1)));
  }

  // P at the final time follows from the elimination.
  const cplx om_end = core::control_value(req.control, sg.last());
  march(y, req.signal[sg.count() - 1], om_end);
  std::vector<cplx> pf(nz), bf(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(nz));
  for (std::size_t k = 0; k < nz; ++k) pf[k] = g * (sd * a[k] - i1 * 0.5 * om_end * y[k]);
  ComplexEnvelope p_final(zgrid, std::move(pf));
  ComplexEnvelope b_final(zgrid, std::move(bf));

  core::EnergyBudget e;
  e.signal = y[nz + 0].real();
  e.input = e.signal + initial_energy;
  e.transmitted = y[nz + 1].real();
  // The eliminated polarization carries no energy of its own.
  for (std::size_t k = 0; k < nz; ++k) e.stored_b += wz[k] * std::norm(b_final[k]);
  e.decayed_p = y[nz + 2].real();
  e.decayed_b = y[nz + 3].real();

  core::SimulationResult res{ComplexEnvelope(sg, std::move(out)), std::move(p_final),
                             std::move(b_final), e, std::move(warnings)};
  const double r = e.relative_residual();
  if (!(r <= cfg.energy_tolerance)) {
    std::ostringstream os;
    os << "reduced model: energy budget residual " << r << " exceeds tolerance "
       << cfg.energy_tolerance;
    throw NonconvergenceError(os.str(), r);
  }
  return res;
}

}  // namespace

core::SimulationResult eit_reduced_simulate(const solver::StorageRequest &req,
                                            const solver::SolverConfig &cfg) {
  std::vector<std::string> warnings;
  if (req.params.delta != 0.0) warnings.push_back("EIT reduction assumes delta = 0; detuning ignored");
  const double tau = core::intensity_fwhm(req.signal);
  const double adiabaticity = req.params.d * tau;
  if (adiabaticity < 10.0) {
    std::ostringstream os;
    os << "EIT reduction outside adiabatic regime: d tau_FWHM = " << adiabaticity << " < 10";
    warnings.push_back(os.str());
  }
  return run_reduced(req, cplx(1.0, 0.0), cfg, std::move(warnings));
}

core::SimulationResult raman_reduced_simulate(const solver::StorageRequest &req,
                                              double normalized_detuning,
                                              const solver::SolverConfig &cfg) {
  if (!std::isfinite(normalized_detuning) || normalized_detuning == 0.0)
    throw DomainError("Raman detuning must be finite and nonzero");
  const double dbar = std::abs(normalized_detuning);
  std::vector<std::string> warnings;
  std::ostringstream os;
  if (dbar < 10.0) {
    os << "Raman reduction needs |detuning| >> 1 (got " << dbar << ")";
    warnings.push_back(os.str());
    os.str("");
  }
  const double bw = 2.0 * std::numbers::pi * core::bandwidth_from_duration(core::intensity_fwhm(req.signal));
  if (dbar < 2.0 * bw) {
    os << "Raman reduction needs |detuning| >> signal bandwidth " << bw;
    warnings.push_back(os.str());
    os.str("");
  }
  const double om = control_peak(req.control);
  if (dbar < 2.0 * om) {
    os << "Raman reduction needs |detuning| >> peak Rabi frequency " << om;
    warnings.push_back(os.str());
  }
  return run_reduced(req, cplx(0.0, 1.0 / normalized_detuning), cfg, std::move(warnings));
}

AtsState ats_closed_form(double control_magnitude, double t) {
  if (!std::isfinite(control_magnitude) || control_magnitude < 0.0)
    throw DomainError("control magnitude must be finite and >= 0");
  if (!std::isfinite(t) || t < 0.0) throw DomainError("time must be finite and >= 0");
  const double x = 0.5 * control_magnitude * t;
  return {std::sin(x), std::cos(x)};
}

}  // namespace memsim::protocols
