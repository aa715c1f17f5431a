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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "engine.hpp"
#include "memsim/core/error.hpp"
#include "memsim/core/fourier.hpp"
#include "memsim/solver/solvers.hpp"

namespace memsim::solver {

using core::AxisGrid;
using core::ComplexEnvelope;

namespace {

using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using CVector = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;

constexpr double kDampingSpan = 16.0;   // alpha * window
constexpr double kAliasFraction = 1e-10;
constexpr double kEdgeFraction = 1e-7;

double trapezoid_sq(std::span<const cplx> x, std::size_t n, double h) {
  double acc = 0.5 * (std::norm(x[0]) + std::norm(x[n - 1]));
  for (std::size_t i = 1; i + 1 < n; ++i) acc += std::norm(x[i]);
  return acc * h;
}

// Fraction of spectral energy above half the Nyquist frequency.
double upper_band_fraction(std::span<const cplx> spectrum) {
  const std::size_t n = spectrum.size();
  double total = 0.0, upper = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t m = std::min(k, n - k);
    const double e = std::norm(spectrum[k]);
    total += e;
    if (4 * m > n) upper += e;
  }
  return total > 0.0 ? upper / total : 0.0;
}

std::vector<double> simpson_weights(const AxisGrid &g) {
  std::vector<double> w(g.count());
  const double h = g.step() / 3.0;
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = (i % 2 == 0 ? 2.0 : 4.0) * h;
  w.front() = h;
  w.back() = h;
  return w;
}

double weighted_sq(const std::vector<double> &w, std::span<const cplx> x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * std::norm(x[i]);
  return acc;
}

}  // namespace

core::SimulationResult simulate_spectral(const StorageRequest &req, const SolverConfig &cfg) {
  cfg.validate();
  req.validate();
  if (req.pi_pulse.instantaneous)
    throw UnsupportedError("spectral solver does not support instantaneous pi-pulses");
  if (req.initial_p || req.initial_b)
    throw UnsupportedError("spectral solver starts from zero coherences");

  const AxisGrid &sg = req.signal.grid();
  const std::size_t n0 = sg.count();
  const std::size_t n = 2 * n0;
  const double h = sg.step();
  const double t0 = sg.start();
  const double alpha = kDampingSpan / sg.span();
  const double sd = std::sqrt(req.params.d);
  const cplx gbar = req.gamma_bar();
  const double gb = req.params.gamma_b;
  const cplx i1(0.0, 1.0);

  const core::FftPlan plan(n);
  const std::vector<double> omega = core::dft_frequencies(n, h);
  std::vector<double> damp(n), undamp(n0);
  for (std::size_t j = 0; j < n; ++j) damp[j] = std::exp(-alpha * h * static_cast<double>(j));
  for (std::size_t j = 0; j < n0; ++j) undamp[j] = std::exp(alpha * h * static_cast<double>(j));

  std::vector<cplx> om(n), omc(n);
  for (std::size_t j = 0; j < n; ++j) {
    om[j] = core::control_value(req.control, t0 + h * static_cast<double>(j));
    omc[j] = std::conj(om[j]);
  }
  const bool with_control = core::has_control(req.control);

  std::vector<cplx> dp(n), dbinv(n);
  for (std::size_t k = 0; k < n; ++k) {
    dp[k] = cplx(0.0, omega[k]) + gbar + alpha;
    dbinv[k] = 1.0 / (cplx(0.0, omega[k]) + gb + alpha);
  }

  // The undamping factor e^{alpha T} amplifies the non-causal ringing that a
  // jump at tau_0 leaves in the periodic solution, so the signal must have
  // decayed at the opening edge.
  double peak = 0.0;
  for (const cplx &x : req.signal.samples()) peak = std::max(peak, std::abs(x));
  if (std::abs(req.signal[0]) > kEdgeFraction * peak)
    throw GridError("spectral solver needs the signal to vanish at the window start (|A(tau_0)| = " +
                    std::to_string(std::abs(req.signal[0])) + ")");
  const std::vector<cplx> a_in(req.signal.samples().begin(), req.signal.samples().end());
  std::vector<cplx> buf(n, cplx{});
  for (std::size_t j = 0; j < n0; ++j) buf[j] = a_in[j] * damp[j];
  plan.forward(buf);
  CVector a_hat = Eigen::Map<CVector>(buf.data(), static_cast<Eigen::Index>(n));

  // P_hat = sqrt(d) M^{-1} A_hat with
  //   M = D_P + (1/4) C[Omega] D_B^{-1} C[Omega*],
  // where C[f] is the DFT-domain convolution by the samples of f.
  Eigen::PartialPivLU<CMatrix> lu;
  if (with_control) {
    std::vector<cplx> fo(om), fc(omc);
    plan.forward(fo);
    if (upper_band_fraction(fo) > kAliasFraction)
      throw GridError("control spectrum reaches the Nyquist band; refine the tau grid");
    plan.forward(fc);
    const auto ni = static_cast<Eigen::Index>(n);
    CMatrix c(ni, ni), cc(ni, ni);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (Eigen::Index l = 0; l < ni; ++l) {
      for (Eigen::Index k = 0; k < ni; ++k) {
        const auto idx = static_cast<std::size_t>((k - l + ni) % ni);
        c(k, l) = fo[idx] * inv_n;
        cc(k, l) = fc[idx] * inv_n;
      }
    }
    for (Eigen::Index k = 0; k < ni; ++k) cc.row(k) *= dbinv[static_cast<std::size_t>(k)];
    CMatrix m = 0.25 * (c * cc);
    for (Eigen::Index k = 0; k < ni; ++k) m(k, k) += dp[static_cast<std::size_t>(k)];
    lu.compute(m);
  }

  auto solve_p = [&](const CVector &a) -> CVector {
    if (with_control) return sd * lu.solve(a);
    CVector p(a.size());
    for (Eigen::Index k = 0; k < a.size(); ++k) p(k) = sd * a(k) / dp[static_cast<std::size_t>(k)];
    return p;
  };

  // Odd node count so the z integrals of the budget can use Simpson's rule;
  // |P|^2 varies on the scale 1/(2d) and the trapezoid rule is too coarse.
  std::size_t nz = detail::effective_z_points(cfg, req.params.d);
  if (nz % 2 == 0) ++nz;
  const AxisGrid zgrid = AxisGrid::from_range(0.0, 1.0, nz);
  const std::vector<double> wz = simpson_weights(zgrid);
  const double dz = zgrid.step();

  std::vector<cplx> pf(nz), bf(nz);
  double int_p = 0.0, int_b = 0.0;
  std::vector<cplx> pt(n), bt(n);

  // Time-domain P and B at one z node from its P spectrum.
  auto record = [&](std::size_t k, const CVector &p_hat) {
    for (std::size_t j = 0; j < n; ++j) pt[j] = p_hat(static_cast<Eigen::Index>(j));
    plan.backward(pt);
    for (cplx &x : pt) x /= static_cast<double>(n);
    if (with_control) {
      for (std::size_t j = 0; j < n; ++j) bt[j] = omc[j] * pt[j];
      plan.forward(bt);
      for (std::size_t j = 0; j < n; ++j) bt[j] *= -0.5 * i1 * dbinv[j] / static_cast<double>(n);
      plan.backward(bt);
    } else {
      std::fill(bt.begin(), bt.end(), cplx{});
    }
    for (std::size_t j = 0; j < n0; ++j) {
      pt[j] *= undamp[j];
      bt[j] *= undamp[j];
    }
    pf[k] = pt[n0 - 1];
    bf[k] = bt[n0 - 1];
    int_p += wz[k] * trapezoid_sq(pt, n0, h);
    int_b += wz[k] * trapezoid_sq(bt, n0, h);
  };

  CVector p_hat = solve_p(a_hat);
  for (std::size_t k = 0; k + 1 < nz; ++k) {
    record(k, p_hat);
    const CVector k1 = -sd * p_hat;
    const CVector k2 = -sd * solve_p(a_hat + (0.5 * dz) * k1);
    const CVector k3 = -sd * solve_p(a_hat + (0.5 * dz) * k2);
    const CVector k4 = -sd * solve_p(a_hat + dz * k3);
    a_hat += (dz / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    p_hat = solve_p(a_hat);
  }
  record(nz - 1, p_hat);

  for (std::size_t j = 0; j < n; ++j) buf[j] = a_hat(static_cast<Eigen::Index>(j));
  plan.backward(buf);
  std::vector<cplx> out(n0);
  for (std::size_t j = 0; j < n0; ++j) out[j] = buf[j] * undamp[j] / static_cast<double>(n);

  core::EnergyBudget e;
  e.signal = core::envelope_l2(req.signal);
  e.input = e.signal;
  ComplexEnvelope a_out(sg, std::move(out));
  e.transmitted = core::envelope_l2(a_out);
  ComplexEnvelope p_final(zgrid, std::move(pf));
  ComplexEnvelope b_final(zgrid, std::move(bf));
  e.stored_p = weighted_sq(wz, p_final.samples());
  e.stored_b = weighted_sq(wz, b_final.samples());
  e.decayed_p = 2.0 * gbar.real() * int_p;
  e.decayed_b = 2.0 * gb * int_b;

  core::SimulationResult res{std::move(a_out), std::move(p_final), std::move(b_final), e, {}};
  if (req.gamma_bar_override) res.warnings.push_back("gamma_bar overridden; decayed_p uses 2 Re of the override");
  detail::check_energy(e, cfg, "spectral solver");
  return res;
}

}  // namespace memsim::solver
