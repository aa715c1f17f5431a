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
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "memsim/core/envelope.hpp"
#include "memsim/core/error.hpp"
#include "memsim/core/fourier.hpp"
#include "memsim/core/interp.hpp"
#include "memsim/core/profile.hpp"
#include "memsim/solver/solvers.hpp"

using namespace memsim;
using namespace memsim::core;
using namespace memsim::solver;
using std::numbers::pi;

namespace {

// Window from -9 sigma (the spectral solver needs a quiet start) to past
// both the signal and the control.
AxisGrid window(double fwhm, const ControlField &control, std::size_t n = 400, double tail = 2.0) {
  const double s = gaussian_sigma(fwhm);
  double hi = 6.0 * s;
  if (has_control(control)) hi = std::max(hi, control_support(control).second);
  return AxisGrid::from_range(-9.0 * s, hi + tail, n);
}

double max_diff(const ComplexEnvelope &a, const ComplexEnvelope &b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const ComplexEnvelope &a) {
  double m = 0.0;
  for (auto v : a.samples()) m = std::max(m, std::abs(v));
  return m;
}

// Independent frequency-domain oracle for the control-free medium:
// A_out(w) = A_in(w) exp(-d / (gamma_bar + i w)).
ComplexEnvelope filter_oracle(const MemoryParams &p, const ComplexEnvelope &in) {
  const ComplexEnvelope spec = fourier_transform(in);
  std::vector<cplx> out(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double w = spec.grid().at(k);
    out[k] = spec[k] * std::exp(-p.d / (p.gamma_bar() + cplx(0.0, w)));
  }
  return inverse_fourier_transform(ComplexEnvelope(spec.grid(), std::move(out)), in.grid().start());
}

}  // namespace

TEST_CASE("solver config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.z_points = 8;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.tau_points = 32;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.energy_tolerance = 0.1;
  CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("control outside the signal window is a grid error") {
  const ControlField ctrl = GaussianControlSpec{pi, 5.0, 1.0};
  const auto sig = make_gaussian_signal(1.0, AxisGrid::from_range(-3.0, 3.0, 200));
  CHECK_THROWS_AS(simulate_time_domain(make_request({1.0, 0.0, 0.0}, sig, ctrl), {}), GridError);
}

TEST_CASE("pure polarization decay") {
  const AxisGrid zg = AxisGrid::from_range(0.0, 1.0, 65);
  const auto p0 = ComplexEnvelope::from_function(zg, [](double z) { return cplx(1.0 + z, 0.5 * z); });
  const AxisGrid tg = AxisGrid::from_range(0.0, 2.5, 256);
  auto req = make_request({0.0, 0.7, 0.0}, ComplexEnvelope::zeros(tg));
  req.initial_p = p0;
  const auto r = simulate_time_domain(req, {});
  const cplx decay = std::exp(-cplx(1.0, -0.7) * tg.span());
  REQUIRE(r.p_final.size() >= 2);
  const CubicSampler p0s(p0);
  double err = 0.0;
  for (std::size_t i = 0; i < r.p_final.size(); ++i) {
    const double z = r.p_final.grid().at(i);
    err = std::max(err, std::abs(r.p_final[i] - p0s(z) * decay));
  }
  CHECK(err < 1e-7);
  CHECK(max_abs(r.b_final) == 0.0);
  CHECK(r.energy.relative_residual() < 1e-4);
}

TEST_CASE("zero optical depth leaves the signal untouched") {
  const ControlField ctrl = GaussianControlSpec{2.0 * pi, 0.0, 1.0};
  const auto sig = make_gaussian_signal(1.0, window(1.0, ctrl));
  const auto req = make_request({0.0, 0.0, 0.0}, sig, ctrl);
  for (const auto &r : {simulate_time_domain(req, {}), simulate_spectral(req, {}),
                        simulate_amplitude_phase(req, {})}) {
    CHECK(max_diff(r.a_out, sig) < 1e-12);
    CHECK(r.storage_efficiency() == 0.0);
  }
  CHECK(simulate_linear_absorption({0.0, 0.0, 0.0}, sig, {}) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("exponentially rising input without polarization decay") {
  // A_in = e^tau truncated at tau = 0 with the decay term removed: A = e^{tau - d z},
  // so 1 - e^{-2d} is absorbed.
  for (double d : {0.5, 1.0, 2.0}) {
    const AxisGrid g = AxisGrid::from_range(-14.0, 0.0, 1401);
    const auto sig = ComplexEnvelope::from_function(g, [](double t) { return cplx(std::exp(t), 0.0); }).normalized();
    auto req = make_request({d, 0.0, 0.0}, sig);
    req.gamma_bar_override = cplx(0.0, 0.0);
    const auto r = simulate_time_domain(req, {});
    const double absorbed = 1.0 - r.energy.transmitted / r.energy.signal;
    CHECK(absorbed == doctest::Approx(1.0 - std::exp(-2.0 * d)).epsilon(0.01));
    CHECK(!r.warnings.empty());
  }
}

TEST_CASE("narrowband linear absorption reaches the Beer-Lambert limit") {
  const MemoryParams p{10.0, 0.0, 0.0};
  const auto sig = make_gaussian_signal(100.0, window(100.0, {}, 600, 20.0));
  const double td = simulate_linear_absorption(p, sig, {});
  CHECK(std::abs(td - (1.0 - std::exp(-20.0))) < 1e-3);
  CHECK(std::abs(linear_absorption_filter(p, sig) - td) < 1e-4);
  CHECK(std::abs(gaussian_linear_absorption(p, 100.0) - td) < 1e-4);
}

TEST_CASE("linear absorption decreases with bandwidth") {
  const MemoryParams p{10.0, 0.0, 0.0};
  double prev = 2.0;
  // Bandwidth 0.1 to 100 gamma, i.e. tau_FWHM = 2 ln2 / (pi BW).
  for (int k = 0; k <= 30; ++k) {
    const double bw = 0.1 * std::pow(1000.0, k / 30.0);
    const double a = gaussian_linear_absorption(p, duration_from_bandwidth(bw));
    CHECK(a <= prev + 1e-12);
    prev = a;
  }
  for (double fwhm : {0.05, 0.5, 5.0}) {
    // At least 10 nodes per FWHM, and a tail long enough for P to decay.
    const double span = 15.0 * gaussian_sigma(fwhm) + 30.0;
    const auto n = static_cast<std::size_t>(std::ceil(10.0 * span / fwhm)) + 1;
    const auto sig = make_gaussian_signal(fwhm, window(fwhm, {}, n, 30.0));
    const double td = simulate_linear_absorption(p, sig, {});
    CHECK(std::abs(td - gaussian_linear_absorption(p, fwhm)) < 1e-3);
  }
}

TEST_CASE("control-free spectral and time-domain runs follow the exact filter") {
  const MemoryParams p{5.0, 0.7, 0.0};
  const auto sig = make_gaussian_signal(2.0, window(2.0, {}, 1024, 60.0));
  const auto oracle = filter_oracle(p, sig);
  const auto sp = simulate_spectral(make_request(p, sig), {});
  CHECK(max_diff(sp.a_out, oracle) < 1e-6);
  const auto td = simulate_time_domain(make_request(p, sig), {});
  CHECK(max_diff(td.a_out, oracle) < 1e-4);
  CHECK(sp.energy.relative_residual() < 1e-4);
}

TEST_CASE("energy budget closes and tightens under refinement") {
  const ControlField ctrl = GaussianControlSpec{2.0 * pi, 0.2, 1.0};
  // 401 signal nodes, so tau_points = 400 m + 1 gives exactly m steps per
  // signal interval.
  const auto sig = make_gaussian_signal(1.0, window(1.0, ctrl, 401));
  const auto req = make_request({10.0, 0.3, 0.05}, sig, ctrl);
  SolverConfig ref;
  ref.tau_points = 6401;
  const double eta_ref = simulate_time_domain(req, ref).storage_efficiency();
  for (Method m : {Method::rk4, Method::rk2}) {
    std::vector<double> errs;
    for (std::size_t n : {801u, 1601u}) {
      SolverConfig c;
      c.method = m;
      c.tau_points = n;
      const auto r = simulate_time_domain(req, c);
      CHECK(r.energy.relative_residual() < 1e-4);
      errs.push_back(std::abs(r.storage_efficiency() - eta_ref));
    }
    const double order = std::log2(errs[0] / errs[1]);
    if (m == Method::rk4) CHECK(order > 3.5);
    else CHECK(order > 1.7);
  }
}

TEST_CASE("a tolerance the grid cannot meet raises nonconvergence with the residual") {
  const ControlField ctrl = GaussianControlSpec{2.0 * pi, 0.0, 1.0};
  const auto sig = make_gaussian_signal(1.0, window(1.0, ctrl));
  SolverConfig c;
  c.method = Method::rk2;
  c.tau_points = 64;
  c.energy_tolerance = 1e-13;
  try {
    simulate_time_domain(make_request({10.0, 0.0, 0.0}, sig, ctrl), c);
    FAIL("expected nonconvergence");
  } catch (const NonconvergenceError &e) {
    CHECK(e.residual() > 1e-13);
  }
}

TEST_CASE("the solver is linear in the signal") {
  const ControlField ctrl = GaussianControlSpec{3.0 * pi, 0.3, 0.8};
  const AxisGrid g = window(1.0, ctrl);
  const auto a1 = make_gaussian_signal(1.0, g);
  const auto a2 = ComplexEnvelope::from_function(g, [](double t) {
    return cplx(t * std::exp(-t * t), 0.3 * std::exp(-(t - 0.5) * (t - 0.5) * 2.0));
  });
  const cplx al(0.7, -0.2), be(-1.3, 0.4);
  std::vector<cplx> mix(g.count());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = al * a1[i] + be * a2[i];
  const MemoryParams p{10.0, 0.5, 0.1};
  const auto run = [&](const ComplexEnvelope &s) { return simulate_time_domain(make_request(p, s, ctrl), {}); };
  const auto r1 = run(a1), r2 = run(a2), rm = run(ComplexEnvelope(g, mix));
  double ea = 0.0, eb = 0.0;
  for (std::size_t i = 0; i < rm.a_out.size(); ++i)
    ea = std::max(ea, std::abs(rm.a_out[i] - al * r1.a_out[i] - be * r2.a_out[i]));
  for (std::size_t i = 0; i < rm.b_final.size(); ++i)
    eb = std::max(eb, std::abs(rm.b_final[i] - al * r1.b_final[i] - be * r2.b_final[i]));
  CHECK(ea < 1e-9);
  CHECK(eb < 1e-9);
}

TEST_CASE("detuning sign conjugates the output for real inputs") {
  const ControlField ctrl = GaussianControlSpec{2.0 * pi, 0.1, 1.0};
  const auto sig = make_gaussian_signal(1.0, window(1.0, ctrl));
  const auto plus = simulate_time_domain(make_request({10.0, 1.5, 0.0}, sig, ctrl), {});
  const auto minus = simulate_time_domain(make_request({10.0, -1.5, 0.0}, sig, ctrl), {});
  double e = 0.0, ei = 0.0;
  for (std::size_t i = 0; i < plus.a_out.size(); ++i) {
    e = std::max(e, std::abs(plus.a_out[i] - std::conj(minus.a_out[i])));
    ei = std::max(ei, std::abs(std::norm(plus.a_out[i]) - std::norm(minus.a_out[i])));
  }
  CHECK(e < 1e-9);
  CHECK(ei < 1e-6);
}

TEST_CASE("time-domain and spectral storage agree in the EIT regime") {
  for (double d : {10.0, 50.0}) {
    const ControlField ctrl = GaussianControlSpec{8.0 * pi, 2.0, 10.0};
    const auto sig = make_gaussian_signal(10.0, window(10.0, ctrl));
    const auto req = make_request({d, 0.0, 0.0}, sig, ctrl);
    const auto td = simulate_time_domain(req, {});
    const auto sp = simulate_spectral(req, {});
    CHECK(std::abs(td.storage_efficiency() - sp.storage_efficiency()) < 1e-3);
    CHECK(td.energy.relative_residual() < 1e-4);
    CHECK(sp.energy.relative_residual() < 1e-4);
  }
}

TEST_CASE("amplitude-phase reconstruction matches the complex solver") {
  const ControlField ctrl = GaussianControlSpec{2.0 * pi, 0.2, 1.0};
  const AxisGrid g = window(1.0, ctrl);
  const double s = gaussian_sigma(1.0);
  const auto real_in = make_gaussian_signal(1.0, g);
  const auto chirped = ComplexEnvelope::from_function(g, [s](double t) {
    return std::exp(-t * t / (4.0 * s * s)) * std::polar(1.0, 1.5 * t * t);
  }).normalized();
  for (const auto &sig : {real_in, chirped}) {
    const auto req = make_request({10.0, 0.0, 0.0}, sig, ctrl);
    const auto td = simulate_time_domain(req, {});
    const auto ap = simulate_amplitude_phase(req, {});
    CHECK(max_diff(td.a_out, ap.a_out) < 1e-3);
    CHECK(std::abs(td.storage_efficiency() - ap.storage_efficiency()) < 1e-3);
  }
  const auto zero = simulate_amplitude_phase(make_request({10.0, 0.0, 0.0}, ComplexEnvelope::zeros(g), ctrl), {});
  CHECK(max_abs(zero.a_out) == 0.0);
  CHECK(max_abs(zero.b_final) == 0.0);
  CHECK(max_abs(zero.p_final) == 0.0);
}

TEST_CASE("single-line inhomogeneous profile reduces to the homogeneous solver") {
  const ControlField ctrl = GaussianControlSpec{2.0 * pi, 0.0, 1.0};
  const auto sig = make_gaussian_signal(1.0, window(1.0, ctrl));
  const MemoryParams p{8.0, 0.4, 0.0};
  const auto req = make_request(p, sig, ctrl);
  const auto hom = simulate_time_domain(req, {});
  const auto inh = simulate_inhomogeneous(req, InhomogeneousProfile::delta_line(0.0, 0.01), {});
  CHECK(max_diff(hom.a_out, inh.a_out) < 1e-6);
  CHECK(max_diff(hom.b_final, inh.b_final) < 1e-6);
  CHECK(std::abs(hom.storage_efficiency() - inh.storage_efficiency()) < 1e-6);
}

TEST_CASE("retrieval") {
  const AxisGrid zg = AxisGrid::from_range(0.0, 1.0, 129);
  const ControlField read = GaussianControlSpec{2.0 * pi, 5.0, 1.0};
  const MemoryParams p{10.0, 0.0, 0.0};
  const auto none = simulate_retrieval(ComplexEnvelope::zeros(zg), p, read, {});
  CHECK(max_abs(none.a_out) == 0.0);

  const auto bump = ComplexEnvelope::from_function(zg, [](double z) { return cplx(std::sin(pi * z), 0.0); });
  const auto idle = simulate_retrieval(bump, p, ControlField{}, {});
  CHECK(max_abs(idle.a_out) == 0.0);
  const CubicSampler bs(bump);
  double drift = 0.0;
  for (std::size_t i = 0; i < idle.b_final.size(); ++i)
    drift = std::max(drift, std::abs(idle.b_final[i] - bs(idle.b_final.grid().at(i))));
  CHECK(drift < 1e-9);
  CHECK(retrieval_efficiency(idle) == 0.0);
}

TEST_CASE("store then retrieve factorizes") {
  const double fwhm = 1.0;
  const GaussianControlSpec write{2.0 * pi, 0.3, 1.0};
  const auto sig = make_gaussian_signal(fwhm, window(fwhm, write));
  const MemoryParams p{10.0, 0.0, 0.0};
  const auto stored = simulate_time_domain(make_request(p, sig, write), {});
  // Same shape as the write control, applied after the spin wave is stored.
  const GaussianControlSpec read{3.0 * pi, 3.0, 1.0};
  const auto out = simulate_retrieval(stored.b_final, p, read, {});
  const double eta_stor = stored.storage_efficiency();
  const double eta_ret = retrieval_efficiency(out);
  const double eta_total = envelope_l2(out.a_out) / envelope_l2(sig);
  CHECK(eta_stor > 0.3);
  CHECK(eta_ret > 0.1);
  CHECK(std::abs(eta_total - eta_stor * eta_ret) < 1e-3);
}
