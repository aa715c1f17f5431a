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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Tolerances and time limits are fixed
// below; a criterion that exceeds its time limit fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "memsim/cli/runner.hpp"
#include "memsim/cli/scenario.hpp"
#include "memsim/core/envelope.hpp"
#include "memsim/core/fourier.hpp"
#include "memsim/core/profile.hpp"
#include "memsim/metrics/metrics.hpp"
#include "memsim/optimize/bound.hpp"
#include "memsim/optimize/control_shape.hpp"
#include "memsim/optimize/gaussian_opt.hpp"
#include "memsim/optimize/kernel.hpp"
#include "memsim/protocols/closed_form.hpp"
#include "memsim/sensitivity/sensitivity.hpp"
#include "memsim/solver/solvers.hpp"

using namespace memsim;
using namespace memsim::core;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kBoundTarget = 0.95;
constexpr double kBoundWindow = 0.02;
constexpr double kBoundConvergence = 1e-4;
constexpr double kGaussianParity = 0.02;
constexpr double kClosedForm = 1e-12;
constexpr double kScanPeak = 1e-6;
constexpr double kEnergyBudget = 1e-4;
constexpr double kCrossSolver = 1e-3;
constexpr double kLinearity = 1e-9;
constexpr double kExpInputRel = 0.01;
constexpr double kTopMode = 1e-4;
constexpr double kBoundSlack = 1e-3;
constexpr double kGram = 1e-8;
constexpr double kSigmaMax = 0.025;
constexpr double kRatioLo = 1.5;
constexpr double kRatioHi = 4.5;
constexpr double kSobol = 0.03;
constexpr double kPeakRabiFraction = 0.99;
constexpr double kFiberRoundTripRel = 0.01;
constexpr double kOneOverERel = 1e-6;

// Time limits in seconds.
constexpr double kLimit[12] = {0, 5, 600, 1, 300, 60, 120, 600, 1800, 1200, 10, 120};

const fs::path kSource = MEMSIM_SOURCE_DIR;
const std::string kBinary = MEMSIM_BINARY;

class Outcome {
 public:
  void require(bool ok, const std::string &what) {
    if (!ok) {
      ok_ = false;
      failures_.push_back(what);
    }
  }
  void note(const std::string &s) { notes_.push_back(s); }
  bool ok() const { return ok_; }
  std::string text() const {
    std::string s;
    for (const auto &n : notes_) s += (s.empty() ? "" : "; ") + n;
    for (const auto &f : failures_) s += (s.empty() ? "" : "; ") + ("FAILED " + f);
    return s;
  }

 private:
  bool ok_ = true;
  std::vector<std::string> notes_;
  std::vector<std::string> failures_;
};

template <typename... Args>
std::string fmt(const char *f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int shell(const std::string &args, const fs::path &capture) {
  const std::string cmd = "\"" + kBinary + "\" " + args + " > \"" + capture.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Signal window from -9 sigma to past the signal and the control.
AxisGrid window(double fwhm, const ControlField &control, std::size_t n = 400) {
  const double s = gaussian_sigma(fwhm);
  double hi = 6.0 * s;
  if (has_control(control)) hi = std::max(hi, control_support(control).second);
  return AxisGrid::from_range(-9.0 * s, hi + 2.0, n);
}

// Index of the largest |a|^2 at times >= from.
std::size_t peak_after(const ComplexEnvelope &a, double from) {
  std::size_t best = 0;
  double m = -1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.grid().at(i) < from) continue;
    if (std::norm(a[i]) > m) {
      m = std::norm(a[i]);
      best = i;
    }
  }
  return best;
}

// Shared by the parity and spline-map checks: the adiabatic point.
constexpr double kEitD = 50.0;
constexpr double kEitTau = 1.5;

const optimize::GaussianOptimum &eit_optimum() {
  static std::optional<optimize::GaussianOptimum> cached;
  if (!cached) {
    const auto sig = standard_gaussian_signal(kEitTau);
    cached = optimize::optimize_gaussian_control({kEitD, 0.0, 0.0}, sig,
                                                 {8.0 * pi, -0.5 * kEitTau, 1.3 * kEitTau}, {});
  }
  return *cached;
}

// 1. Optimal bound.
void bound_check(Outcome &out) {
  const double eta = optimize::optimal_efficiency_bound(50.0);
  const double conv = std::abs(optimize::nystrom_largest_eigenvalue(50.0, 200) -
                               optimize::nystrom_largest_eigenvalue(50.0, 400));
  const fs::path cap = fs::temp_directory_path() / "memsim_acceptance_bound.txt";
  const auto t0 = std::chrono::steady_clock::now();
  const int rc = shell("bound --d 50", cap);
  const double t_cli = seconds_since(t0);
  out.require(rc == 0, "memsim bound exit code " + std::to_string(rc));
  double cli = std::numeric_limits<double>::quiet_NaN();
  if (rc == 0) cli = std::stod(slurp(cap));
  fs::remove(cap);
  out.note(fmt("memsim bound --d 50 = %.6f (%.2f s)", cli, t_cli));
  out.note(fmt("|eta(200) - eta(400)| = %.1e", conv));
  out.require(std::abs(cli - kBoundTarget) <= kBoundWindow, "bound outside 0.95 +- 0.02");
  out.require(std::abs(cli - eta) < 1e-8, "command line and library disagree");
  out.require(conv < kBoundConvergence, "grid convergence");
}

// 2. Gaussian-optimization parity.
void gaussian_parity(Outcome &out) {
  const auto &r = eit_optimum();
  const double bound = optimize::optimal_efficiency_bound(kEitD);
  out.note(fmt("eta_stor %.5f vs bound %.5f (gap %.4f)", r.efficiency, bound, bound - r.efficiency));
  out.note(fmt("control area %.3f pi, delay %.3f, fwhm %.3f", r.control.area / pi, r.control.delay,
               r.control.duration_fwhm));
  out.require(std::abs(r.efficiency - bound) <= kGaussianParity, "parity");
}

// 3. Closed forms against direct evaluation, and the forward-AFC maximum.
void closed_forms(Outcome &out) {
  using namespace protocols;
  double worst = 0.0;
  const auto comb = [](double f, double d) { return AfcSpec{1000.0, 1.0, f, d}; };
  for (int i = 0; i <= 400; ++i) {
    const double d = 20.0 * i / 400.0;
    worst = std::max(worst, std::abs(att_storage_efficiency(d) - (1.0 - std::exp(-2.0 * d))));
    for (double r : {0.1, 0.5, 1.0}) {
      const double c = 1.0 - std::exp(-d * r);
      worst = std::max(worst, std::abs(crib_efficiency(d, r) - c * c));
    }
    for (double f : {1.5, 3.0, 10.0}) {
      const double x = d / f, deph = std::exp(-7.0 / (f * f)), b = 1.0 - std::exp(-x);
      worst = std::max(worst, std::abs(afc_efficiency(comb(f, d), AfcDirection::forward) -
                                       x * x * std::exp(-x) * deph));
      worst = std::max(worst, std::abs(afc_efficiency(comb(f, d), AfcDirection::backward) - b * b * deph));
    }
    for (double gap : {0.0, 0.3}) {
      const double direct = d * d * std::exp(-d) * std::exp(-4.0 * gap / 2.0);
      worst = std::max(worst, std::abs(rose_efficiency(d, gap, 2.0) - direct));
    }
  }
  const FiberSpec fiber{0.2, 2.04e8, 0.0};
  for (double t : {0.0, 1e-6, 1e-4, 1e-3, 1e-2}) {
    const double direct = std::pow(10.0, -0.2e-3 * 2.04e8 * t / 10.0);
    worst = std::max(worst, std::abs(fiber_delay_efficiency(fiber, t) - direct));
  }
  out.note(fmt("max deviation from direct formulas %.1e", worst));
  out.require(worst < kClosedForm, "closed forms");

  for (double f : {3.0, 10.0, 100.0}) {
    const int n = 20000;
    double best = -1.0, at = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double d = 10.0 * f * i / n;
      const double e = afc_efficiency(comb(f, d), AfcDirection::forward);
      if (e > best) {
        best = e;
        at = d;
      }
    }
    const double expect = 4.0 * std::exp(-2.0) * std::exp(-7.0 / (f * f));
    out.note(fmt("F=%g: scan max %.6f at d/F=%.4f", f, best, at / f));
    out.require(std::abs(best - expect) < kScanPeak * expect, fmt("forward AFC peak value at F=%g", f));
    out.require(std::abs(at - 2.0 * f) <= 10.0 * f / n, fmt("forward AFC peak position at F=%g", f));
  }
}

// 4. Solver physics: budgets, cross-formulation matrix, linearity, detuning symmetry.
void solver_physics(Outcome &out) {
  double worst_res = 0.0, worst_cross = 0.0;
  for (double d : {1.0, 10.0, 50.0})
    for (double tau : {0.1, 1.0, 10.0}) {
      const ControlField ctrl = GaussianControlSpec{pi, 0.5 * tau, tau};
      const auto req = solver::make_request({d, 0.0, 0.0}, make_gaussian_signal(tau, window(tau, ctrl)), ctrl);
      const auto td = solver::simulate_time_domain(req, {});
      const auto sp = solver::simulate_spectral(req, {});
      const auto ap = solver::simulate_amplitude_phase(req, {});
      for (const auto *r : {&td, &sp, &ap}) worst_res = std::max(worst_res, r->energy.relative_residual());
      worst_cross = std::max({worst_cross, std::abs(td.storage_efficiency() - sp.storage_efficiency()),
                              std::abs(td.storage_efficiency() - ap.storage_efficiency())});
    }

  // The shipped single-run config reports its own residual column.
  const auto sc = cli::parse_scenario(cli::read_file((kSource / "configs" / "single_run.json").string()));
  const auto res = cli::execute_scenario(sc, 1, 1);
  const auto col = std::find(res.table.columns.begin(), res.table.columns.end(), "residual");
  out.require(col != res.table.columns.end(), "single_run has a residual column");
  if (col != res.table.columns.end())
    for (const auto &row : res.table.rows)
      worst_res = std::max(worst_res, row[static_cast<std::size_t>(col - res.table.columns.begin())]);

  out.note(fmt("max energy residual %.1e, max cross-solver |d eta| %.1e", worst_res, worst_cross));
  out.require(worst_res < kEnergyBudget, "energy budget");
  out.require(worst_cross < kCrossSolver, "cross-formulation agreement");

  const ControlField ctrl = GaussianControlSpec{3.0 * pi, 0.3, 0.8};
  const AxisGrid g = window(1.0, ctrl);
  const auto a1 = make_gaussian_signal(1.0, g);
  const auto a2 = ComplexEnvelope::from_function(g, [](double t) {
    return cplx(t * std::exp(-t * t), 0.3 * std::exp(-2.0 * (t - 0.5) * (t - 0.5)));
  });
  const cplx al(0.7, -0.2), be(-1.3, 0.4);
  std::vector<cplx> mix(g.count());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = al * a1[i] + be * a2[i];
  const MemoryParams p{10.0, 0.5, 0.1};
  const auto run = [&](const ComplexEnvelope &s) {
    return solver::simulate_time_domain(solver::make_request(p, s, ctrl), {});
  };
  const auto r1 = run(a1), r2 = run(a2), rm = run(ComplexEnvelope(g, mix));
  double lin = 0.0;
  for (std::size_t i = 0; i < rm.a_out.size(); ++i)
    lin = std::max(lin, std::abs(rm.a_out[i] - al * r1.a_out[i] - be * r2.a_out[i]));
  for (std::size_t i = 0; i < rm.b_final.size(); ++i)
    lin = std::max(lin, std::abs(rm.b_final[i] - al * r1.b_final[i] - be * r2.b_final[i]));

  const ControlField c2 = GaussianControlSpec{2.0 * pi, 0.1, 1.0};
  const auto sig = make_gaussian_signal(1.0, window(1.0, c2));
  const auto plus = solver::simulate_time_domain(solver::make_request({10.0, 1.5, 0.0}, sig, c2), {});
  const auto minus = solver::simulate_time_domain(solver::make_request({10.0, -1.5, 0.0}, sig, c2), {});
  double sym = 0.0;
  for (std::size_t i = 0; i < plus.a_out.size(); ++i)
    sym = std::max(sym, std::abs(plus.a_out[i] - std::conj(minus.a_out[i])));
  out.note(fmt("linearity defect %.1e, detuning-conjugation defect %.1e", lin, sym));
  out.require(lin < kLinearity, "linearity");
  out.require(sym < kLinearity, "detuning symmetry");
}

// 5. Exponentially rising input with the polarization decay switched off.
void exponential_input(Outcome &out) {
  for (double d : {0.5, 1.0, 2.0}) {
    const AxisGrid g = AxisGrid::from_range(-14.0, 0.0, 1401);
    const auto sig = ComplexEnvelope::from_function(g, [](double t) { return cplx(std::exp(t), 0.0); }).normalized();
    auto req = solver::make_request({d, 0.0, 0.0}, sig);
    req.gamma_bar_override = cplx(0.0, 0.0);
    const auto r = solver::simulate_time_domain(req, {});
    const double got = 1.0 - r.energy.transmitted / r.energy.signal;
    const double expect = 1.0 - std::exp(-2.0 * d);
    out.note(fmt("d=%g: %.5f vs %.5f", d, got, expect));
    out.require(std::abs(got - expect) < kExpInputRel * expect, fmt("d=%g", d));
  }
}

// 6. Echo timing in the pure-dephasing limit (no homogeneous decay, weak absorption).
void echo_timing(Outcome &out) {
  const double width = 20.0, bin = 0.5;
  const auto crib = InhomogeneousProfile::gaussian(
      width, AxisGrid::from_range(-3.0 * width, 3.0 * width, static_cast<std::size_t>(6.0 * width / bin) + 1));
  const double tau = 0.2, s = gaussian_sigma(tau);
  for (double flip : {0.5, 0.7}) {
    const auto sig = make_gaussian_signal(tau, AxisGrid::from_range(-9.0 * s, 2.0 * flip + 1.0, 600));
    auto req = solver::make_request({1.0, 0.0, 0.0}, sig);
    req.gamma_bar_override = cplx(0.0, 0.0);
    const auto r = solver::simulate_inhomogeneous(req, crib, {}, solver::DetuningFlip{flip});
    const auto &grid = r.a_out.grid();
    const double at = grid.at(peak_after(r.a_out, flip + 3.0 * s));
    out.note(fmt("CRIB flip %.1f: echo %.5f (step %.4f)", flip, at, grid.step()));
    out.require(std::abs(at - 2.0 * flip) <= grid.step(), fmt("CRIB echo after flip at %.1f", flip));
  }

  const protocols::AfcSpec spec{30.0, 0.5, 4.0, 0.5};
  const double half = 1.5 * spec.total_width, step = spec.tooth_width / 8.0;
  const auto prof = protocols::afc_comb_profile(
      spec, AxisGrid::from_range(-half, half, static_cast<std::size_t>(std::lround(2.0 * half / step)) + 1));
  const double echo = 2.0 * pi / spec.tooth_spacing;
  const double ta = 0.1, sa = gaussian_sigma(ta);
  const auto sig = make_gaussian_signal(ta, AxisGrid::from_range(-9.0 * sa, echo + 1.0, 400));
  auto req = solver::make_request({spec.peak_d, 0.0, 0.0}, sig);
  req.gamma_bar_override = cplx(0.0, 0.0);
  const auto r = solver::simulate_inhomogeneous(req, prof, {});
  const auto &grid = r.a_out.grid();
  const double at = grid.at(peak_after(r.a_out, 6.0 * sa));
  out.note(fmt("AFC: echo %.5f vs 2 pi / spacing %.5f (step %.4f)", at, echo, grid.step()));
  out.require(std::abs(at - echo) <= grid.step(), "AFC echo");
}

// 7. Kernel SVD.
void kernel_suite(Outcome &out) {
  struct Case {
    MemoryParams p;
    ControlField control;
    AxisGrid tau;
  };
  const std::vector<Case> cases = {
      {{10.0, 0.0, 0.0}, GaussianControlSpec{2.0 * pi, 0.2, 1.0}, AxisGrid::from_range(-4.0, 6.0, 64)},
      {{50.0, 0.0, 0.0}, GaussianControlSpec{8.0 * pi, -0.75, 1.95}, AxisGrid::from_range(-7.0, 6.0, 64)},
  };
  for (const auto &c : cases) {
    const solver::SolverConfig cfg;
    const auto k = optimize::build_storage_kernel(c.p, c.control, c.tau, cfg);
    const auto m = optimize::decompose_kernel(k);
    const double lam2 = m.singular_values[0] * m.singular_values[0];
    const double eta = solver::simulate_time_domain(solver::make_request(c.p, m.input_modes[0], c.control), cfg)
                           .storage_efficiency();
    const double gram = optimize::mode_gram_residual(k, m);
    const double bound = optimize::optimal_efficiency_bound(c.p.d);
    out.note(fmt("d=%g: lambda^2 %.6f, direct %.6f, Gram %.1e", c.p.d, lam2, eta, gram));
    out.require(std::abs(eta - lam2) < kTopMode, fmt("top mode at d=%g", c.p.d));
    out.require(lam2 <= bound + kBoundSlack, fmt("bound at d=%g", c.p.d));
    out.require(gram < kGram, fmt("orthonormality at d=%g", c.p.d));
  }
}

// 8. Fluctuation sensitivity at one depth, and the Sobol estimator on Ishigami.
double ishigami(const std::vector<double> &x) {
  return std::sin(x[0]) + 7.0 * std::pow(std::sin(x[1]), 2) + 0.1 * std::pow(x[2], 4) * std::sin(x[0]);
}

// First-order indices by brute force on a midpoint grid over [-pi, pi]^3.
std::vector<double> ishigami_grid_indices(int n) {
  const double h = 2.0 * pi / n;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = -pi + (i + 0.5) * h;
  double mean = 0.0, second = 0.0;
  std::vector<double> c1(n, 0.0), c2(n, 0.0), c3(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double f = ishigami({x[i], x[j], x[k]});
        mean += f;
        second += f * f;
        c1[i] += f;
        c2[j] += f;
        c3[k] += f;
      }
  const double nn = static_cast<double>(n) * n;
  mean /= nn * n;
  const double var = second / (nn * n) - mean * mean;
  std::vector<double> s;
  for (const auto *c : {&c1, &c2, &c3}) {
    double v = 0.0;
    for (double ci : *c) v += std::pow(ci / nn - mean, 2) / n;
    s.push_back(v / var);
  }
  return s;
}

void sensitivity_suite(Outcome &out) {
  struct Point {
    const char *name;
    double tau;
    GaussianControlSpec init;
  };
  const double d = 10.0;
  const std::vector<Point> points = {
      {"ATT", 0.05, {pi, 0.05, 0.025}},
      {"ATS", 0.3, {2.0 * pi, 0.0, 0.3}},
      {"EIT", 5.0, {4.0 * pi, -2.5, 7.5}},
  };
  std::vector<double> sigma;
  for (const auto &pt : points) {
    const MemoryParams p{d, 0.0, 0.0};
    optimize::GaussianSearchOptions go;
    go.jobs = 0;
    const auto opt = optimize::optimize_gaussian_control(p, standard_gaussian_signal(pt.tau), pt.init, {}, go);
    sensitivity::FluctuationSpec fs;
    fs.epsilon_m = 0.05;
    fs.samples = 400;
    fs.jobs = 0;
    const auto rep = sensitivity::fluctuation_variance(p, pt.tau, opt.control, fs, {});
    sigma.push_back(rep.std_efficiency);
    out.note(std::string(pt.name) + fmt(" (tau=%g): eta %.4f, sigma %.4f", pt.tau, opt.efficiency, rep.std_efficiency));
    out.require(rep.std_efficiency <= kSigmaMax, std::string(pt.name) + " sigma");
  }
  const double ratio = sigma[0] / sigma[2];
  out.note(fmt("ATT/EIT ratio %.2f", ratio));
  out.require(ratio >= kRatioLo && ratio <= kRatioHi, "ATT/EIT ratio");

  const auto oracle = ishigami_grid_indices(200);
  const std::vector<std::pair<double, double>> box(3, {-pi, pi});
  const auto est = sensitivity::sobol_first_order(ishigami, box, 1 << 15, 11, 0);
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, std::abs(est.per_parameter[i].index - oracle[i]));
  out.note(fmt("Ishigami S = %.3f %.3f %.3f", est.per_parameter[0].index, est.per_parameter[1].index,
               est.per_parameter[2].index));
  out.require(worst < kSobol, "Ishigami indices");
}

// 9. Spline sensitivity maps.
SplineControlSpec spline_optimum(const MemoryParams &p, const ComplexEnvelope &sig,
                                 const GaussianControlSpec &g) {
  const auto [lo, hi] = g.support();
  std::vector<double> knots(20);
  for (std::size_t i = 0; i < knots.size(); ++i) knots[i] = lo + (hi - lo) * static_cast<double>(i) / 19.0;
  return optimize::refine_control_knots(p, sig, to_spline(g, knots), {}).first;
}

struct MapShape {
  std::size_t peak;       // argmax of the map
  std::size_t strongest;  // argmax of |Omega|
  double peak_rabi_fraction;
};

MapShape describe(const SplineControlSpec &ctrl, const std::vector<double> &map) {
  const auto v = ctrl.knot_values();
  std::size_t strongest = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[strongest])) strongest = i;
  const auto peak = static_cast<std::size_t>(std::max_element(map.begin(), map.end()) - map.begin());
  return {peak, strongest, std::abs(v[peak]) / std::abs(v[strongest])};
}

void spline_maps(Outcome &out) {
  {
    const MemoryParams p{kEitD, 0.0, 0.0};
    const auto sig = standard_gaussian_signal(kEitTau);
    const auto ctrl = spline_optimum(p, sig, eit_optimum().control);
    const auto map = sensitivity::control_spline_sensitivity_map(p, sig, ctrl, 0.05, {}, 0);
    const auto s = describe(ctrl, map);
    const auto t = ctrl.knot_times();
    out.note(fmt("adiabatic: map peak at t=%.3f, |Omega| max at t=%.3f, |Omega| ratio %.2f", t[s.peak],
                 t[s.strongest], s.peak_rabi_fraction));
    out.require(s.peak > s.strongest && s.peak_rabi_fraction < kPeakRabiFraction,
                "adiabatic peak on the trailing edge");
  }
  {
    const double tau = 0.01;
    const MemoryParams p{kEitD, 0.0, 0.0};
    const auto sig = standard_gaussian_signal(tau);
    const auto g = optimize::optimize_gaussian_control(p, sig, {pi, tau, 0.5 * tau}, {});
    const auto ctrl = spline_optimum(p, sig, g.control);
    const auto map = sensitivity::control_spline_sensitivity_map(p, sig, ctrl, 0.05, {}, 0);
    const auto s = describe(ctrl, map);
    out.note(fmt("non-adiabatic: |Omega| at map peak is %.3f of its maximum", s.peak_rabi_fraction));
    out.require(s.peak_rabi_fraction >= kPeakRabiFraction, "non-adiabatic peak at the largest Rabi frequency");
  }
}

// 10. Fiber formulas.
void fiber_suite(Outcome &out) {
  using namespace protocols;
  const FiberSpec fiber{0.2, 2.04e8, 2e-26};
  const double bw_hz = 1e9;
  // Nanosecond units: gvd in s^2/m becomes 1e18 ns^2/m.
  const double tau_ns = bandwidth_from_duration(bw_hz * 1e-9);
  const auto a_in = make_gaussian_signal(tau_ns, AxisGrid::from_range(-8.0, 8.0, 2048));
  for (double target : {0.5, 0.9, 0.99}) {
    const double t = fiber_dispersion_tradeoff(fiber, target, bw_hz);
    const double beta_l = fiber.gvd * 1e18 * fiber.group_velocity * t;
    const auto spec = fourier_transform(a_in);
    std::vector<cplx> phased(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
      const double w = spec.grid().at(k);
      phased[k] = spec[k] * std::exp(cplx(0.0, 0.5 * beta_l * w * w));
    }
    const auto a_out =
        inverse_fourier_transform(ComplexEnvelope(spec.grid(), std::move(phased)), a_in.grid().start());
    const double f = metrics::fidelity(a_in, a_out, false).fidelity;
    out.note(fmt("target %.2f: propagated fidelity %.4f", target, f));
    out.require(std::abs(f - target) < kFiberRoundTripRel * target, fmt("round trip at %.2f", target));
  }
  const double t = fiber_one_over_e_time(fiber);
  const double analytic = 10.0 * std::log10(std::numbers::e) / (fiber.loss_db_per_km * 1e-3 * fiber.group_velocity);
  out.note(fmt("1/e time %.6e s vs %.6e s", t, analytic));
  out.require(std::abs(t - analytic) < kOneOverERel * analytic, "1/e time");
  out.require(std::abs(fiber_delay_efficiency(fiber, t) - std::exp(-1.0)) < kOneOverERel, "eta at the 1/e time");
}

// 11. CLI determinism.
void cli_determinism(Outcome &out) {
  const fs::path root = fs::temp_directory_path() / "memsim_acceptance_cli";
  fs::remove_all(root);
  for (const char *name : {"protocol_table", "single_run"}) {
    const std::string cfg = (kSource / "configs" / (std::string(name) + ".json")).string();
    const auto run = [&](const std::string &tag, int jobs) {
      const fs::path dir = root / (std::string(name) + "_" + tag);
      const int rc = shell("run \"" + cfg + "\" --seed 17 --jobs " + std::to_string(jobs) + " --out \"" +
                               dir.string() + "\"",
                           root / (std::string(name) + "_" + tag + ".log"));
      out.require(rc == 0, std::string(name) + " run exit code " + std::to_string(rc));
      return dir;
    };
    fs::create_directories(root);
    const auto a = run("serial", 1), b = run("again", 1), c = run("parallel", 4);
    std::size_t files = 0;
    for (const auto &e : fs::directory_iterator(a)) {
      const auto fname = e.path().filename();
      if (fname == "manifest.json") continue;
      ++files;
      const std::string ref = slurp(e.path());
      out.require(ref == slurp(b / fname) && ref == slurp(c / fname),
                  std::string(name) + "/" + fname.string() + " differs");
    }
    const auto manifest = [](const fs::path &dir) {
      auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
      m.erase("wall_time_seconds");
      return m;
    };
    out.require(manifest(a) == manifest(b) && manifest(a) == manifest(c),
                std::string(name) + " manifests differ beyond wall time");
    out.note(std::string(name) + ": " + std::to_string(files) + " output file(s) identical across 3 runs");
  }
  fs::remove_all(root);
}

}  // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<void(Outcome &)>>> criteria = {
      {"optimal bound", bound_check},
      {"gaussian-optimization parity", gaussian_parity},
      {"closed-form oracles", closed_forms},
      {"solver physics", solver_physics},
      {"exponential-input absorption", exponential_input},
      {"echo timing", echo_timing},
      {"kernel SVD", kernel_suite},
      {"sensitivity", sensitivity_suite},
      {"spline sensitivity maps", spline_maps},
      {"fiber formulas", fiber_suite},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(out);
    } catch (const std::exception &e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = seconds_since(t0);
    out.require(secs <= kLimit[i + 1], fmt("time limit %.0f s", kLimit[i + 1]));
    if (!out.ok()) ++failed;
    std::printf("%s %2zu %-30s %7.1fs  %s\n", out.ok() ? "PASS" : "FAIL", i + 1, criteria[i].first, secs,
                out.text().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
