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

#include "memsim/cli/catalog.hpp"

#include <cmath>
#include <numbers>

namespace memsim::cli {

std::optional<std::string> ParamInfo::violation(double v) const {
  const bool bad = !std::isfinite(v) || (lo_open ? v <= lo : v < lo) || (hi_open ? v >= hi : v > hi) ||
                   (integer && std::floor(v) != v);
  if (!bad) return std::nullopt;
  return name + " " + rule;
}

namespace {

constexpr double kInf = 1e300;

ParamInfo nonneg(std::string n, std::string desc, std::optional<double> fb = std::nullopt) {
  return {std::move(n), 0.0, false, kInf, false, false, "must be ≥ 0", fb, std::move(desc)};
}
ParamInfo positive(std::string n, std::string desc, std::optional<double> fb = std::nullopt) {
  return {std::move(n), 0.0, true, kInf, false, false, "must be > 0", fb, std::move(desc)};
}
ParamInfo any(std::string n, std::string desc, std::optional<double> fb = std::nullopt) {
  return {std::move(n), -kInf, false, kInf, false, false, "must be finite", fb, std::move(desc)};
}

}  // namespace

const std::vector<ParamInfo> &parameter_catalog() {
  static const std::vector<ParamInfo> cat = [] {
    std::vector<ParamInfo> c;
    // Memory.
    c.push_back(nonneg("d", "resonant optical depth"));
    c.push_back(any("delta", "detuning in units of gamma", 0.0));
    c.push_back(nonneg("gamma_b", "storage-state decay rate in units of gamma", 0.0));
    // Control; delay and duration in units of the signal duration.
    ParamInfo area{"area", 0.0, false, 20.0 * std::numbers::pi, false, false, "must lie in [0, 20 pi]",
                   2.0 * std::numbers::pi, "control pulse area"};
    c.push_back(area);
    c.push_back(any("delay", "control delay in units of the signal FWHM", 0.0));
    c.push_back(positive("duration_fwhm", "control FWHM in units of the signal FWHM", 1.0));
    // Signal.
    c.push_back(positive("signal_duration", "signal intensity FWHM times gamma"));
    c.push_back(positive("signal_fwhm_ns", "signal intensity FWHM in ns"));
    c.push_back(positive("bandwidth_mhz", "signal spectral FWHM in MHz"));
    c.push_back(positive("linewidth_mhz", "transition FWHM Gamma / 2 pi in MHz"));
    // Fluctuations.
    c.push_back({"epsilon_m", 0.0, false, 0.5, true, false, "must lie in [0, 0.5)", 0.05,
                 "fractional fluctuation of d and g"});
    c.push_back({"samples", 100.0, false, 1e7, false, true, "must be an integer ≥ 100", 200.0,
                 "Monte-Carlo samples per point"});
    // Closed-form protocols.
    c.push_back(positive("linewidth_ratio", "broadened over bare linewidth", 1.0));
    c.push_back(positive("tooth_spacing", "comb tooth spacing", 1.0));
    c.push_back(positive("tooth_width", "comb tooth FWHM", 0.25));
    c.push_back(positive("total_width", "comb envelope FWHM", 10.0));
    c.push_back(nonneg("rephase_gap", "echo rephasing gap", 0.0));
    c.push_back(positive("t2", "coherence time for the silenced echo"));
    c.push_back(nonneg("loss_db_per_km", "fiber loss", 0.2));
    c.push_back({"group_velocity", 0.0, true, 299792458.0, false, false, "must lie in (0, c]", 2.04e8,
                 "fiber group velocity in m/s"});
    c.push_back(any("gvd", "fiber group-velocity dispersion in s^2/m", 2.2e-26));
    c.push_back(nonneg("storage_time_s", "fiber storage time in s", 1e-6));
    c.push_back({"target_fidelity", 0.0, true, 1.0, true, false, "must lie in (0, 1)", 0.99,
                 "fidelity floor for the dispersion tradeoff"});
    c.push_back(positive("bandwidth_hz", "signal FWHM bandwidth in Hz for the fiber tradeoff", 1e9));
    return c;
  }();
  return cat;
}

const ParamInfo *find_param(const std::string &name) {
  for (const auto &p : parameter_catalog())
    if (p.name == name) return &p;
  return nullptr;
}

const KindInfo &kind_info(ScenarioKind kind) {
  static const KindInfo absorption{{"d", "delta", "bandwidth_mhz", "linewidth_mhz"},
                                   {{"d"}, {"bandwidth_mhz"}, {"linewidth_mhz"}}};
  static const KindInfo gaussian{
      {"d", "delta", "gamma_b", "area", "delay", "duration_fwhm", "signal_duration", "signal_fwhm_ns"},
      {{"d"}, {"signal_duration", "signal_fwhm_ns"}}};
  static const KindInfo sensitivity{{"d", "delta", "gamma_b", "area", "delay", "duration_fwhm",
                                     "signal_duration", "signal_fwhm_ns", "epsilon_m", "samples"},
                                    {{"d"}, {"signal_duration", "signal_fwhm_ns"}}};
  static const KindInfo protocols{{"d", "linewidth_ratio", "tooth_spacing", "tooth_width", "total_width",
                                   "rephase_gap", "t2", "loss_db_per_km", "group_velocity", "gvd",
                                   "storage_time_s", "target_fidelity", "bandwidth_hz"},
                                  {{"d"}}};
  static const KindInfo single = gaussian;
  switch (kind) {
    case ScenarioKind::absorption_sweep: return absorption;
    case ScenarioKind::gaussian_opt_map: return gaussian;
    case ScenarioKind::sensitivity_map: return sensitivity;
    case ScenarioKind::protocol_table: return protocols;
    case ScenarioKind::single_run: return single;
  }
  return single;
}

bool has_value(const Scenario &sc, const std::map<std::string, double> &point, const std::string &name) {
  if (point.count(name) || sc.fixed.count(name)) return true;
  const ParamInfo *p = find_param(name);
  return p != nullptr && p->fallback.has_value();
}

double lookup(const Scenario &sc, const std::map<std::string, double> &point, const std::string &name) {
  if (auto it = point.find(name); it != point.end()) return it->second;
  if (auto it = sc.fixed.find(name); it != sc.fixed.end()) return it->second;
  const ParamInfo *p = find_param(name);
  if (p != nullptr && p->fallback) return *p->fallback;
  throw ConfigError({"parameter '" + name + "' has no value"});
}

}  // namespace memsim::cli
