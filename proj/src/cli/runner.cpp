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

#include "memsim/cli/runner.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "memsim/cli/catalog.hpp"
#include "memsim/core/error.hpp"
#include "memsim/core/parallel.hpp"
#include "memsim/optimize/bound.hpp"
#include "memsim/optimize/gaussian_opt.hpp"
#include "memsim/protocols/closed_form.hpp"
#include "memsim/sensitivity/sensitivity.hpp"
#include "memsim/solver/solvers.hpp"

#ifndef MEMSIM_VERSION
#define MEMSIM_VERSION "0.0.0"
#endif

namespace memsim::cli {

using nlohmann::json;
using Point = std::map<std::string, double>;

std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 of the combined value
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

double signal_duration(const Scenario &sc, const Point &pt) {
  if (pt.count("signal_duration") || sc.fixed.count("signal_duration"))
    return lookup(sc, pt, "signal_duration");
  // gamma = pi * Gamma with Gamma / 2 pi the reference FWHM in MHz.
  return lookup(sc, pt, "signal_fwhm_ns") * 1e-9 * std::numbers::pi * *sc.gamma_reference_mhz * 1e6;
}

core::MemoryParams memory(const Scenario &sc, const Point &pt) {
  core::MemoryParams p{lookup(sc, pt, "d"), 0.0, 0.0};
  if (kind_info(sc.kind).uses("delta")) p.delta = lookup(sc, pt, "delta");
  if (kind_info(sc.kind).uses("gamma_b")) p.gamma_b = lookup(sc, pt, "gamma_b");
  p.validate();
  return p;
}

core::GaussianControlSpec control(const Scenario &sc, const Point &pt, double g) {
  core::GaussianControlSpec c{lookup(sc, pt, "area"), lookup(sc, pt, "delay") * g,
                              lookup(sc, pt, "duration_fwhm") * g};
  c.validate();
  return c;
}

struct Row {
  std::vector<double> values;
  std::vector<EnvelopeRecord> envelopes;
};

EnvelopeRecord record(std::size_t row, const char *name, const core::ComplexEnvelope &e) {
  EnvelopeRecord r{row, name, e.grid().start(), e.grid().step(), {}, {}};
  for (auto c : e.samples()) {
    r.re.push_back(c.real());
    r.im.push_back(c.imag());
  }
  return r;
}

std::vector<std::string> columns(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::absorption_sweep:
      return {"d", "linewidth_mhz", "bandwidth_mhz", "signal_duration", "absorption"};
    case ScenarioKind::gaussian_opt_map:
      return {"d", "signal_duration", "efficiency", "bound", "control_area", "control_delay",
              "control_duration_fwhm", "evaluations", "converged"};
    case ScenarioKind::sensitivity_map:
      return {"d", "signal_duration", "epsilon_m", "efficiency", "control_area", "control_delay",
              "control_duration_fwhm", "mean_efficiency", "std_efficiency", "std_error", "index_d",
              "index_g"};
    case ScenarioKind::protocol_table:
      return {"d", "att", "crib", "afc_forward", "afc_backward", "rose", "fiber_delay",
              "fiber_one_over_e_s", "fiber_dispersion_time_s"};
    case ScenarioKind::single_run:
      return {"d", "delta", "gamma_b", "signal_duration", "area", "delay", "duration_fwhm",
              "storage_efficiency", "transmitted", "stored_p", "stored_b", "decayed_p", "decayed_b",
              "residual"};
  }
  return {};
}

Row evaluate(const Scenario &sc, const Point &pt, std::size_t index, std::uint64_t seed) {
  Row row;
  auto &v = row.values;
  switch (sc.kind) {
    case ScenarioKind::absorption_sweep: {
      const double lw = lookup(sc, pt, "linewidth_mhz"), bw = lookup(sc, pt, "bandwidth_mhz");
      const double g = 2.0 * std::numbers::ln2 * lw / bw;
      const core::MemoryParams p = memory(sc, pt);
      v = {p.d, lw, bw, g, solver::gaussian_linear_absorption(p, g)};
      break;
    }
    case ScenarioKind::gaussian_opt_map:
    case ScenarioKind::sensitivity_map: {
      const core::MemoryParams p = memory(sc, pt);
      const double g = signal_duration(sc, pt);
      const auto init = control(sc, pt, g);
      optimize::GaussianSearchOptions opts;
      opts.seed = seed;
      const auto best = optimize::optimize_gaussian_control(p, core::standard_gaussian_signal(g), init,
                                                            sc.solver, opts);
      const double area = best.control.area, delay = best.control.delay / g,
                   dur = best.control.duration_fwhm / g;
      if (sc.kind == ScenarioKind::gaussian_opt_map) {
        v = {p.d, g, best.efficiency, optimize::optimal_efficiency_bound(p.d), area, delay, dur,
             static_cast<double>(best.evaluations), best.converged ? 1.0 : 0.0};
      } else {
        sensitivity::FluctuationSpec fs;
        fs.epsilon_m = lookup(sc, pt, "epsilon_m");
        fs.samples = static_cast<std::size_t>(lookup(sc, pt, "samples"));
        fs.seed = point_seed(seed, 1);
        const auto rep = sensitivity::fluctuation_variance(p, g, best.control, fs, sc.solver);
        v = {p.d, g, fs.epsilon_m, best.efficiency, area, delay, dur, rep.mean_efficiency,
             rep.std_efficiency, rep.std_error, rep.per_parameter[0].index, rep.per_parameter[1].index};
      }
      break;
    }
    case ScenarioKind::protocol_table: {
      const double d = lookup(sc, pt, "d");
      protocols::AfcSpec afc{lookup(sc, pt, "total_width"), lookup(sc, pt, "tooth_width"),
                             lookup(sc, pt, "tooth_spacing"), d};
      afc.validate();
      protocols::FiberSpec fiber{lookup(sc, pt, "loss_db_per_km"), lookup(sc, pt, "group_velocity"),
                                 lookup(sc, pt, "gvd")};
      fiber.validate();
      const double t2 = has_value(sc, pt, "t2") ? lookup(sc, pt, "t2")
                                                : std::numeric_limits<double>::infinity();
      v = {d,
           protocols::att_storage_efficiency(d),
           protocols::crib_efficiency(d, lookup(sc, pt, "linewidth_ratio")),
           protocols::afc_efficiency(afc, protocols::AfcDirection::forward),
           protocols::afc_efficiency(afc, protocols::AfcDirection::backward),
           protocols::rose_efficiency(d, lookup(sc, pt, "rephase_gap"), t2),
           protocols::fiber_delay_efficiency(fiber, lookup(sc, pt, "storage_time_s")),
           protocols::fiber_one_over_e_time(fiber),
           protocols::fiber_dispersion_tradeoff(fiber, lookup(sc, pt, "target_fidelity"),
                                                lookup(sc, pt, "bandwidth_hz"))};
      break;
    }
    case ScenarioKind::single_run: {
      const core::MemoryParams p = memory(sc, pt);
      const double g = signal_duration(sc, pt);
      const auto c = control(sc, pt, g);
      const auto [lo, hi] = c.support();
      const auto sig = core::zero_padded(core::standard_gaussian_signal(g), lo, hi);
      const auto res = solver::simulate_time_domain(solver::make_request(p, sig, c), sc.solver);
      const auto &e = res.energy;
      v = {p.d, p.delta, p.gamma_b, g, c.area, c.delay / g, c.duration_fwhm / g,
           res.storage_efficiency(), e.transmitted, e.stored_p, e.stored_b, e.decayed_p, e.decayed_b,
           e.relative_residual()};
      if (sc.output.include_envelopes) {
        row.envelopes.push_back(record(index, "a_out", res.a_out));
        row.envelopes.push_back(record(index, "b_final", res.b_final));
      }
      break;
    }
  }
  return row;
}

std::string describe(const Point &pt) {
  std::string s;
  for (const auto &[k, v] : pt) s += (s.empty() ? "" : ", ") + k + "=" + format_number(v);
  return s.empty() ? "the fixed point" : s;
}

}  // namespace

ScenarioResult execute_scenario(const Scenario &sc, std::size_t jobs, std::uint64_t seed) {
  const auto pts = sc.points();
  std::vector<Row> rows(pts.size());
  std::vector<std::string> errors(pts.size());
  std::vector<char> numerical(pts.size(), 0);
  core::parallel_for(pts.size(), core::resolve_jobs(jobs), [&](std::size_t i) {
    try {
      rows[i] = evaluate(sc, pts[i], i, point_seed(seed, i));
    } catch (const NonconvergenceError &e) {
      errors[i] = e.what();
      numerical[i] = 1;
    } catch (const std::exception &e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!errors[i].empty())
      throw PointError("grid point " + std::to_string(i) + " (" + describe(pts[i]) + "): " + errors[i],
                       numerical[i] != 0);
  ScenarioResult out;
  out.table.columns = columns(sc.kind);
  for (auto &r : rows) {
    out.table.rows.push_back(std::move(r.values));
    for (auto &e : r.envelopes) out.envelopes.push_back(std::move(e));
  }
  return out;
}

std::string table_csv(const Table &t) {
  std::string s;
  for (std::size_t j = 0; j < t.columns.size(); ++j) s += (j ? "," : "") + t.columns[j];
  s += "\n";
  for (const auto &r : t.rows) {
    for (std::size_t j = 0; j < r.size(); ++j) s += (j ? "," : "") + format_number(r[j]);
    s += "\n";
  }
  return s;
}

namespace {

json rounded(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(format_number(v).c_str(), nullptr);
}

}  // namespace

std::string table_json(const Scenario &sc, const Table &t) {
  json doc;
  doc["kind"] = kind_name(sc.kind);
  doc["columns"] = t.columns;
  doc["rows"] = json::array();
  for (const auto &r : t.rows) {
    json row = json::array();
    for (double v : r) row.push_back(rounded(v));
    doc["rows"].push_back(std::move(row));
  }
  return doc.dump(1) + "\n";
}

std::string envelopes_json(const std::vector<EnvelopeRecord> &env) {
  json doc = json::array();
  for (const auto &e : env) {
    json re = json::array(), im = json::array();
    for (double x : e.re) re.push_back(rounded(x));
    for (double x : e.im) im.push_back(rounded(x));
    doc.push_back({{"row", e.row}, {"name", e.name}, {"start", rounded(e.start)},
                   {"step", rounded(e.step)}, {"re", re}, {"im", im}});
  }
  return json{{"envelopes", doc}}.dump() + "\n";
}

std::string sha256_hex(const std::string &data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char *hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

std::size_t resolve_job_count(std::size_t flag) {
  if (flag > 0) return flag;
  if (const char *env = std::getenv("MEMSIM_JOBS")) {
    char *end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return core::resolve_jobs(0);
}

std::size_t multimode_capacity(const std::vector<double> &mode_efficiencies, double threshold) {
  std::size_t n = 0;
  for (double e : mode_efficiencies) n += e >= threshold ? 1 : 0;
  return n;
}

int validate_command(const std::string &config_path) {
  std::vector<std::string> errs;
  try {
    errs = validate_scenario_text(read_file(config_path));
  } catch (const ConfigError &e) {
    errs = e.violations();
  }
  if (errs.empty()) {
    std::cout << config_path << ": valid\n";
    return 0;
  }
  for (const auto &e : errs) std::cerr << config_path << ": " << e << "\n";
  return 1;
}

namespace {

void write_file(const std::filesystem::path &p, const std::string &data) {
  std::ofstream out(p, std::ios::binary);
  out << data;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace

int run_command(const std::string &config_path, const RunOptions &opts) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string text;
  Scenario sc;
  try {
    text = read_file(config_path);
    sc = parse_scenario(text);
  } catch (const ConfigError &e) {
    for (const auto &v : e.violations()) std::cerr << config_path << ": " << v << "\n";
    return 1;
  }
  const std::uint64_t seed = opts.seed.value_or(sc.output.seed);
  const std::size_t jobs = resolve_job_count(opts.jobs);
  ScenarioResult res;
  try {
    res = execute_scenario(sc, jobs, seed);
  } catch (const PointError &e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return e.numerical() ? 2 : 1;
  }

  std::map<std::string, std::string> files;
  files[sc.output.format == OutputFormat::csv ? "results.csv" : "results.json"] =
      sc.output.format == OutputFormat::csv ? table_csv(res.table) : table_json(sc, res.table);
  if (sc.output.include_envelopes) files["envelopes.json"] = envelopes_json(res.envelopes);

  json manifest;
  manifest["tool"] = "memsim";
  manifest["version"] = MEMSIM_VERSION;
  manifest["kind"] = kind_name(sc.kind);
  manifest["config_sha256"] = sha256_hex(text);
  manifest["seed"] = seed;
  manifest["points"] = res.table.rows.size();
  for (const auto &[name, data] : files) manifest["outputs"][name] = sha256_hex(data);
  manifest["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  try {
    const std::filesystem::path dir(opts.out_dir.value_or(sc.output.path));
    std::filesystem::create_directories(dir);
    for (const auto &[name, data] : files) write_file(dir / name, data);
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception &e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace memsim::cli
