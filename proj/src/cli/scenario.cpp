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

#include "memsim/cli/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "memsim/cli/catalog.hpp"

namespace memsim::cli {

using nlohmann::json;

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(violations.empty() ? "invalid configuration" : violations.front()),
      violations_(std::move(violations)) {}

const char *kind_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::absorption_sweep: return "absorption_sweep";
    case ScenarioKind::gaussian_opt_map: return "gaussian_opt_map";
    case ScenarioKind::sensitivity_map: return "sensitivity_map";
    case ScenarioKind::protocol_table: return "protocol_table";
    case ScenarioKind::single_run: return "single_run";
  }
  return "?";
}

std::vector<std::map<std::string, double>> Scenario::points() const {
  std::vector<std::map<std::string, double>> out{{}};
  for (const auto &ax : axes) {
    std::vector<std::map<std::string, double>> next;
    next.reserve(out.size() * ax.values.size());
    for (const auto &p : out)
      for (double v : ax.values) {
        auto q = p;
        q[ax.name] = v;
        next.push_back(std::move(q));
      }
    out = std::move(next);
  }
  return out;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::optional<ScenarioKind> parse_kind(const std::string &s) {
  for (auto k : {ScenarioKind::absorption_sweep, ScenarioKind::gaussian_opt_map,
                 ScenarioKind::sensitivity_map, ScenarioKind::protocol_table, ScenarioKind::single_run})
    if (s == kind_name(k)) return k;
  return std::nullopt;
}

bool is_count(const json &v) {
  return v.is_number_integer() || (v.is_number() && std::floor(v.get<double>()) == v.get<double>());
}

void check_keys(const json &obj, const std::set<std::string> &allowed, const std::string &where,
                std::vector<std::string> &errs) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) errs.push_back("unknown key '" + where + it.key() + "'");
}

void parse_axis(const json &a, std::size_t idx, Scenario &sc, std::vector<std::string> &errs) {
  const std::string where = "parameter_axes[" + std::to_string(idx) + "]";
  if (!a.is_object()) {
    errs.push_back(where + " must be an object");
    return;
  }
  check_keys(a, {"name", "values", "min", "max", "points", "scale"}, where + ".", errs);
  ParameterAxis ax;
  if (!a.contains("name") || !a["name"].is_string()) {
    errs.push_back(where + ".name must be a string");
    return;
  }
  ax.name = a["name"].get<std::string>();
  const std::string label = "axis '" + ax.name + "'";
  if (a.contains("values")) {
    if (a.contains("min") || a.contains("max") || a.contains("points") || a.contains("scale"))
      errs.push_back(label + ": give either values or min/max/points, not both");
    if (!a["values"].is_array() || a["values"].size() < 2) {
      errs.push_back(label + ": values must be an array of at least 2 numbers");
      return;
    }
    for (const auto &v : a["values"]) {
      if (!v.is_number()) {
        errs.push_back(label + ": values must be numbers");
        return;
      }
      ax.values.push_back(v.get<double>());
    }
  } else {
    bool ok = true;
    for (const char *k : {"min", "max"})
      if (!a.contains(k) || !a[k].is_number()) {
        errs.push_back(label + ": " + k + " must be a number");
        ok = false;
      }
    if (!a.contains("points") || !is_count(a["points"]) || a["points"].get<double>() < 2) {
      errs.push_back(label + ": points must be an integer >= 2");
      ok = false;
    }
    std::string scale = "linear";
    if (a.contains("scale")) {
      if (!a["scale"].is_string() || (a["scale"] != "linear" && a["scale"] != "log")) {
        errs.push_back(label + ": scale must be 'linear' or 'log'");
        ok = false;
      } else {
        scale = a["scale"].get<std::string>();
      }
    }
    if (!ok) return;
    const double lo = a["min"].get<double>(), hi = a["max"].get<double>();
    const auto n = static_cast<std::size_t>(a["points"].get<double>());
    if (!(hi > lo)) {
      errs.push_back(label + ": max must exceed min");
      return;
    }
    if (scale == "log" && !(lo > 0.0)) {
      errs.push_back(label + ": log scale needs positive endpoints");
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(n - 1);
      double v = scale == "log" ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
      if (i == n - 1) v = hi;
      ax.values.push_back(v);
    }
  }
  sc.axes.push_back(std::move(ax));
}

void parse_solver(const json &s, Scenario &sc, std::vector<std::string> &errs) {
  if (!s.is_object()) {
    errs.push_back("solver must be an object");
    return;
  }
  check_keys(s, {"z_points", "tau_points", "method", "energy_tolerance"}, "solver.", errs);
  if (s.contains("z_points")) {
    if (!is_count(s["z_points"]) || s["z_points"].get<double>() < 16)
      errs.push_back("solver.z_points must be an integer >= 16");
    else
      sc.solver.z_points = static_cast<std::size_t>(s["z_points"].get<double>());
  }
  if (s.contains("tau_points")) {
    if (!is_count(s["tau_points"]) || s["tau_points"].get<double>() < 64)
      errs.push_back("solver.tau_points must be an integer >= 64");
    else
      sc.solver.tau_points = static_cast<std::size_t>(s["tau_points"].get<double>());
  }
  if (s.contains("method")) {
    if (s["method"] == "rk4")
      sc.solver.method = solver::Method::rk4;
    else if (s["method"] == "rk2")
      sc.solver.method = solver::Method::rk2;
    else
      errs.push_back("solver.method must be 'rk4' or 'rk2'");
  }
  if (s.contains("energy_tolerance")) {
    const auto &v = s["energy_tolerance"];
    if (!v.is_number() || !(v.get<double>() > 0.0) || v.get<double>() > 1e-2)
      errs.push_back("solver.energy_tolerance must lie in (0, 0.01]");
    else
      sc.solver.energy_tolerance = v.get<double>();
  }
}

void parse_output(const json &o, Scenario &sc, std::vector<std::string> &errs) {
  if (!o.is_object()) {
    errs.push_back("output must be an object");
    return;
  }
  check_keys(o, {"path", "format", "include_envelopes", "seed"}, "output.", errs);
  if (o.contains("path")) {
    if (!o["path"].is_string() || o["path"].get<std::string>().empty())
      errs.push_back("output.path must be a non-empty string");
    else
      sc.output.path = o["path"].get<std::string>();
  }
  if (o.contains("format")) {
    if (o["format"] == "csv")
      sc.output.format = OutputFormat::csv;
    else if (o["format"] == "json")
      sc.output.format = OutputFormat::json;
    else
      errs.push_back("output.format must be 'csv' or 'json'");
  }
  if (o.contains("include_envelopes")) {
    if (!o["include_envelopes"].is_boolean())
      errs.push_back("output.include_envelopes must be true or false");
    else
      sc.output.include_envelopes = o["include_envelopes"].get<bool>();
  }
  if (o.contains("seed")) {
    if (!o["seed"].is_number_unsigned())
      errs.push_back("output.seed must be a nonnegative integer");
    else
      sc.output.seed = o["seed"].get<std::uint64_t>();
  }
}

void check_semantics(Scenario &sc, std::vector<std::string> &errs) {
  const KindInfo &info = kind_info(sc.kind);
  std::set<std::string> seen;
  auto check_value = [&](const std::string &name, double v, const std::string &where) {
    const ParamInfo *p = find_param(name);
    if (p == nullptr) return;
    if (auto msg = p->violation(v)) errs.push_back(where + *msg);
  };
  for (const auto &ax : sc.axes) {
    if (!seen.insert(ax.name).second) errs.push_back("axis '" + ax.name + "' is given more than once");
    if (find_param(ax.name) == nullptr) {
      errs.push_back("unknown parameter '" + ax.name + "'");
      continue;
    }
    if (!info.uses(ax.name))
      errs.push_back("parameter '" + ax.name + "' is not used by kind '" + kind_name(sc.kind) + "'");
    for (double v : ax.values) check_value(ax.name, v, "axis '" + ax.name + "': ");
  }
  for (const auto &[name, v] : sc.fixed) {
    if (find_param(name) == nullptr) {
      errs.push_back("unknown parameter '" + name + "'");
      continue;
    }
    if (!info.uses(name))
      errs.push_back("parameter '" + name + "' is not used by kind '" + kind_name(sc.kind) + "'");
    if (seen.count(name)) errs.push_back("parameter '" + name + "' is both an axis and fixed");
    check_value(name, v, "");
  }
  auto present = [&](const std::string &n) { return seen.count(n) || sc.fixed.count(n); };
  for (const auto &group : info.required) {
    std::size_t hits = 0;
    std::string names;
    for (const auto &n : group) {
      hits += present(n) ? 1 : 0;
      names += (names.empty() ? "" : " or ") + n;
    }
    if (hits == 0) errs.push_back("kind '" + std::string(kind_name(sc.kind)) + "' needs " + names);
    if (hits > 1) errs.push_back("give only one of " + names);
  }
  if (sc.output.include_envelopes && sc.kind != ScenarioKind::single_run)
    errs.push_back("output.include_envelopes is only supported for kind 'single_run'");
  if (present("signal_fwhm_ns") && !sc.gamma_reference_mhz)
    errs.push_back("signal_fwhm_ns needs gamma_reference_mhz");
}

Scenario parse_impl(const std::string &text, std::vector<std::string> &errs) {
  Scenario sc;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    errs.push_back(std::string("config is not valid JSON: ") + e.what());
    return sc;
  }
  if (!doc.is_object()) {
    errs.push_back("config must be a JSON object");
    return sc;
  }
  check_keys(doc, {"kind", "description", "gamma_reference_mhz", "parameter_axes", "fixed_parameters",
                   "solver", "output"},
             "", errs);
  bool kind_ok = false;
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    errs.push_back("kind must be one of absorption_sweep, gaussian_opt_map, sensitivity_map, "
                   "protocol_table, single_run");
  } else if (auto k = parse_kind(doc["kind"].get<std::string>())) {
    sc.kind = *k;
    kind_ok = true;
  } else {
    errs.push_back("unknown kind '" + doc["kind"].get<std::string>() + "'");
  }
  if (doc.contains("description") && !doc["description"].is_string())
    errs.push_back("description must be a string");
  if (doc.contains("gamma_reference_mhz")) {
    const auto &g = doc["gamma_reference_mhz"];
    if (!g.is_number() || !(g.get<double>() > 0.0))
      errs.push_back("gamma_reference_mhz must be > 0");
    else
      sc.gamma_reference_mhz = g.get<double>();
  }
  if (doc.contains("parameter_axes")) {
    if (!doc["parameter_axes"].is_array())
      errs.push_back("parameter_axes must be an array");
    else
      for (std::size_t i = 0; i < doc["parameter_axes"].size(); ++i)
        parse_axis(doc["parameter_axes"][i], i, sc, errs);
  }
  if (doc.contains("fixed_parameters")) {
    const auto &f = doc["fixed_parameters"];
    if (!f.is_object()) {
      errs.push_back("fixed_parameters must be an object");
    } else {
      for (auto it = f.begin(); it != f.end(); ++it) {
        if (!it.value().is_number())
          errs.push_back("fixed parameter '" + it.key() + "' must be a number");
        else
          sc.fixed[it.key()] = it.value().get<double>();
      }
    }
  }
  if (doc.contains("solver")) parse_solver(doc["solver"], sc, errs);
  if (doc.contains("output")) parse_output(doc["output"], sc, errs);
  if (kind_ok) check_semantics(sc, errs);
  return sc;
}

}  // namespace

std::vector<std::string> validate_scenario_text(const std::string &text) {
  std::vector<std::string> errs;
  parse_impl(text, errs);
  return errs;
}

Scenario parse_scenario(const std::string &text) {
  std::vector<std::string> errs;
  Scenario sc = parse_impl(text, errs);
  if (!errs.empty()) throw ConfigError(std::move(errs));
  return sc;
}

}  // namespace memsim::cli
