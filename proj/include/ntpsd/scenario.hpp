// Copyright 2026 The ntpsd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Declarative scenarios. A scenario is a JSON document:
//
//   {
//     "format_version": 1,
//     "name": "fig4",
//     "pump": {"alpha_p_squared": [10]},
//     "times": [0.3, 0.6]            or {"start": 0.1, "stop": 1.0, "step": 0.05},
//     "cutoffs": {"n_t_max": 12, "tail_tolerance": 1e-8},   (both optional)
//     "convergence_check": true,
//     "tables": [
//       {"name": "optimum",
//        "condition": [{"mode": "b", "quadrature": "X", "outcomes": [3]},
//                      {"mode": "c", "quadrature": "X", "outcomes": [0]}],
//        "observables": ["cat_optimum", "negativity"],
//        "options": {"alpha_range": [0.01, 6]}}
//     ]
//   }
//
// Outcome lists may also be ranges {"start", "stop", "step"}.

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "ntpsd/error.hpp"
#include "ntpsd/fock.hpp"
#include "ntpsd/hermite.hpp"

namespace ntpsd {

inline constexpr int kScenarioFormatVersion = 1;

using json = nlohmann::json;

struct ConditionSpec {
  Mode mode = Mode::a;
  Quadrature quadrature = Quadrature::X;
  std::vector<double> outcomes;

  std::string column() const { return std::string(quadrature == Quadrature::X ? "x_" : "y_") + mode_char(mode); }
};

struct TableOptions {
  double alpha_lo = 0.01;
  double alpha_hi = 6.0;
  double alpha_tol = 1e-3;
  double alpha_step = 0.02;          ///< cat_scan resolution
  std::optional<double> cat_alpha;   ///< target amplitude for cat_fidelity
  std::optional<double> phase_radius;
  double phase_step = 0.05;
  int two_mode_points = 41;
  std::string b_to_a_variant = "x_c";
  double b_to_a_outcome = 0.0;
};

struct TableSpec {
  std::string name;
  std::vector<ConditionSpec> condition;
  std::vector<std::string> observables;
  TableOptions options;

  /// Number of replicated modes left after conditioning the triplet state.
  int remaining_modes() const { return 3 - static_cast<int>(condition.size()); }
};

struct Scenario {
  std::string name;
  std::string description;
  std::vector<double> alpha_p_squared;
  std::vector<double> times;
  std::optional<int> n_t_max;
  double tail_tolerance = kDefaultTailTolerance;
  bool convergence_check = true;
  std::vector<TableSpec> tables;
  json source;

  bool heavy() const {
    for (double a : alpha_p_squared)
      if (a >= 50.0 - 1e-9) return true;
    return false;
  }
};

struct ObservableInfo {
  std::string id;
  std::set<int> allowed_m;
  bool field = false;  ///< writes its own file rather than table columns
};

inline const std::vector<ObservableInfo>& observable_catalogue() {
  static const std::vector<ObservableInfo> cat = {
      {"purity", {1, 2, 3}, false},
      {"mean_triplets", {1, 2, 3}, false},
      {"outcome_density", {1, 2}, false},
      {"negativity", {1, 2}, false},
      {"macroscopicity", {1}, false},
      {"cat_optimum", {1}, false},
      {"cat_fidelity", {1}, false},
      {"bell_fidelity", {2}, false},
      {"qudit_fidelity", {2}, false},
      {"dominant_amplitudes", {2}, false},
      {"squeezing", {1, 2}, false},
      {"steering_a_bc", {3}, false},
      {"steering_b_a", {3}, false},
      {"wigner", {1, 2}, true},
      {"cat_scan", {1}, true},
  };
  return cat;
}

inline const ObservableInfo* find_observable(const std::string& id) {
  for (const auto& o : observable_catalogue())
    if (o.id == id) return &o;
  return nullptr;
}

namespace detail {

/// start, start+step, ..., stop inclusive; values are rounded to 12
/// significant digits so that 0.1 + 4*0.05 prints and compares as 0.3.
inline std::vector<double> expand_range(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) throw ConfigError("range needs step > 0 and stop >= start");
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 1000000) throw ConfigError("range has too many points");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  char buf[64];
  for (long i = 0; i < count; ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", start + static_cast<double>(i) * step);
    out.push_back(std::stod(buf));
  }
  return out;
}

inline std::vector<double> number_list(const json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>()};
  if (j.is_array()) {
    std::vector<double> out;
    for (const auto& v : j) {
      if (!v.is_number()) throw ConfigError(what + ": expected numbers");
      out.push_back(v.get<double>());
    }
    if (out.empty()) throw ConfigError(what + ": empty list");
    return out;
  }
  if (j.is_object()) {
    for (const char* k : {"start", "stop", "step"})
      if (!j.contains(k) || !j[k].is_number()) throw ConfigError(what + ": range needs numeric start/stop/step");
    return expand_range(j["start"].get<double>(), j["stop"].get<double>(), j["step"].get<double>());
  }
  throw ConfigError(what + ": expected a number, a list or a range object");
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("key '") + key + "' has the wrong type");
  }
}

inline void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

inline TableOptions parse_options(const json& j) {
  TableOptions o;
  if (j.is_null()) return o;
  if (!j.is_object()) throw ConfigError("options must be an object");
  reject_unknown(j,
                 {"alpha_range", "alpha_tol", "alpha_step", "cat_alpha", "phase_radius", "phase_step",
                  "two_mode_points", "b_to_a_variant", "b_to_a_outcome"},
                 "options");
  if (j.contains("alpha_range")) {
    const auto r = number_list(j["alpha_range"], "alpha_range");
    if (r.size() != 2 || !(r[1] > r[0]) || r[0] < 0.0) throw ConfigError("alpha_range must be [lo, hi], 0 <= lo < hi");
    o.alpha_lo = r[0];
    o.alpha_hi = r[1];
  }
  o.alpha_tol = get_or(j, "alpha_tol", o.alpha_tol);
  o.alpha_step = get_or(j, "alpha_step", o.alpha_step);
  if (j.contains("cat_alpha")) o.cat_alpha = get_or(j, "cat_alpha", 0.0);
  if (j.contains("phase_radius")) o.phase_radius = get_or(j, "phase_radius", 0.0);
  o.phase_step = get_or(j, "phase_step", o.phase_step);
  o.two_mode_points = get_or(j, "two_mode_points", o.two_mode_points);
  o.b_to_a_variant = get_or(j, "b_to_a_variant", o.b_to_a_variant);
  o.b_to_a_outcome = get_or(j, "b_to_a_outcome", o.b_to_a_outcome);
  if (!(o.alpha_tol > 0.0) || !(o.alpha_step > 0.0) || !(o.phase_step > 0.0))
    throw ConfigError("alpha_tol, alpha_step and phase_step must be positive");
  if (o.phase_radius && !(*o.phase_radius > 0.0)) throw ConfigError("phase_radius must be positive");
  if (o.two_mode_points < 3) throw ConfigError("two_mode_points must be at least 3");
  if (o.b_to_a_variant != "x_c" && o.b_to_a_variant != "y_c") throw ConfigError("b_to_a_variant must be x_c or y_c");
  return o;
}

inline ConditionSpec parse_condition(const json& j) {
  if (!j.is_object()) throw ConfigError("condition entries must be objects");
  reject_unknown(j, {"mode", "quadrature", "outcomes"}, "condition");
  ConditionSpec c;
  const auto mode = get_or<std::string>(j, "mode", "");
  if (mode.size() != 1 || mode[0] == 'p' || std::string("abc").find(mode[0]) == std::string::npos)
    throw ConfigError("condition mode must be one of a, b, c");
  c.mode = mode_from_char(mode[0]);
  const auto q = get_or<std::string>(j, "quadrature", "X");
  if (q == "X" || q == "x") c.quadrature = Quadrature::X;
  else if (q == "Y" || q == "y") c.quadrature = Quadrature::Y;
  else throw ConfigError("quadrature must be X or Y");
  if (!j.contains("outcomes")) throw ConfigError("condition needs 'outcomes'");
  c.outcomes = number_list(j["outcomes"], "outcomes");
  return c;
}

inline TableSpec parse_table(const json& j) {
  if (!j.is_object()) throw ConfigError("tables must hold objects");
  reject_unknown(j, {"name", "condition", "observables", "options"}, "table");
  TableSpec t;
  t.name = get_or<std::string>(j, "name", "");
  if (t.name.empty() || t.name.find_first_of("/\\ ") != std::string::npos)
    throw ConfigError("table name must be a nonempty word usable as a file name");
  if (j.contains("condition")) {
    if (!j["condition"].is_array()) throw ConfigError("table '" + t.name + "': condition must be a list");
    for (const auto& c : j["condition"]) t.condition.push_back(parse_condition(c));
  }
  if (t.condition.size() > 2) throw ConfigError("table '" + t.name + "': at most two conditioned modes");
  for (std::size_t i = 0; i < t.condition.size(); ++i)
    for (std::size_t k = 0; k < i; ++k)
      if (t.condition[i].mode == t.condition[k].mode)
        throw ConfigError("table '" + t.name + "': conditioned modes must be distinct");
  if (!j.contains("observables") || !j["observables"].is_array() || j["observables"].empty())
    throw ConfigError("table '" + t.name + "': needs a nonempty observables list");
  for (const auto& o : j["observables"]) {
    if (!o.is_string()) throw ConfigError("observable ids are strings");
    const auto id = o.get<std::string>();
    const auto* info = find_observable(id);
    if (!info) throw ConfigError("table '" + t.name + "': unknown observable '" + id + "'");
    if (!info->allowed_m.count(t.remaining_modes()))
      throw ConfigError("table '" + t.name + "': observable '" + id + "' does not apply to " +
                        std::to_string(t.remaining_modes()) + " remaining modes");
    if (id == "outcome_density" && t.condition.empty())
      throw ConfigError("table '" + t.name + "': outcome_density needs a condition");
    t.observables.push_back(id);
  }
  t.options = parse_options(j.contains("options") ? j["options"] : json());
  for (const auto& id : t.observables)
    if (id == "cat_fidelity" && !t.options.cat_alpha)
      throw ConfigError("table '" + t.name + "': cat_fidelity needs options.cat_alpha");
  return t;
}

}  // namespace detail

inline Scenario parse_scenario(const json& j) {
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  detail::reject_unknown(j,
                         {"format_version", "name", "description", "pump", "times", "cutoffs", "convergence_check",
                          "tables"},
                         "scenario");
  const int version = detail::get_or(j, "format_version", -1);
  if (version != kScenarioFormatVersion)
    throw ConfigError("format_version must be " + std::to_string(kScenarioFormatVersion));
  Scenario s;
  s.source = j;
  s.name = detail::get_or<std::string>(j, "name", "");
  if (s.name.empty()) throw ConfigError("scenario needs a name");
  s.description = detail::get_or<std::string>(j, "description", "");
  if (!j.contains("pump") || !j["pump"].is_object()) throw ConfigError("scenario needs a pump object");
  detail::reject_unknown(j["pump"], {"alpha_p_squared"}, "pump");
  if (!j["pump"].contains("alpha_p_squared")) throw ConfigError("pump needs alpha_p_squared");
  s.alpha_p_squared = detail::number_list(j["pump"]["alpha_p_squared"], "alpha_p_squared");
  for (double a : s.alpha_p_squared)
    if (!(a > 0.0)) throw ConfigError("alpha_p_squared must be positive");
  if (!j.contains("times")) throw ConfigError("scenario needs times");
  s.times = detail::number_list(j["times"], "times");
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    if (s.times[i] < 0.0) throw ConfigError("times must be nonnegative");
    if (i > 0 && !(s.times[i] > s.times[i - 1])) throw ConfigError("times must be strictly increasing");
  }
  if (j.contains("cutoffs")) {
    const auto& c = j["cutoffs"];
    if (!c.is_object()) throw ConfigError("cutoffs must be an object");
    detail::reject_unknown(c, {"n_t_max", "tail_tolerance"}, "cutoffs");
    if (c.contains("n_t_max") && !c["n_t_max"].is_null()) {
      const int nt = detail::get_or(c, "n_t_max", 0);
      if (nt <= 0) throw ConfigError("n_t_max must be positive");
      s.n_t_max = nt;
    }
    s.tail_tolerance = detail::get_or(c, "tail_tolerance", s.tail_tolerance);
    if (!(s.tail_tolerance > 0.0) || s.tail_tolerance >= 1.0) throw ConfigError("tail_tolerance must be in (0, 1)");
  }
  s.convergence_check = detail::get_or(j, "convergence_check", true);
  if (!j.contains("tables") || !j["tables"].is_array() || j["tables"].empty())
    throw ConfigError("scenario needs a nonempty tables list");
  std::set<std::string> names;
  for (const auto& t : j["tables"]) {
    s.tables.push_back(detail::parse_table(t));
    if (!names.insert(s.tables.back().name).second)
      throw ConfigError("duplicate table name '" + s.tables.back().name + "'");
  }
  return s;
}

inline Scenario parse_scenario_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

// Built-in presets. Axis ranges and resolutions are our choices (the
// figures do not state them) and are echoed in every manifest.

namespace detail {

inline json range(double start, double stop, double step) { return {{"start", start}, {"stop", stop}, {"step", step}}; }

inline json cond(const char* mode, const char* quad, json outcomes) {
  return {{"mode", mode}, {"quadrature", quad}, {"outcomes", std::move(outcomes)}};
}

}  // namespace detail

inline std::map<std::string, json> preset_documents(bool heavy = false) {
  using detail::cond;
  using detail::range;
  std::map<std::string, json> p;
  const json base_pump = {{"alpha_p_squared", json::array({10})}};

  p["fig2"] = {
      {"format_version", 1},
      {"name", "fig2"},
      {"description", "Wigner functions of the conditional mode-a state, x_c = 0, x_b = 3..6, tau = 0.3"},
      {"pump", base_pump},
      {"times", json::array({0.3})},
      {"tables", json::array({{{"name", "wigner_a"},
                               {"condition", json::array({cond("b", "X", json::array({3, 4, 5, 6})),
                                                          cond("c", "X", json::array({0}))})},
                               {"observables", json::array({"wigner", "purity", "negativity"})},
                               {"options", {{"phase_radius", 9.0}, {"phase_step", 0.1}}}}})}};

  p["fig3a"] = {
      {"format_version", 1},
      {"name", "fig3a"},
      {"description", "Cat fidelity versus cat amplitude for x_b = 3..6, x_c = 0, tau = 0.3"},
      {"pump", base_pump},
      {"times", json::array({0.3})},
      {"tables", json::array({{{"name", "fidelity"},
                               {"condition", json::array({cond("b", "X", json::array({3, 4, 5, 6})),
                                                          cond("c", "X", json::array({0}))})},
                               {"observables", json::array({"cat_scan", "cat_optimum"})},
                               {"options", {{"alpha_range", json::array({0.01, 6.0})}, {"alpha_step", 0.02}}}}})}};

  p["fig3b"] = {
      {"format_version", 1},
      {"name", "fig3b"},
      {"description", "Negativity, macroscopicity and optimal cat fidelity versus x_b at x_c = 0, tau = 0.3"},
      {"pump", base_pump},
      {"times", json::array({0.3})},
      {"tables", json::array({{{"name", "versus_xb"},
                               {"condition", json::array({cond("b", "X", range(3.0, 6.0, 0.25)),
                                                          cond("c", "X", json::array({0}))})},
                               {"observables",
                                json::array({"negativity", "macroscopicity", "cat_optimum", "purity"})}}})}};

  p["fig4"] = {
      {"format_version", 1},
      {"name", "fig4"},
      {"description", "Optimal cat fidelity and negativity versus tau at x_b = 3, x_c = 0"},
      {"pump", base_pump},
      {"times", range(0.1, 1.0, 0.05)},
      {"tables", json::array({{{"name", "optimum"},
                               {"condition", json::array({cond("b", "X", json::array({3})),
                                                          cond("c", "X", json::array({0}))})},
                               {"observables", json::array({"cat_optimum", "negativity", "purity"})},
                               {"options", {{"alpha_range", json::array({0.01, 6.0})}}}}})}};

  p["fig5"] = {
      {"format_version", 1},
      {"name", "fig5"},
      {"description", "Bell and qudit fidelity, purity and two-mode negativity of rho_bc versus x_a at tau = 0.6"},
      {"pump", base_pump},
      {"times", json::array({0.6})},
      {"tables", json::array({{{"name", "versus_xa"},
                               {"condition", json::array({cond("a", "X", range(0.0, 2.5, 0.05))})},
                               {"observables", json::array({"bell_fidelity", "qudit_fidelity", "purity",
                                                            "dominant_amplitudes", "outcome_density",
                                                            "negativity"})}}})}};

  json fig6_pump = heavy ? json{{"alpha_p_squared", json::array({10, 50, 100, 200})}} : base_pump;
  p["fig6"] = {
      {"format_version", 1},
      {"name", "fig6"},
      {"description", "Steering S(a->bc), S(b->a) and purities versus tau"},
      {"pump", fig6_pump},
      {"times", range(0.05, 3.0, 0.05)},
      {"tables",
       json::array({{{"name", "steering"}, {"observables", json::array({"steering_a_bc", "steering_b_a", "purity"})}},
                    {{"name", "purity_ab"},
                     {"condition", json::array({cond("c", "X", json::array({0}))})},
                     {"observables", json::array({"purity"})}}})}};

  p["fig7"] = {
      {"format_version", 1},
      {"name", "fig7"},
      {"description", "Conditional higher-order squeezing V_bc (x_a = 0) and V_a2 (x_b = 3, x_c = 0)"},
      {"pump", base_pump},
      {"times", range(0.05, 3.0, 0.05)},
      {"tables", json::array({{{"name", "V_bc"},
                               {"condition", json::array({cond("a", "X", json::array({0}))})},
                               {"observables", json::array({"squeezing"})}},
                              {{"name", "V_a2"},
                               {"condition", json::array({cond("b", "X", json::array({3})),
                                                          cond("c", "X", json::array({0}))})},
                               {"observables", json::array({"squeezing"})}},
                              {{"name", "steering"}, {"observables", json::array({"steering_a_bc"})}}})}};
  return p;
}

inline std::vector<std::string> builtin_scenarios() {
  std::vector<std::string> names;
  for (const auto& [k, v] : preset_documents()) names.push_back(k);
  return names;
}

inline Scenario preset(const std::string& name, bool heavy = false) {
  const auto docs = preset_documents(heavy);
  const auto it = docs.find(name);
  if (it == docs.end()) throw ConfigError("unknown preset '" + name + "'");
  return parse_scenario(it->second);
}

}  // namespace ntpsd
