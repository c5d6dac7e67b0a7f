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

// Scenario execution. run_scenario evolves every pump amplitude, walks the
// tables over times x outcome combinations and evaluates the observables.
// With convergence checking on, the whole scenario is repeated with two
// more triplet levels (the pump cutoff grows with it if needed), doubled
// outcome-grid density and a refined phase-space grid, and the per-column
// maximum shifts are reported.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ntpsd/conditioning.hpp"
#include "ntpsd/dynamics.hpp"
#include "ntpsd/error.hpp"
#include "ntpsd/fidelity.hpp"
#include "ntpsd/fock.hpp"
#include "ntpsd/moments.hpp"
#include "ntpsd/parallel.hpp"
#include "ntpsd/scenario.hpp"
#include "ntpsd/steering.hpp"
#include "ntpsd/wigner.hpp"

namespace ntpsd {

/// Error tagged with the pipeline stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what) : Error(what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct RunOptions {
  bool heavy = false;
  std::optional<bool> convergence_check;  ///< overrides the scenario when set
};

/// Resolution knobs; the convergence rerun raises all three.
struct Resolution {
  int n_t_shift = 0;
  int grid_factor = 1;
  bool refine_phase = false;
};

/// Row-major table of doubles with named columns.
struct DataTable {
  std::string name;
  std::vector<std::string> meta;
  std::vector<std::string> columns;
  std::vector<double> data;

  std::size_t rows() const { return columns.empty() ? 0 : data.size() / columns.size(); }
  double at(std::size_t r, std::size_t c) const { return data[r * columns.size() + c]; }
  int column_index(const std::string& c) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == c) return static_cast<int>(i);
    return -1;
  }
  std::vector<double> column(const std::string& c) const {
    const int k = column_index(c);
    if (k < 0) throw InvalidArgument("table " + name + " has no column " + c);
    std::vector<double> out;
    for (std::size_t r = 0; r < rows(); ++r) out.push_back(at(r, static_cast<std::size_t>(k)));
    return out;
  }
};

struct PumpRun {
  double alpha_p_squared = 0.0;
  SimParams params;
  std::vector<CorrelatedFockDensity> rho_abc;  ///< one per scenario time
};

struct RunResult {
  Scenario scenario;
  std::vector<PumpRun> pumps;
  std::vector<DataTable> tables;  ///< scalar tables
  std::vector<DataTable> fields;  ///< wigner grids and cat scans
  json grids = json::object();
  json convergence = json::object();
  double wall_seconds = 0.0;

  const DataTable& table(const std::string& name) const {
    for (const auto& t : tables)
      if (t.name == name) return t;
    throw InvalidArgument("no table named " + name);
  }
};

namespace detail {

inline FockCutoffs resolved_cutoffs(const Scenario& s, double alpha_sq, int shift) {
  const auto base = FockCutoffs::for_pump(cplx{std::sqrt(alpha_sq), 0.0}, s.n_t_max, s.tail_tolerance);
  const int nt = base.n_t_max + shift;
  return FockCutoffs::make(nt, std::max(base.n_p_max, nt));
}

inline PumpRun run_pump(const Scenario& s, double alpha_sq, int shift) {
  PumpRun run;
  run.alpha_p_squared = alpha_sq;
  run.params.alpha_p = cplx{std::sqrt(alpha_sq), 0.0};
  run.params.cutoffs = resolved_cutoffs(s, alpha_sq, shift);
  run.params.times = s.times;
  run.params.tail_tolerance = s.tail_tolerance;
  try {
    for (const auto& st : evolve(run.params)) run.rho_abc.push_back(reduce_to_triplets(st));
  } catch (const Error& e) {
    throw StageError("evolve", "alpha_p^2=" + std::to_string(alpha_sq) + ": " + e.what());
  }
  return run;
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Cartesian product of the condition outcome lists, first list outermost.
inline std::vector<std::vector<HomodyneSetting>> outcome_combinations(const TableSpec& t) {
  std::vector<std::vector<HomodyneSetting>> combos{{}};
  for (const auto& c : t.condition) {
    std::vector<std::vector<HomodyneSetting>> next;
    for (const auto& prefix : combos)
      for (double r : c.outcomes) {
        auto v = prefix;
        v.push_back({c.mode, c.quadrature, r});
        next.push_back(std::move(v));
      }
    combos = std::move(next);
  }
  return combos;
}

inline std::vector<std::string> observable_columns(const std::string& id, const std::string& modes) {
  if (id == "purity") return {"P_" + modes};
  if (id == "mean_triplets") return {"n_mean"};
  if (id == "outcome_density") return {"P_outcome"};
  if (id == "negativity") return {"N_" + modes};
  if (id == "macroscopicity") return {"M_" + modes};
  if (id == "cat_optimum") return {"F_max", "alpha_star"};
  if (id == "cat_fidelity") return {"F_cat"};
  if (id == "bell_fidelity") return {"F_bell"};
  if (id == "qudit_fidelity") return {"F_qudit"};
  if (id == "dominant_amplitudes") return {"lambda_max", "amp0", "amp1", "amp2"};
  if (id == "squeezing") return {modes.size() == 1 ? "V_" + modes + "2" : "V_" + modes};
  if (id == "steering_a_bc") return {"S_a_bc", "VX_a_bc", "VY_a_bc", "C_a_bc", "Cu_a_bc"};
  if (id == "steering_b_a") return {"S_b_a", "VX_b_a", "VY_b_a", "C_b_a", "Cu_b_a"};
  return {};
}

inline std::string remaining_modes(const TableSpec& t) {
  std::string out;
  for (char m : std::string("abc")) {
    bool measured = false;
    for (const auto& c : t.condition) measured = measured || mode_char(c.mode) == m;
    if (!measured) out += m;
  }
  return out;
}

/// Phase-space axes for the single-mode Wigner function of `rho`.
inline std::vector<double> phase_axis(const TableOptions& o, int dim, const Resolution& res) {
  const double step = res.refine_phase ? 0.5 * o.phase_step : o.phase_step;
  const double radius = o.phase_radius.value_or(std::ceil((std::sqrt(2.0 * dim) + 3.0) / o.phase_step) * o.phase_step);
  const int half = static_cast<int>(std::llround(radius / step));
  return uniform_axis(-half * step, half * step, 2 * half + 1);
}

/// Population threshold used before building two-mode field grids.
inline constexpr double kTwoModeTrim = 1e-12;

struct TableContext {
  const Scenario& scenario;
  const TableSpec& spec;
  const Resolution& res;
  json& grids;
  std::vector<DataTable>& fields;
};

inline std::string setting_tag(const std::vector<HomodyneSetting>& settings) {
  std::string tag;
  for (const auto& s : settings) {
    if (!tag.empty()) tag += ", ";
    tag += std::string(s.quadrature == Quadrature::X ? "x_" : "y_") + mode_char(s.mode) + "=" + fmt(s.outcome);
  }
  return tag;
}

inline void eval_state(TableContext& ctx, const PumpRun& pump, double tau, const std::vector<HomodyneSetting>& settings,
                       const CorrelatedFockDensity& state, double density, std::vector<double>& row) {
  const auto& o = ctx.spec.options;
  const int m = state.m();
  std::optional<WignerGrid> w1;
  auto single_grid = [&]() -> const WignerGrid& {
    if (!w1) {
      const auto t = state.trimmed();
      const auto axis = phase_axis(o, t.dim(), ctx.res);
      w1 = wigner(t, axis, axis);
      ctx.grids[ctx.spec.name]["phase_axis"] = {
          {"lo", axis.front()}, {"hi", axis.back()}, {"points", axis.size()}, {"step", w1->dx}};
    }
    return *w1;
  };
  for (const auto& id : ctx.spec.observables) {
    if (id == "purity") {
      row.push_back(purity(state));
    } else if (id == "mean_triplets") {
      double n = 0.0;
      for (int k = 0; k < state.dim(); ++k) n += k * state(k, k).real();
      row.push_back(n);
    } else if (id == "outcome_density") {
      row.push_back(density);
    } else if (id == "negativity") {
      if (m == 1) {
        row.push_back(negativity(single_grid()));
      } else {
        const auto t = state.trimmed();
        PolarGridSpec spec;
        spec.radial_points = std::max(160, 4 * t.dim()) * (ctx.res.refine_phase ? 2 : 1);
        spec.angle_points = std::max(96, 3 * t.dim()) * (ctx.res.refine_phase ? 2 : 1);
        const auto r = two_mode_negativity_polar(t, spec);
        if (std::abs(r.integral - 1.0) > 1e-2)
          throw GridError("two-mode Wigner integral is " + fmt(r.integral));
        ctx.grids[ctx.spec.name]["two_mode_negativity"] = {
            {"method", "angular reduction, midpoint radii on [0, sqrt(2 dim)+4]"},
            {"radial_points", spec.radial_points},
            {"angle_points", spec.angle_points}};
        row.push_back(r.negativity);
      }
    } else if (id == "macroscopicity") {
      const auto est = macroscopicity_estimate(single_grid());
      auto& slot = ctx.grids[ctx.spec.name]["macroscopicity_fd_error_max"];
      slot = std::max(slot.is_number() ? slot.get<double>() : 0.0, est.error);
      row.push_back(est.value);
    } else if (id == "cat_optimum") {
      const auto best = optimal_cat_fidelity(state, o.alpha_lo, o.alpha_hi, o.alpha_tol);
      row.push_back(best.fidelity);
      row.push_back(best.alpha);
    } else if (id == "cat_fidelity") {
      row.push_back(cat_fidelity(state, *o.cat_alpha));
    } else if (id == "bell_fidelity") {
      row.push_back(fidelity(state, bell_target()));
    } else if (id == "qudit_fidelity") {
      row.push_back(fidelity(state, qudit_target()));
    } else if (id == "dominant_amplitudes") {
      const auto e = dominant_eigenvector(state);
      row.push_back(e.eigenvalue);
      for (int k = 0; k < 3; ++k) row.push_back(k < e.vector.dim() ? std::abs(e.vector.amps[k]) : 0.0);
    } else if (id == "squeezing") {
      row.push_back(normalized_variance(state, m == 2 ? QuadratureKind::bc_pair : QuadratureKind::a_squared));
    } else if (id == "steering_a_bc" || id == "steering_b_a") {
      const auto grid = OutcomeGrid::default_for(state.dim(), ctx.res.grid_factor);
      const auto rep = id == "steering_a_bc"
                           ? steer_a_to_bc(state, grid)
                           : steer_b_to_a(state, grid, o.b_to_a_outcome,
                                          o.b_to_a_variant == "y_c" ? BToAVariant::y_c : BToAVariant::x_c);
      ctx.grids[ctx.spec.name]["outcome_grid"] = grid.describe();
      row.insert(row.end(), {rep.S, rep.var_X_inferred, rep.var_Y_inferred, rep.commutator_expectation,
                             rep.commutator_unconditional});
    } else if (id == "wigner") {
      DataTable f;
      f.name = ctx.spec.name + "_wigner_" + std::to_string(ctx.fields.size());
      f.meta = {"alpha_p_squared=" + fmt(pump.alpha_p_squared), "tau=" + fmt(tau), "condition: " + setting_tag(settings),
                "convention: " + WignerGrid{}.convention};
      if (m == 1) {
        const auto& g = single_grid();
        const std::string mode(1, mode_char(state.modes()[0]));
        f.columns = {"x_" + mode, "p_" + mode, "W"};
        for (std::size_t i = 0; i < g.x_axis.size(); ++i)
          for (std::size_t j = 0; j < g.p_axis.size(); ++j)
            f.data.insert(f.data.end(), {g.x_axis[i], g.p_axis[j], g.values(static_cast<Eigen::Index>(i),
                                                                              static_cast<Eigen::Index>(j))});
      } else {
        const auto t = state.trimmed(kTwoModeTrim);
        const auto axes = default_two_mode_axes(t.dim(), o.two_mode_points);
        const auto g = wigner_two_mode(t, axes, axes);
        const std::string b(1, mode_char(state.modes()[0]));
        const std::string c(1, mode_char(state.modes()[1]));
        f.columns = {"x_" + b, "p_" + b, "x_" + c, "p_" + c, "W"};
        const std::size_t n = axes.x.size();
        f.data.reserve(n * n * n * n * 5);
        std::size_t k = 0;
        for (double xb : axes.x)
          for (double pb : axes.p)
            for (double xc : axes.x)
              for (double pc : axes.p) f.data.insert(f.data.end(), {xb, pb, xc, pc, g.values[k++]});
      }
      ctx.fields.push_back(std::move(f));
    } else if (id == "cat_scan") {
      const std::string name = ctx.spec.name + "_cat_scan";
      DataTable* f = nullptr;
      for (auto& x : ctx.fields)
        if (x.name == name) f = &x;
      if (!f) {
        DataTable t;
        t.name = name;
        t.meta = {"fidelity against the even cat of real amplitude alpha, on multiples of alpha_step"};
        t.columns = {"alpha_p_sq", "tau"};
        for (const auto& c : ctx.spec.condition) t.columns.push_back(c.column());
        t.columns.insert(t.columns.end(), {"alpha", "fidelity"});
        ctx.fields.push_back(std::move(t));
        f = &ctx.fields.back();
      }
      const long i0 = static_cast<long>(std::ceil(o.alpha_lo / o.alpha_step - 1e-9));
      const long i1 = static_cast<long>(std::floor(o.alpha_hi / o.alpha_step + 1e-9));
      for (long i = i0; i <= i1; ++i) {
        const double alpha = std::stod(fmt(static_cast<double>(i) * o.alpha_step));
        f->data.push_back(pump.alpha_p_squared);
        f->data.push_back(tau);
        for (const auto& s : settings) f->data.push_back(s.outcome);
        f->data.push_back(alpha);
        f->data.push_back(cat_fidelity(state, alpha));
      }
    }
  }
}

inline DataTable evaluate_table(const Scenario& s, const TableSpec& spec, const std::vector<PumpRun>& pumps,
                                const Resolution& res, json& grids, std::vector<DataTable>& fields) {
  DataTable table;
  table.name = spec.name;
  table.columns = {"alpha_p_sq", "tau"};
  for (const auto& c : spec.condition) table.columns.push_back(c.column());
  const std::string modes = remaining_modes(spec);
  bool has_scalars = false;
  for (const auto& id : spec.observables)
    for (auto& c : observable_columns(id, modes)) {
      table.columns.push_back(c);
      has_scalars = true;
    }
  if (!has_scalars) table.columns.clear();
  table.meta = {"table: " + spec.name, "remaining modes: " + modes};
  TableContext ctx{s, spec, res, grids, fields};
  const auto combos = outcome_combinations(spec);
  for (const auto& pump : pumps)
    for (std::size_t ti = 0; ti < s.times.size(); ++ti)
      for (const auto& settings : combos) {
        const auto& rho = pump.rho_abc[ti];
        std::optional<CorrelatedFockDensity> state;
        double density = 0.0;
        try {
          if (settings.empty()) {
            state = rho;
          } else {
            auto cs = condition(rho, std::span<const HomodyneSetting>(settings));
            state = std::move(cs.state);
            density = cs.probability_density;
          }
        } catch (const Error& e) {
          throw StageError("condition", "table " + spec.name + ", tau=" + fmt(s.times[ti]) + ", " +
                                            setting_tag(settings) + ": " + e.what());
        }
        std::vector<double> row = {pump.alpha_p_squared, s.times[ti]};
        for (const auto& st : settings) row.push_back(st.outcome);
        try {
          eval_state(ctx, pump, s.times[ti], settings, *state, density, row);
        } catch (const Error& e) {
          throw StageError("observe", "table " + spec.name + ", tau=" + fmt(s.times[ti]) + ", " +
                                          setting_tag(settings) + ": " + e.what());
        }
        for (double v : row)
          if (!std::isfinite(v)) throw StageError("observe", "table " + spec.name + " produced a non-finite value");
        if (has_scalars) table.data.insert(table.data.end(), row.begin(), row.end());
      }
  return table;
}

struct Evaluation {
  std::vector<PumpRun> pumps;
  std::vector<DataTable> tables;
  std::vector<DataTable> fields;
  json grids = json::object();
};

inline Evaluation evaluate(const Scenario& s, const Resolution& res) {
  Evaluation ev;
  for (double a : s.alpha_p_squared) ev.pumps.push_back(run_pump(s, a, res.n_t_shift));
  for (const auto& spec : s.tables) {
    ev.tables.push_back(evaluate_table(s, spec, ev.pumps, res, ev.grids, ev.fields));
  }
  for (const auto& pump : ev.pumps) {
    json c = {{"alpha_p_squared", pump.alpha_p_squared},
              {"n_t_max", pump.params.cutoffs.n_t_max},
              {"n_p_max", pump.params.cutoffs.n_p_max},
              {"tail_mass", poisson_tail(pump.alpha_p_squared, pump.params.cutoffs.n_p_max)}};
    ev.grids["cutoffs"].push_back(c);
  }
  return ev;
}

/// Largest absolute difference per non-key column between two same-shape tables.
inline json column_shifts(const DataTable& a, const DataTable& b, std::size_t keys, double& worst) {
  json out = json::object();
  if (a.columns != b.columns || a.rows() != b.rows()) return json("shape mismatch");
  for (std::size_t c = keys; c < a.columns.size(); ++c) {
    double m = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) m = std::max(m, std::abs(a.at(r, c) - b.at(r, c)));
    out[a.columns[c]] = m;
    worst = std::max(worst, m);
  }
  return out;
}

}  // namespace detail

/// Rough operation count (in units of 1e9 flops) and wall-time guess.
inline std::pair<double, double> cost_estimate(const Scenario& s) {
  double ops = 0.0;
  for (double a : s.alpha_p_squared) {
    const auto c = detail::resolved_cutoffs(s, a, 0);
    const double d = c.n_t_max + 1.0;
    ops += (c.n_p_max + 1.0) * d * d * d * 10.0;
    for (const auto& t : s.tables) {
      double combos = 1.0;
      for (const auto& cond : t.condition) combos *= static_cast<double>(cond.outcomes.size());
      double per = d * d * 20.0;
      for (const auto& id : t.observables)
        if (id.rfind("steering", 0) == 0) per += 3.0 * std::max(161.0, 2.0 * d + 41.0) * d * d * 8.0;
      ops += static_cast<double>(s.times.size()) * combos * per;
    }
  }
  if (s.convergence_check) ops *= 3.5;
  return {ops / 1e9, ops / 4e8};
}

inline RunResult run_scenario(const Scenario& s, const RunOptions& opt = {}) {
  if (s.heavy() && !opt.heavy) {
    const auto [gops, sec] = cost_estimate(s);
    throw StageError("parse", "scenario '" + s.name + "' includes alpha_p^2 >= 50 (about " + detail::fmt(gops) +
                                  " Gflop, roughly " + detail::fmt(std::ceil(sec)) +
                                  " s on one core); pass --heavy to run it");
  }
  const auto t0 = std::chrono::steady_clock::now();
  RunResult r;
  r.scenario = s;
  auto base = detail::evaluate(s, Resolution{});
  r.pumps = std::move(base.pumps);
  r.tables = std::move(base.tables);
  r.fields = std::move(base.fields);
  r.grids = std::move(base.grids);
  const bool check = opt.convergence_check.value_or(s.convergence_check);
  if (check) {
    const Resolution fine{2, 2, true};
    auto ref = detail::evaluate(s, fine);
    json conv = {{"n_t_shift", fine.n_t_shift}, {"outcome_grid_factor", fine.grid_factor},
                 {"phase_step_factor", 0.5}, {"two_mode_resolution_factor", 2}, {"cutoffs", ref.grids["cutoffs"]}};
    double worst = 0.0;
    for (std::size_t i = 0; i < r.tables.size(); ++i) {
      if (r.tables[i].columns.empty()) continue;
      const std::size_t keys = 2 + s.tables[i].condition.size();
      conv["tables"][r.tables[i].name] = detail::column_shifts(r.tables[i], ref.tables[i], keys, worst);
    }
    for (std::size_t i = 0; i < r.fields.size() && i < ref.fields.size(); ++i) {
      const auto& f = r.fields[i];
      if (f.name.find("_cat_scan") == std::string::npos) continue;
      conv["tables"][f.name] = detail::column_shifts(f, ref.fields[i], f.columns.size() - 1, worst);
    }
    conv["max_shift"] = worst;
    r.convergence = std::move(conv);
  } else {
    r.convergence = {{"skipped", true}};
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline void write_csv(const std::filesystem::path& path, const std::string& scenario, const DataTable& t) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "# ntpsd scenario " << scenario << "\n";
  for (const auto& m : t.meta) out << "# " << m << "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
  out << "\n";
  const std::size_t nc = t.columns.size();
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < nc; ++c) out << (c ? "," : "") << detail::fmt(t.data[r * nc + c]);
    out << "\n";
  }
  if (!out) throw Error("failed writing " + path.string());
}

/// Writes every table and field as CSV plus manifest.json; returns the file names.
inline std::vector<std::string> write_outputs(const RunResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  for (const auto& t : r.tables) {
    if (t.columns.empty()) continue;
    write_csv(dir / (t.name + ".csv"), r.scenario.name, t);
    files.push_back(t.name + ".csv");
  }
  for (const auto& f : r.fields) {
    write_csv(dir / (f.name + ".csv"), r.scenario.name, f);
    files.push_back(f.name + ".csv");
  }
  json manifest = {{"tool", "ntpsd"},
                   {"config_format", "ntpsd scenario JSON"},
                   {"format_version", kScenarioFormatVersion},
                   {"scenario", r.scenario.source},
                   {"grids", r.grids},
                   {"convergence", r.convergence},
                   {"outputs", files},
                   {"threads", thread_count()},
                   {"wall_seconds", r.wall_seconds}};
  std::ofstream out(dir / "manifest.json");
  out << manifest.dump(2) << "\n";
  if (!out) throw Error("failed writing manifest.json");
  return files;
}

}  // namespace ntpsd
