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

// ntpsd: reproduce the figure data from scenario files or built-in presets.
//
//   ntpsd list
//   ntpsd show <preset> [--heavy]
//   ntpsd run <config.json> [--out DIR] [--heavy] [--no-convergence]
//   ntpsd preset <name> [--out DIR] [--heavy] [--no-convergence]
//
// Thread count comes from NTPSD_THREADS (default: hardware concurrency).
// Exit status: 0 ok, 2 parse, 3 evolve, 4 condition, 5 observe, 1 other.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "ntpsd/runner.hpp"
#include "ntpsd/scenario.hpp"

namespace {

int stage_exit_code(const std::string& stage) {
  if (stage == "parse") return 2;
  if (stage == "evolve") return 3;
  if (stage == "condition") return 4;
  if (stage == "observe") return 5;
  return 1;
}

ntpsd::Scenario load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ntpsd::StageError("parse", "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return ntpsd::parse_scenario_text(ss.str());
  } catch (const ntpsd::ConfigError& e) {
    throw ntpsd::StageError("parse", path + ": " + e.what());
  }
}

int execute(const ntpsd::Scenario& s, const std::string& out_dir, bool heavy, bool no_convergence) {
  ntpsd::RunOptions opt;
  opt.heavy = heavy;
  if (no_convergence) opt.convergence_check = false;
  if (s.heavy()) {
    const auto [gops, sec] = ntpsd::cost_estimate(s);
    std::fprintf(stderr, "ntpsd: heavy scenario '%s': about %.3g Gflop, roughly %.0f s on one core\n", s.name.c_str(),
                 gops, sec);
  }
  const auto result = ntpsd::run_scenario(s, opt);
  const std::string dir = out_dir.empty() ? "out/" + s.name : out_dir;
  const auto files = ntpsd::write_outputs(result, dir);
  std::printf("%s: %zu files in %s (%.1f s)\n", s.name.c_str(), files.size() + 1, dir.c_str(), result.wall_seconds);
  if (result.convergence.contains("max_shift"))
    std::printf("  convergence: max shift %.3g at n_t_max+2, doubled outcome grid, refined phase grid\n",
                result.convergence["max_shift"].get<double>());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triple-photon downconversion with a depletable pump: figure data pipeline"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List the built-in presets");

  std::string show_name;
  bool show_heavy = false;
  auto* show = app.add_subcommand("show", "Print a preset as a scenario file");
  show->add_option("name", show_name, "Preset name")->required();
  show->add_flag("--heavy", show_heavy, "Include the alpha_p^2 >= 50 variants");

  std::string config_path, run_out;
  bool run_heavy = false, run_noconv = false;
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("config", config_path, "Scenario JSON file")->required();
  run->add_option("--out", run_out, "Output directory (default out/<name>)");
  run->add_flag("--heavy", run_heavy, "Allow alpha_p^2 >= 50");
  run->add_flag("--no-convergence", run_noconv, "Skip the convergence rerun");

  std::string preset_name, preset_out;
  bool preset_heavy = false, preset_noconv = false;
  auto* pre = app.add_subcommand("preset", "Run a built-in preset");
  pre->add_option("name", preset_name, "Preset name")->required();
  pre->add_option("--out", preset_out, "Output directory (default out/<name>)");
  pre->add_flag("--heavy", preset_heavy, "Include the alpha_p^2 >= 50 variants");
  pre->add_flag("--no-convergence", preset_noconv, "Skip the convergence rerun");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (list->parsed()) {
      for (const auto& [name, doc] : ntpsd::preset_documents())
        std::printf("%-6s %s\n", name.c_str(), doc.value("description", "").c_str());
      return 0;
    }
    if (show->parsed()) {
      const auto docs = ntpsd::preset_documents(show_heavy);
      const auto it = docs.find(show_name);
      if (it == docs.end()) throw ntpsd::StageError("parse", "unknown preset '" + show_name + "'");
      std::printf("%s\n", it->second.dump(2).c_str());
      return 0;
    }
    if (run->parsed()) return execute(load_config(config_path), run_out, run_heavy, run_noconv);
    if (pre->parsed()) {
      ntpsd::Scenario s;
      try {
        s = ntpsd::preset(preset_name, preset_heavy);
      } catch (const ntpsd::ConfigError& e) {
        throw ntpsd::StageError("parse", e.what());
      }
      return execute(s, preset_out, preset_heavy, preset_noconv);
    }
  } catch (const ntpsd::StageError& e) {
    std::fprintf(stderr, "ntpsd: error [%s]: %s\n", e.stage().c_str(), e.what());
    return stage_exit_code(e.stage());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ntpsd: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
