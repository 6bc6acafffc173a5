// Copyright 2026 The dcesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// dcesim: command-line driver for the staged simulation pipeline.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 numerical or
// invariant failure, 4 missing upstream artifact.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dcesim/pipeline/config.hpp"
#include "dcesim/pipeline/export.hpp"
#include "dcesim/pipeline/pipeline.hpp"
#include "dcesim/util/io.hpp"

namespace {

using namespace dcesim;
using namespace dcesim::pipeline;

enum Exit { ok = 0, config_error = 2, numeric_error = 3, dependency_error = 4 };

struct CommonFlags {
  std::string config;
  std::string out;
  std::string cache;
  std::string format;
  std::string input;
  bool force = false;
  bool check = false;
  bool allow_failures = false;
  bool quiet = false;
};

void add_common(CLI::App* app, CommonFlags& f, bool with_input) {
  app->add_option("--config", f.config, "JSON config file (defaults when omitted)")->check(CLI::ExistingFile);
  app->add_option("--out", f.out, "output directory");
  app->add_option("--stage-cache", f.cache, "stage artifact cache directory");
  app->add_option("--format", f.format, "table format")->check(CLI::IsMember({"csv", "json"}));
  app->add_flag("--force", f.force, "ignore cached artifacts and recompute");
  app->add_flag("--check", f.check, "run the invariant suite only and report it");
  app->add_flag("--allow-invariant-failures", f.allow_failures, "keep going when invariant checks fail");
  app->add_flag("-q,--quiet", f.quiet, "suppress progress messages");
  if (with_input)
    app->add_option("--input", f.input, "upstream artifact directory to use instead of the cache");
}

ExperimentConfig load(const CommonFlags& f) {
  const std::string raw = f.config.empty() ? std::string() : io::read_text(f.config);
  std::vector<std::pair<std::string, std::string>> overrides;
  if (!f.out.empty()) overrides.emplace_back("io.output_dir", f.out);
  if (!f.cache.empty()) overrides.emplace_back("io.cache_dir", f.cache);
  if (!f.format.empty()) overrides.emplace_back("io.table_format", f.format);
  return validate_config(with_overrides(raw, overrides));
}

RunOptions options_from(const CommonFlags& f) {
  RunOptions o;
  o.force = f.force;
  if (f.allow_failures) o.abort_on_invariant_failure = false;
  if (!f.quiet) o.log = [](const std::string& m) { std::cerr << "[dcesim] " << m << "\n"; };
  return o;
}

int report(const std::vector<InvariantResult>& results) {
  bool all = true;
  for (const auto& r : results) {
    std::printf("%-4s %-12s %-32s %.6g %s %.3g\n", r.passed ? "ok" : "FAIL", r.stage.c_str(), r.name.c_str(),
                r.value, r.relation.c_str(), r.threshold);
    all = all && r.passed;
  }
  return all ? ok : numeric_error;
}

void refresh_manifest(const ExperimentConfig& cfg) {
  std::vector<InvariantResult> invariants;
  const auto records = cached_stages(cfg);
  for (const auto& r : records)
    for (auto& i : load_invariants(r.dir)) invariants.push_back(std::move(i));
  write_manifest(cfg, records, invariants);
}

int run_single(const CommonFlags& f, Stage stage) {
  const ExperimentConfig cfg = load(f);
  if (!f.input.empty()) {
    // Explicit upstream files: compute straight into the output directory.
    const fs::path target = fs::path(cfg.io.output_dir) / stage_name(stage);
    const auto results = build_stage(cfg, stage, f.input, target);
    if (!f.quiet) std::cerr << "[dcesim] " << stage_name(stage) << ": wrote " << target.string() << "\n";
    const int code = report(results);
    return f.allow_failures ? ok : code;
  }
  RunOptions o = options_from(f);
  o.abort_on_invariant_failure = f.allow_failures ? false : !f.check && cfg.io.abort_on_invariant_failure;
  const StageRecord r = run_stage(cfg, stage, o);
  const auto results = load_invariants(r.dir);
  if (f.check) return report(results);
  refresh_manifest(cfg);
  if (!f.quiet) std::cerr << "[dcesim] " << stage_name(stage) << ": " << r.dir.string() << "\n";
  return ok;
}

int run_all(const CommonFlags& f) {
  const ExperimentConfig cfg = load(f);
  RunOptions o = options_from(f);
  if (f.check) {
    o.abort_on_invariant_failure = false;
    o.write_outputs = false;
    return report(run_pipeline(cfg, o).invariants);
  }
  const RunResult r = run_pipeline(cfg, o);
  if (!f.quiet) std::cerr << "[dcesim] manifest: " << r.manifest.string() << "\n";
  return r.invariants_passed || f.allow_failures ? ok : numeric_error;
}

int run_export(const CommonFlags& f, const std::vector<std::string>& which) {
  const ExperimentConfig cfg = load(f);
  std::vector<Figure> figures;
  for (const auto& w : which) {
    if (w == "all") {
      figures = {Figure::fig3, Figure::fig4, Figure::fig5, Figure::table1};
      break;
    }
    figures.push_back(parse_figure(w));
  }
  for (Figure fig : figures)
    for (const auto& file : export_figure(cfg, fig))
      if (!f.quiet) std::cerr << "[dcesim] " << figure_name(fig) << ": " << file << "\n";
  refresh_manifest(cfg);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dcesim: soliton-driven dynamical Casimir photon generation"};
  app.require_subcommand(1);
  CommonFlags flags;
  std::vector<std::string> figures{"all"};

  struct Verb {
    const char* name;
    const char* help;
    Stage stage;
  };
  const Verb verbs[] = {
      {"soliton", "find the steady counter-propagating soliton", Stage::soliton},
      {"modulate", "sample the microwave index modulation over one period", Stage::modulation},
      {"hamiltonian", "solve the instantaneous modes and assemble the effective Hamiltonian", Stage::hamiltonian},
      {"evolve", "evolve the microwave modes from vacuum (closed and damped)", Stage::evolution},
      {"analyze", "concurrence traces and persistency table", Stage::analysis},
  };
  std::vector<std::pair<CLI::App*, Stage>> stage_commands;
  for (const auto& v : verbs) {
    CLI::App* sub = app.add_subcommand(v.name, v.help);
    add_common(sub, flags, v.stage != Stage::soliton);
    stage_commands.emplace_back(sub, v.stage);
  }
  CLI::App* pipeline_cmd = app.add_subcommand("pipeline", "run every stage, export all figures, write the manifest");
  add_common(pipeline_cmd, flags, false);
  CLI::App* export_cmd = app.add_subcommand("export", "write plot-ready data for fig3, fig4, fig5, table1 or all");
  add_common(export_cmd, flags, false);
  export_cmd->add_option("figures", figures, "which data sets")->check(CLI::IsMember({"fig3", "fig4", "fig5", "table1", "all"}));
  CLI::App* keys_cmd = app.add_subcommand("keys", "list the accepted config keys");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  try {
    if (keys_cmd->parsed()) {
      for (const auto& k : known_keys()) std::cout << k << "\n";
      return ok;
    }
    if (pipeline_cmd->parsed()) return run_all(flags);
    if (export_cmd->parsed()) return run_export(flags, figures);
    for (const auto& [sub, stage] : stage_commands)
      if (sub->parsed()) return run_single(flags, stage);
  } catch (const ConfigError& e) {
    std::cerr << "dcesim: " << e.what() << "\n";
    return config_error;
  } catch (const DependencyError& e) {
    std::cerr << "dcesim: " << e.what() << "\n";
    return dependency_error;
  } catch (const InvalidArgument& e) {
    std::cerr << "dcesim: " << e.what() << "\n";
    return config_error;
  } catch (const std::exception& e) {
    std::cerr << "dcesim: " << e.what() << "\n";
    return numeric_error;
  }
  return ok;
}
