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

#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dcesim/fock/state.hpp"
#include "dcesim/lle/modulation.hpp"
#include "dcesim/lle/soliton.hpp"
#include "dcesim/mw/rwa.hpp"
#include "dcesim/pipeline/artifacts.hpp"
#include "dcesim/pipeline/config.hpp"
#include "dcesim/util/io.hpp"

namespace dcesim::pipeline {

enum class Stage { soliton, modulation, hamiltonian, evolution, analysis };

inline constexpr std::array<Stage, 5> kStages{Stage::soliton, Stage::modulation, Stage::hamiltonian,
                                               Stage::evolution, Stage::analysis};

const char* stage_name(Stage stage);
std::optional<Stage> parse_stage(const std::string& name);

struct InvariantResult {
  std::string stage;
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string relation;  ///< "<=", ">=", "<", ">"
};

/// Raised after a stage whose invariants fail, unless the override is set.
class InvariantFailure : public NumericalError {
 public:
  InvariantFailure(const std::string& what, std::vector<InvariantResult> failed)
      : NumericalError(what), failed_(std::move(failed)) {}
  const std::vector<InvariantResult>& failed() const { return failed_; }

 private:
  std::vector<InvariantResult> failed_;
};

/// Cache keys of every stage for a config: each key folds in all upstream inputs.
std::array<std::string, 5> stage_keys(const ExperimentConfig& config);

struct StageRecord {
  Stage stage;
  std::string key;
  fs::path dir;
  bool from_cache = false;
};

struct RunOptions {
  bool force = false;                          ///< recompute even when cached
  std::optional<Stage> last_stage;             ///< stop after this stage
  std::optional<bool> abort_on_invariant_failure;  ///< overrides the config
  bool write_outputs = true;                   ///< copy artifacts, export figures, write the manifest
  std::function<void(const std::string&)> log;
};

struct RunResult {
  std::vector<StageRecord> stages;
  std::vector<InvariantResult> invariants;
  fs::path output_dir;
  fs::path manifest;
  bool invariants_passed = true;
};

/// Runs the stages in order, serving each from the cache when its key matches.
RunResult run_pipeline(const ExperimentConfig& config, const RunOptions& options = {});

/// Runs (or loads) one stage; its upstream artifacts must already exist.
StageRecord run_stage(const ExperimentConfig& config, Stage stage, const RunOptions& options = {});

/// Computes one stage from an explicit upstream directory into `target`
/// (no cache involved), e.g. for externally produced input files.
std::vector<InvariantResult> build_stage(const ExperimentConfig& config, Stage stage, const fs::path& upstream,
                                         const fs::path& target);

/// Records of the stages already present in the cache for `config`.
std::vector<StageRecord> cached_stages(const ExperimentConfig& config);

/// Invariant results recorded by a committed stage.
std::vector<InvariantResult> load_invariants(const fs::path& stage_dir);

// Loaders for committed artifacts.
lle::SolitonField load_soliton(const fs::path& dir);
lle::ModulationProfile load_modulation(const fs::path& dir);
mw::RwaHamiltonian load_hamiltonian(const fs::path& dir);
std::vector<fock::QuantumState> load_closed_states(const fs::path& dir);
io::Table load_table(const fs::path& dir, const std::string& stem);
/// Density-matrix snapshots of the decaying run at the configured snapshot times within its window.
std::vector<fock::QuantumState> load_open_snapshots(const fs::path& dir);

/// Copies committed stage files under `<out>/<stage>/` and writes `<out>/manifest.json`
/// listing every file below `out` with its SHA-256. Returns the manifest path.
fs::path write_manifest(const ExperimentConfig& config, const std::vector<StageRecord>& stages,
                        const std::vector<InvariantResult>& invariants);

}  // namespace dcesim::pipeline
