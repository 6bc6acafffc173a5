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

#include <string>
#include <utility>
#include <vector>

#include "dcesim/common.hpp"
#include "dcesim/lle/modulation.hpp"
#include "dcesim/lle/soliton.hpp"
#include "dcesim/mw/modes.hpp"
#include "dcesim/util/io.hpp"

namespace dcesim::pipeline {

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

struct SolitonConfig {
  lle::LleParams lle;  ///< dispersion filled from dispersion_d2_mhz
  double dispersion_d2_mhz = 1.5246;
  lle::SteadyStateOptions steady;
};

struct DeviceConfig {
  lle::PhysicalParams physical;  ///< mask expanded on the soliton grid
  double mask_start_deg = 0.0;
  double mask_end_deg = 360.0;
};

struct MwConfig {
  int n_modes = 3;
  int time_samples = 256;
  double effective_index = 2.1;  ///< n_mw; defaults to the optical group index
  mw::ModeSolverOptions solver;
  mw::DoubletPolicy doublet_policy = mw::DoubletPolicy::strongest_drive;
};

struct QuantumConfig {
  int levels = 9;
  long capacity_dim = 4096;
  double decay_rate_per_s = 1e5;
  double closed_window_s = 5e-6;
  int closed_samples = 501;
  double open_window_s = 3e-6;
  int open_samples = 301;
  double rtol = 1e-8;
  double atol = 1e-10;
  double truncation_threshold = 1e-4;

  RealVector closed_times() const;
  RealVector open_times() const;
};

struct AnalysisConfig {
  std::vector<double> snapshot_times_s{2.5e-6, 5e-6};
  int display_levels = 4;
  std::vector<int> measured_modes{0, 1, 2};
  int max_fock = 8;
};

struct IoConfig {
  std::string output_dir = "dcesim-out";
  std::string cache_dir = ".dcesim-cache";
  io::TableFormat table_format = io::TableFormat::csv;
  io::MatrixEncoding matrix_encoding = io::MatrixEncoding::binary;
  bool use_cache = true;
  bool abort_on_invariant_failure = true;
};

struct ExperimentConfig {
  SolitonConfig soliton;
  DeviceConfig device;
  MwConfig mw;
  QuantumConfig quantum;
  AnalysisConfig analysis;
  IoConfig io;
  std::string canonical;  ///< normalized document, keys sorted, defaults filled in
  std::string hash;       ///< SHA-256 of `canonical`
};

/// Parses the JSON config text (empty text means all defaults). Unknown keys,
/// type mismatches and range violations are all collected and reported
/// together in one ConfigError.
ExperimentConfig validate_config(const std::string& raw_text);
ExperimentConfig default_config();

/// Sets "section.key" string values in the raw document before validation
/// (command-line overrides). Malformed input is returned unchanged so that
/// validate_config reports it.
std::string with_overrides(const std::string& raw_text,
                           const std::vector<std::pair<std::string, std::string>>& overrides);
ExperimentConfig load_config(const std::string& path);

/// Stage-relevant slice of the canonical config (sorted JSON text).
std::string stage_inputs(const ExperimentConfig& config, const std::string& stage);

/// Documented keys, "section.key", for help output.
std::vector<std::string> known_keys();

/// Classic edit distance, used for key suggestions.
std::size_t levenshtein(const std::string& a, const std::string& b);

}  // namespace dcesim::pipeline
