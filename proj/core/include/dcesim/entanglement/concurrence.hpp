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

#include <optional>
#include <vector>

#include "dcesim/common.hpp"
#include "dcesim/fock/state.hpp"

namespace dcesim::entanglement {

/// Proper, nonempty subset of mode indices (sorted, unique).
struct Partition {
  std::vector<int> subset;

  void validate(int n_modes) const;
  /// All 2^N - 2 proper subsets, ordered by bit mask.
  static std::vector<Partition> all_proper(int n_modes);
};

/// Reduced density matrix on `keep` (in the order given), tracing out the rest.
ComplexMatrix partial_trace(const fock::QuantumState& state, const Partition& keep);

double purity(const ComplexMatrix& rho);

/// 2^(1 - N/2) sqrt((2^N - 2) - sum_S Tr rho_S^2) over the proper subsets of a
/// state on N modes. For a mixed state this is a purity-based indicator only.
double purity_concurrence(const fock::QuantumState& state);

/// Upper bound 2^(1 - N/2) sqrt(2^N - 2).
double concurrence_bound(int n_modes);

struct ConcurrenceReport {
  double full = 0.0;
  std::vector<double> reduced;  ///< index = traced-out mode; value of the remaining modes
  double time = 0.0;
};

/// Requires a normalized pure state.
ConcurrenceReport concurrence(const fock::QuantumState& state);

std::vector<ConcurrenceReport> concurrence_trace(const std::vector<fock::QuantumState>& states);

enum class OutcomeKind { fock, zero, nonzero };

struct Outcome {
  OutcomeKind kind = OutcomeKind::fock;
  int level = 0;  ///< used for OutcomeKind::fock

  static Outcome fock_level(int j) { return {OutcomeKind::fock, j}; }
};

inline constexpr double kImpossibleOutcome = 1e-12;

struct MeasurementOutcome {
  int mode = 0;
  Outcome outcome;
  double probability = 0.0;
  std::optional<fock::QuantumState> collapsed;  ///< empty when the outcome is impossible

  bool possible() const { return collapsed.has_value(); }
};

MeasurementOutcome project_mode(const fock::QuantumState& state, int mode, Outcome outcome,
                                double threshold = kImpossibleOutcome);

struct PersistencyCell {
  int mode = 0;
  int level = 0;
  double probability = 0.0;
  bool possible = false;
  double concurrence = 0.0;  ///< of the modes left untouched, 0 when impossible
};

struct PersistencyTable {
  std::vector<int> modes;
  int max_fock = 0;
  std::vector<PersistencyCell> cells;  ///< row-major: modes x (max_fock + 1)

  const PersistencyCell& at(std::size_t row, int level) const {
    return cells[row * static_cast<std::size_t>(max_fock + 1) + static_cast<std::size_t>(level)];
  }
};

PersistencyTable persistency_table(const fock::QuantumState& state, const std::vector<int>& modes, int max_fock);

}  // namespace dcesim::entanglement
