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
#include <vector>

#include "dcesim/common.hpp"
#include "dcesim/fock/space.hpp"

namespace dcesim::fock {

enum class StateKind { pure, density };

struct QuantumState {
  StateKind kind = StateKind::pure;
  FockSpace space;
  ComplexVector amplitudes;  ///< pure states
  ComplexMatrix rho;         ///< density states
  double frame_time = 0.0;   ///< s

  static QuantumState pure(const FockSpace& space, ComplexVector amplitudes, double t = 0.0);
  static QuantumState density(const FockSpace& space, ComplexMatrix rho, double t = 0.0);
  static QuantumState vacuum(const FockSpace& space);
  static QuantumState fock(const FockSpace& space, std::span<const int> occupations);

  bool is_pure() const { return kind == StateKind::pure; }
  /// |psi><psi| for pure states, rho otherwise.
  ComplexMatrix density_matrix() const;
  /// P(index) on the diagonal.
  RealVector populations() const;
  /// Throws InvalidArgument unless the kind-specific invariants hold:
  /// unit norm (1e-9), or Hermitian (1e-10), unit trace (1e-8), min eigenvalue >= -1e-8.
  void validate() const;
};

RealVector mean_photon_numbers(const QuantumState& state);

/// Probability of an odd total photon number.
double odd_parity_probability(const QuantumState& state);

/// Probability that each mode sits in its top retained level.
RealVector top_level_probabilities(const QuantumState& state);

struct TruncationCheck {
  RealVector top_level;
  double worst = 0.0;
  bool flagged = false;  ///< worst > threshold
};

TruncationCheck truncation_check(const QuantumState& state, double threshold = 1e-4);

/// Block of the density matrix with every occupation < display_levels,
/// not renormalized.
struct TomographyBlock {
  int display_levels = 0;
  std::vector<long> indices;                  ///< flat indices in the full space
  std::vector<std::vector<int>> occupations;  ///< labels of each retained row
  ComplexMatrix block;
  double probability_mass = 0.0;  ///< trace of the block
};

TomographyBlock tomography_subset(const QuantumState& state, int display_levels);

/// "n0n1n2" style label.
std::string occupation_label(std::span<const int> occupations);

/// (1/2) sum of |eigenvalues| of rho_a - rho_b.
double trace_distance(const QuantumState& a, const QuantumState& b);

}  // namespace dcesim::fock
