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

#include <vector>

#include "dcesim/common.hpp"
#include "dcesim/fock/space.hpp"
#include "dcesim/fock/state.hpp"

namespace dcesim::fock {

/// exp(-i H t) through one eigendecomposition of the Hermitian H.
class PureEvolver {
 public:
  explicit PureEvolver(const ComplexMatrix& H);
  ComplexVector apply(const ComplexVector& psi0, double t) const;

 private:
  RealVector energies_;
  ComplexMatrix vectors_;
};

std::vector<QuantumState> evolve_pure(const ComplexMatrix& H, const QuantumState& psi0, const RealVector& times);

struct CollapseChannel {
  int mode = 0;
  double rate = 0.0;  ///< gamma, s^-1
};

struct LindbladOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double initial_step = 0.0;       ///< s; 0 picks one from the first derivative
  double min_step_ratio = 1e-13;   ///< steps below this fraction of the window are stiffness
  long max_steps = 2'000'000;
};

struct LindbladStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
};

/// Integrates d rho/dt = -i[H, rho] + sum_n (C rho C^dag - 1/2 {C^dag C, rho}), C = sqrt(gamma) a_n,
/// with an adaptive Dormand-Prince 5(4) scheme and continuous output at the requested times.
/// Throws StiffnessError when the step collapses.
std::vector<QuantumState> evolve_lindblad(const ComplexMatrix& H, const std::vector<CollapseChannel>& channels,
                                          const QuantumState& rho0, const RealVector& times,
                                          const LindbladOptions& options = {}, LindbladStats* stats = nullptr);

}  // namespace dcesim::fock
