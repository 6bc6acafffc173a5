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

#include "dcesim/common.hpp"
#include "dcesim/fock/space.hpp"
#include "dcesim/fock/state.hpp"
#include "dcesim/mw/rwa.hpp"

namespace dcesim::fock {

/// H = i ( sum A_kl a_k^dag a_l + 1/2 sum B_kl a_k^dag a_l^dag - 1/2 sum B_kl^* a_k a_l ), hbar = 1.
SparseMatrix hamiltonian_sparse(const ComplexMatrix& A, const ComplexMatrix& B, const FockSpace& space);

/// Dense form of hamiltonian_sparse. Throws AssemblyError when
/// ||H - H^dag||_F / ||H||_F exceeds `tolerance`.
ComplexMatrix hamiltonian_matrix(const ComplexMatrix& A, const ComplexMatrix& B, const FockSpace& space,
                                 double tolerance = 1e-10);
ComplexMatrix hamiltonian_matrix(const mw::RwaHamiltonian& h, const FockSpace& space, double tolerance = 1e-10);

double relative_antihermiticity(const ComplexMatrix& H);

/// <H> = Tr(H rho), real part.
double energy_expectation(const ComplexMatrix& H, const QuantumState& state);

}  // namespace dcesim::fock
