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

#include "dcesim/fock/hamiltonian.hpp"

#include <sstream>
#include <vector>

namespace dcesim::fock {

SparseMatrix hamiltonian_sparse(const ComplexMatrix& A, const ComplexMatrix& B, const FockSpace& space) {
  const int n = space.n_modes;
  if (A.rows() != n || A.cols() != n || B.rows() != n || B.cols() != n)
    throw InvalidArgument("hamiltonian: coefficient matrices must be n_modes x n_modes");
  std::vector<LadderPair> ops;
  for (int k = 0; k < n; ++k) ops.push_back(ladder_operators(space, k));
  const Complex i(0.0, 1.0);
  SparseMatrix H(space.dim, space.dim);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      if (A(k, l) != Complex(0.0)) H += SparseMatrix((i * A(k, l)) * (ops[k].raise * ops[l].lower));
      if (B(k, l) != Complex(0.0)) {
        H += SparseMatrix((0.5 * i * B(k, l)) * (ops[k].raise * ops[l].raise));
        H += SparseMatrix((-0.5 * i * std::conj(B(k, l))) * (ops[k].lower * ops[l].lower));
      }
    }
  H.prune(Complex(0.0));
  return H;
}

double relative_antihermiticity(const ComplexMatrix& H) {
  const double scale = H.norm();
  if (scale == 0.0) return 0.0;
  return (H - H.adjoint()).norm() / scale;
}

ComplexMatrix hamiltonian_matrix(const ComplexMatrix& A, const ComplexMatrix& B, const FockSpace& space,
                                 double tolerance) {
  ComplexMatrix H = ComplexMatrix(hamiltonian_sparse(A, B, space));
  const double dev = relative_antihermiticity(H);
  if (dev > tolerance) {
    std::ostringstream msg;
    msg << "hamiltonian: relative anti-Hermitian part " << dev << " exceeds " << tolerance
        << "; the beam-splitter matrix must be anti-Hermitian";
    throw AssemblyError(msg.str());
  }
  return H;
}

ComplexMatrix hamiltonian_matrix(const mw::RwaHamiltonian& h, const FockSpace& space, double tolerance) {
  if (h.n_modes() != space.n_modes) throw InvalidArgument("hamiltonian: mode count differs from the Fock space");
  return hamiltonian_matrix(h.beamsplitter, h.pair, space, tolerance);
}

double energy_expectation(const ComplexMatrix& H, const QuantumState& state) {
  if (state.is_pure()) return state.amplitudes.dot(H * state.amplitudes).real();
  return (H * state.rho).trace().real();
}

}  // namespace dcesim::fock
