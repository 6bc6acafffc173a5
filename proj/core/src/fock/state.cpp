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

#include "dcesim/fock/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace dcesim::fock {

QuantumState QuantumState::pure(const FockSpace& space, ComplexVector amplitudes, double t) {
  if (amplitudes.size() != space.dim) throw InvalidArgument("state: amplitude vector does not match the space");
  QuantumState s;
  s.kind = StateKind::pure;
  s.space = space;
  s.amplitudes = std::move(amplitudes);
  s.frame_time = t;
  return s;
}

QuantumState QuantumState::density(const FockSpace& space, ComplexMatrix rho, double t) {
  if (rho.rows() != space.dim || rho.cols() != space.dim)
    throw InvalidArgument("state: density matrix does not match the space");
  QuantumState s;
  s.kind = StateKind::density;
  s.space = space;
  s.rho = std::move(rho);
  s.frame_time = t;
  return s;
}

QuantumState QuantumState::vacuum(const FockSpace& space) {
  ComplexVector psi = ComplexVector::Zero(space.dim);
  psi[0] = 1.0;
  return pure(space, std::move(psi));
}

QuantumState QuantumState::fock(const FockSpace& space, std::span<const int> occupations) {
  ComplexVector psi = ComplexVector::Zero(space.dim);
  psi[space.index(occupations)] = 1.0;
  return pure(space, std::move(psi));
}

ComplexMatrix QuantumState::density_matrix() const {
  if (is_pure()) return amplitudes * amplitudes.adjoint();
  return rho;
}

RealVector QuantumState::populations() const {
  if (is_pure()) return amplitudes.cwiseAbs2();
  return rho.diagonal().real();
}

void QuantumState::validate() const {
  std::ostringstream msg;
  if (is_pure()) {
    const double err = std::abs(amplitudes.norm() - 1.0);
    if (err > 1e-9) msg << "pure state norm deviates from 1 by " << err;
  } else {
    const double scale = std::max(rho.norm(), 1e-300);
    const double herm = (rho - rho.adjoint()).norm() / scale;
    const double trace_err = std::abs(rho.trace() - Complex(1.0, 0.0));
    if (herm > 1e-10) msg << "density matrix not Hermitian (" << herm << "); ";
    if (trace_err > 1e-8) msg << "trace deviates from 1 by " << trace_err << "; ";
    if (herm <= 1e-10) {
      const ComplexMatrix sym = 0.5 * (rho + rho.adjoint());
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(sym, Eigen::EigenvaluesOnly);
      if (eig.eigenvalues().minCoeff() < -1e-8) msg << "negative eigenvalue " << eig.eigenvalues().minCoeff();
    }
  }
  if (!msg.str().empty()) throw InvalidArgument("invalid quantum state: " + msg.str());
}

RealVector mean_photon_numbers(const QuantumState& state) {
  const RealVector p = state.populations();
  RealVector out(state.space.n_modes);
  for (int k = 0; k < state.space.n_modes; ++k) out[k] = number_diagonal(state.space, k).dot(p);
  return out;
}

double odd_parity_probability(const QuantumState& state) {
  const RealVector p = state.populations();
  return 0.5 * (p.sum() - parity_diagonal(state.space).dot(p));
}

RealVector top_level_probabilities(const QuantumState& state) {
  const RealVector p = state.populations();
  RealVector out = RealVector::Zero(state.space.n_modes);
  for (long idx = 0; idx < state.space.dim; ++idx)
    for (int k = 0; k < state.space.n_modes; ++k)
      if (state.space.occupation(idx, k) == state.space.levels - 1) out[k] += p[idx];
  return out;
}

TruncationCheck truncation_check(const QuantumState& state, double threshold) {
  TruncationCheck check;
  check.top_level = top_level_probabilities(state);
  check.worst = check.top_level.size() ? check.top_level.maxCoeff() : 0.0;
  check.flagged = check.worst > threshold;
  return check;
}

TomographyBlock tomography_subset(const QuantumState& state, int display_levels) {
  if (display_levels < 1 || display_levels > state.space.levels)
    throw InvalidArgument("tomography: display_levels must lie in [1, levels]");
  TomographyBlock out;
  out.display_levels = display_levels;
  for (long idx = 0; idx < state.space.dim; ++idx) {
    auto occ = state.space.occupations(idx);
    if (std::all_of(occ.begin(), occ.end(), [&](int n) { return n < display_levels; })) {
      out.indices.push_back(idx);
      out.occupations.push_back(std::move(occ));
    }
  }
  const auto m = static_cast<Eigen::Index>(out.indices.size());
  out.block.resize(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c) {
      const long i = out.indices[static_cast<std::size_t>(r)];
      const long j = out.indices[static_cast<std::size_t>(c)];
      out.block(r, c) = state.is_pure() ? state.amplitudes[i] * std::conj(state.amplitudes[j]) : state.rho(i, j);
    }
  out.probability_mass = out.block.trace().real();
  return out;
}

std::string occupation_label(std::span<const int> occupations) {
  const bool wide = std::any_of(occupations.begin(), occupations.end(), [](int n) { return n >= 10; });
  std::string label;
  for (int n : occupations) {
    if (wide && !label.empty()) label += ',';
    label += std::to_string(n);
  }
  return label;
}

double trace_distance(const QuantumState& a, const QuantumState& b) {
  if (!(a.space == b.space)) throw InvalidArgument("trace distance: states live in different spaces");
  const ComplexMatrix diff = a.density_matrix() - b.density_matrix();
  const ComplexMatrix sym = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(sym, Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

}  // namespace dcesim::fock
