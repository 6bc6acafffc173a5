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

#include "dcesim/entanglement/concurrence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dcesim/util/parallel.hpp"

namespace dcesim::entanglement {

using fock::FockSpace;
using fock::QuantumState;

void Partition::validate(int n_modes) const {
  if (subset.empty() || static_cast<int>(subset.size()) >= n_modes)
    throw InvalidArgument("partition: subset must be proper and nonempty");
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] < 0 || subset[i] >= n_modes) throw InvalidArgument("partition: mode index out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (subset[j] == subset[i]) throw InvalidArgument("partition: duplicate mode index");
  }
}

std::vector<Partition> Partition::all_proper(int n_modes) {
  std::vector<Partition> out;
  for (unsigned mask = 1; mask + 1 < (1u << n_modes); ++mask) {
    Partition p;
    for (int k = 0; k < n_modes; ++k)
      if (mask & (1u << k)) p.subset.push_back(k);
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

// Flat index split: kept digits (in `keep` order) and discarded digits.
struct Split {
  std::vector<long> kept_index;     // per full index
  std::vector<long> dropped_index;  // per full index
  long kept_dim = 1;
  long dropped_dim = 1;
};

Split split_indices(const FockSpace& space, const std::vector<int>& keep) {
  std::vector<bool> kept(static_cast<std::size_t>(space.n_modes), false);
  for (int k : keep) kept[static_cast<std::size_t>(k)] = true;
  Split s;
  for (std::size_t i = 0; i < keep.size(); ++i) s.kept_dim *= space.levels;
  s.dropped_dim = space.dim / s.kept_dim;
  s.kept_index.resize(static_cast<std::size_t>(space.dim));
  s.dropped_index.resize(static_cast<std::size_t>(space.dim));
  for (long idx = 0; idx < space.dim; ++idx) {
    const auto occ = space.occupations(idx);
    long a = 0, b = 0;
    for (int k : keep) a = a * space.levels + occ[static_cast<std::size_t>(k)];
    for (int k = 0; k < space.n_modes; ++k)
      if (!kept[static_cast<std::size_t>(k)]) b = b * space.levels + occ[static_cast<std::size_t>(k)];
    s.kept_index[static_cast<std::size_t>(idx)] = a;
    s.dropped_index[static_cast<std::size_t>(idx)] = b;
  }
  return s;
}

double subset_purity_sum(const QuantumState& state) {
  double sum = 0.0;
  for (const auto& p : Partition::all_proper(state.space.n_modes)) sum += purity(partial_trace(state, p));
  return sum;
}

// The state of every mode except `traced`, as a density matrix on a smaller space.
QuantumState drop_mode(const QuantumState& state, int traced) {
  Partition rest;
  for (int k = 0; k < state.space.n_modes; ++k)
    if (k != traced) rest.subset.push_back(k);
  const FockSpace smaller{state.space.n_modes - 1, state.space.levels, state.space.dim / state.space.levels};
  return QuantumState::density(smaller, partial_trace(state, rest), state.frame_time);
}

}  // namespace

ComplexMatrix partial_trace(const QuantumState& state, const Partition& keep) {
  const FockSpace& space = state.space;
  if (static_cast<int>(keep.subset.size()) == space.n_modes) {
    std::vector<int> sorted = keep.subset;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> iota(sorted.size());
    std::iota(iota.begin(), iota.end(), 0);
    if (sorted == iota && keep.subset == sorted) return state.density_matrix();
  }
  if (static_cast<int>(keep.subset.size()) < space.n_modes) keep.validate(space.n_modes);
  const Split s = split_indices(space, keep.subset);
  if (state.is_pure()) {
    // psi as a kept x dropped matrix M; rho = M M^dag.
    ComplexMatrix m = ComplexMatrix::Zero(s.kept_dim, s.dropped_dim);
    for (long idx = 0; idx < space.dim; ++idx)
      m(s.kept_index[static_cast<std::size_t>(idx)], s.dropped_index[static_cast<std::size_t>(idx)]) =
          state.amplitudes[idx];
    return m * m.adjoint();
  }
  ComplexMatrix out = ComplexMatrix::Zero(s.kept_dim, s.kept_dim);
  // Group full indices by their dropped digits.
  std::vector<std::vector<long>> groups(static_cast<std::size_t>(s.dropped_dim));
  for (long idx = 0; idx < space.dim; ++idx) groups[static_cast<std::size_t>(s.dropped_index[idx])].push_back(idx);
  for (const auto& g : groups)
    for (long i : g)
      for (long j : g)
        out(s.kept_index[static_cast<std::size_t>(i)], s.kept_index[static_cast<std::size_t>(j)]) += state.rho(i, j);
  return out;
}

double purity(const ComplexMatrix& rho) {
  // Tr rho^2 = sum |rho_ij|^2 for Hermitian rho
  return rho.cwiseAbs2().sum();
}

double concurrence_bound(int n_modes) {
  return std::pow(2.0, 1.0 - 0.5 * n_modes) * std::sqrt(std::pow(2.0, n_modes) - 2.0);
}

double purity_concurrence(const QuantumState& state) {
  const int n = state.space.n_modes;
  if (n < 2) return 0.0;
  const double deficit = (std::pow(2.0, n) - 2.0) - subset_purity_sum(state);
  return std::pow(2.0, 1.0 - 0.5 * n) * std::sqrt(std::max(deficit, 0.0));
}

ConcurrenceReport concurrence(const QuantumState& state) {
  if (!state.is_pure()) throw InvalidArgument("concurrence: requires a pure state");
  const double norm_err = std::abs(state.amplitudes.norm() - 1.0);
  if (norm_err > 1e-9) {
    std::ostringstream msg;
    msg << "concurrence: state is not normalized (|norm - 1| = " << norm_err << ")";
    throw InvalidArgument(msg.str());
  }
  ConcurrenceReport r;
  r.time = state.frame_time;
  r.full = purity_concurrence(state);
  if (state.space.n_modes >= 3)
    for (int k = 0; k < state.space.n_modes; ++k) r.reduced.push_back(purity_concurrence(drop_mode(state, k)));
  return r;
}

std::vector<ConcurrenceReport> concurrence_trace(const std::vector<QuantumState>& states) {
  std::vector<ConcurrenceReport> out(states.size());
  parallel_for(static_cast<long>(states.size()),
               [&](long i) { out[static_cast<std::size_t>(i)] = concurrence(states[static_cast<std::size_t>(i)]); });
  return out;
}

MeasurementOutcome project_mode(const QuantumState& state, int mode, Outcome outcome, double threshold) {
  if (!state.is_pure()) throw InvalidArgument("projection: requires a pure state");
  if (mode < 0 || mode >= state.space.n_modes) throw InvalidArgument("projection: mode index out of range");
  if (outcome.kind == OutcomeKind::fock && (outcome.level < 0 || outcome.level >= state.space.levels))
    throw InvalidArgument("projection: Fock level outside the truncation");
  ComplexVector projected = ComplexVector::Zero(state.space.dim);
  for (long idx = 0; idx < state.space.dim; ++idx) {
    const int n = state.space.occupation(idx, mode);
    const bool keep = outcome.kind == OutcomeKind::fock ? n == outcome.level
                      : outcome.kind == OutcomeKind::zero ? n == 0
                                                          : n != 0;
    if (keep) projected[idx] = state.amplitudes[idx];
  }
  MeasurementOutcome m;
  m.mode = mode;
  m.outcome = outcome;
  m.probability = projected.squaredNorm();
  if (m.probability > threshold)
    m.collapsed = QuantumState::pure(state.space, projected / std::sqrt(m.probability), state.frame_time);
  return m;
}

PersistencyTable persistency_table(const QuantumState& state, const std::vector<int>& modes, int max_fock) {
  if (max_fock < 0 || max_fock >= state.space.levels)
    throw InvalidArgument("persistency: max_fock must lie in [0, levels - 1]");
  PersistencyTable table;
  table.modes = modes;
  table.max_fock = max_fock;
  table.cells.resize(modes.size() * static_cast<std::size_t>(max_fock + 1));
  const long count = static_cast<long>(table.cells.size());
  parallel_for(count, [&](long c) {
    const std::size_t row = static_cast<std::size_t>(c) / static_cast<std::size_t>(max_fock + 1);
    const int level = static_cast<int>(c % (max_fock + 1));
    PersistencyCell cell;
    cell.mode = modes[row];
    cell.level = level;
    const auto m = project_mode(state, cell.mode, Outcome::fock_level(level));
    cell.probability = m.probability;
    cell.possible = m.possible();
    if (cell.possible) cell.concurrence = purity_concurrence(drop_mode(*m.collapsed, cell.mode));
    table.cells[static_cast<std::size_t>(c)] = cell;
  });
  return table;
}

}  // namespace dcesim::entanglement
