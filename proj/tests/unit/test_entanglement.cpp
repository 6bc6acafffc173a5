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


#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dcesim/entanglement/concurrence.hpp"
#include "dcesim/fock/space.hpp"
#include "dcesim/fock/state.hpp"

namespace dcesim::entanglement {
namespace {

using fock::FockSpace;
using fock::QuantumState;

QuantumState from_terms(const FockSpace& s, const std::vector<std::pair<std::vector<int>, Complex>>& terms) {
  ComplexVector psi = ComplexVector::Zero(s.dim);
  for (const auto& [occ, amp] : terms) psi[s.index(occ)] += amp;
  return QuantumState::pure(s, psi / psi.norm());
}

QuantumState ghz() {
  const auto s = fock::build_space(3, 2);
  return from_terms(s, {{{0, 0, 0}, 1.0}, {{1, 1, 1}, 1.0}});
}

QuantumState w_state() {
  const auto s = fock::build_space(3, 2);
  return from_terms(s, {{{1, 0, 0}, 1.0}, {{0, 1, 0}, 1.0}, {{0, 0, 1}, 1.0}});
}

QuantumState random_state(const FockSpace& s, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g;
  ComplexVector psi(s.dim);
  for (auto& z : psi) z = Complex(g(gen), g(gen));
  return QuantumState::pure(s, psi / psi.norm());
}

ComplexMatrix random_unitary(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (auto& z : m.reshaped()) z = Complex(g(gen), g(gen));
  return Eigen::HouseholderQR<ComplexMatrix>(m).householderQ();
}

// U acting on one mode of the full space.
QuantumState apply_local(const QuantumState& st, int mode, const ComplexMatrix& U) {
  const auto& s = st.space;
  ComplexVector out = ComplexVector::Zero(s.dim);
  for (long i = 0; i < s.dim; ++i) {
    auto occ = s.occupations(i);
    const int from = occ[mode];
    for (int to = 0; to < s.levels; ++to) {
      occ[mode] = to;
      out[s.index(occ)] += U(to, from) * st.amplitudes[i];
    }
  }
  return QuantumState::pure(s, out);
}

TEST(Concurrence, ProductStateIsZero) {
  const auto s = fock::build_space(3, 3);
  EXPECT_NEAR(concurrence(QuantumState::vacuum(s)).full, 0.0, 1e-12);
  // (|0> + |1>) on every mode.
  ComplexVector psi = ComplexVector::Zero(s.dim);
  for (long i = 0; i < s.dim; ++i) {
    const auto occ = s.occupations(i);
    if (occ[0] < 2 && occ[1] < 2 && occ[2] < 2) psi[i] = 1.0;
  }
  const auto r = concurrence(QuantumState::pure(s, psi / psi.norm()));
  EXPECT_NEAR(r.full, 0.0, 1e-7);
  for (double c : r.reduced) EXPECT_NEAR(c, 0.0, 1e-7);
}

TEST(Concurrence, GhzAndWReferenceValues) {
  EXPECT_NEAR(concurrence(ghz()).full, std::sqrt(1.5), 1e-12);
  EXPECT_NEAR(concurrence(w_state()).full, std::sqrt(4.0 / 3.0), 1e-12);
  EXPECT_NEAR(concurrence_bound(3), std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(concurrence_bound(2), std::sqrt(2.0), 1e-15);
}

TEST(Concurrence, BellPairIsOne) {
  const auto s = fock::build_space(2, 2);
  EXPECT_NEAR(concurrence(from_terms(s, {{{0, 0}, 1.0}, {{1, 1}, 1.0}})).full, 1.0, 1e-12);
}

TEST(Concurrence, FactoredModeReducesToPair) {
  const auto s = fock::build_space(3, 2);
  const auto st = from_terms(s, {{{0, 0, 1}, 1.0}, {{1, 1, 1}, 1.0}});
  const auto r = concurrence(st);
  EXPECT_NEAR(r.full, 1.0, 1e-12);
  EXPECT_NEAR(r.reduced[2], 1.0, 1e-12);  // modes 0, 1 carry the Bell pair
  // Dropping half of the pair leaves a mixed state; the purity indicator sees sqrt(1/2).
  EXPECT_NEAR(r.reduced[0], std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(r.reduced[1], std::sqrt(0.5), 1e-12);
}

TEST(Concurrence, ComplementaryPuritiesAgree) {
  const auto st = random_state(fock::build_space(3, 3), 7);
  for (const auto& p : Partition::all_proper(3)) {
    Partition rest;
    for (int m = 0; m < 3; ++m)
      if (std::find(p.subset.begin(), p.subset.end(), m) == p.subset.end()) rest.subset.push_back(m);
    EXPECT_NEAR(purity(partial_trace(st, p)), purity(partial_trace(st, rest)), 1e-12);
  }
  EXPECT_EQ(Partition::all_proper(3).size(), 6u);
}

TEST(Concurrence, LocalUnitaryInvariance) {
  const auto st = random_state(fock::build_space(3, 3), 11);
  const auto before = concurrence(st);
  for (int mode = 0; mode < 3; ++mode) {
    ComplexMatrix phase = ComplexMatrix::Zero(3, 3);
    for (int j = 0; j < 3; ++j) phase(j, j) = std::polar(1.0, 0.77 * j);
    for (const auto& U : {phase, random_unitary(3, 100 + mode)}) {
      const auto after = concurrence(apply_local(st, mode, U));
      EXPECT_NEAR(after.full, before.full, 1e-10);
      for (int k = 0; k < 3; ++k) EXPECT_NEAR(after.reduced[k], before.reduced[k], 1e-10);
    }
  }
}

TEST(Concurrence, PartialTraceKeepsRequestedOrder) {
  const auto s = fock::build_space(3, 2);
  const auto st = from_terms(s, {{{1, 0, 0}, 1.0}});
  const ComplexMatrix r = partial_trace(st, {{2, 0}});
  // |0>_2 |1>_0 has index 0 * 2 + 1 in the (2, 0) ordering.
  EXPECT_NEAR(r(1, 1).real(), 1.0, 1e-15);
  EXPECT_NEAR(r.trace().real(), 1.0, 1e-15);
}

TEST(Concurrence, RejectsInvalidInputs) {
  const auto s = fock::build_space(3, 2);
  EXPECT_THROW(Partition{{}}.validate(3), InvalidArgument);
  EXPECT_THROW((Partition{{0, 1, 2}}.validate(3)), InvalidArgument);
  EXPECT_THROW((Partition{{0, 0}}.validate(3)), InvalidArgument);
  EXPECT_THROW(Partition{{3}}.validate(3), InvalidArgument);
  ComplexVector psi = ComplexVector::Zero(s.dim);
  psi[0] = 0.5;
  EXPECT_THROW(concurrence(QuantumState::pure(s, psi)), InvalidArgument);
}

TEST(Concurrence, TraceMatchesSingleEvaluations) {
  const auto s = fock::build_space(3, 3);
  std::vector<QuantumState> states{random_state(s, 1), random_state(s, 2), random_state(s, 3)};
  const auto trace = concurrence_trace(states);
  for (std::size_t i = 0; i < states.size(); ++i) EXPECT_EQ(trace[i].full, concurrence(states[i]).full);
}

TEST(Projection, GhzCollapsesToProduct) {
  const auto st = ghz();
  for (int mode = 0; mode < 3; ++mode)
    for (int j = 0; j < 2; ++j) {
      const auto m = project_mode(st, mode, Outcome::fock_level(j));
      ASSERT_TRUE(m.possible());
      EXPECT_NEAR(m.probability, 0.5, 1e-15);
      EXPECT_EQ(purity_concurrence(*m.collapsed), 0.0);
    }
  const auto table = persistency_table(st, {0, 1, 2}, 1);
  for (const auto& cell : table.cells) {
    EXPECT_TRUE(cell.possible);
    EXPECT_EQ(cell.concurrence, 0.0);
  }
}

TEST(Projection, WKeepsPairEntangledAfterVacuumOutcome) {
  const auto m = project_mode(w_state(), 0, Outcome::fock_level(0));
  ASSERT_TRUE(m.possible());
  EXPECT_NEAR(m.probability, 2.0 / 3.0, 1e-15);
  const auto r = concurrence(*m.collapsed);
  EXPECT_NEAR(r.reduced[0], 1.0, 1e-12);
}

TEST(Projection, OutcomeProbabilitiesSumToOne) {
  const auto st = random_state(fock::build_space(3, 3), 5);
  for (int mode = 0; mode < 3; ++mode) {
    double total = 0.0;
    for (int j = 0; j < 3; ++j) total += project_mode(st, mode, Outcome::fock_level(j)).probability;
    EXPECT_NEAR(total, 1.0, 1e-12);
    const double zero = project_mode(st, mode, {OutcomeKind::zero, 0}).probability;
    const double nonzero = project_mode(st, mode, {OutcomeKind::nonzero, 0}).probability;
    EXPECT_NEAR(zero + nonzero, 1.0, 1e-12);
    EXPECT_NEAR(zero, project_mode(st, mode, Outcome::fock_level(0)).probability, 1e-15);
  }
}

TEST(Projection, ImpossibleOutcomeHasNoState) {
  const auto m = project_mode(ghz(), 1, {OutcomeKind::fock, 1}, 0.6);
  EXPECT_FALSE(m.possible());
  const auto s = fock::build_space(3, 3);
  const auto vac = project_mode(QuantumState::vacuum(s), 0, Outcome::fock_level(2));
  EXPECT_FALSE(vac.possible());
  EXPECT_EQ(vac.probability, 0.0);
}

}  // namespace
}  // namespace dcesim::entanglement
