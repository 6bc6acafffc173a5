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
#include <vector>

#include "dcesim/fock/evolution.hpp"
#include "dcesim/fock/hamiltonian.hpp"
#include "dcesim/fock/space.hpp"
#include "dcesim/fock/state.hpp"

namespace dcesim::fock {
namespace {

ComplexMatrix two_mode_pair(double lambda) {
  ComplexMatrix B = ComplexMatrix::Zero(2, 2);
  B(0, 1) = B(1, 0) = lambda;
  return B;
}

RealVector linspace(double end, int n) { return RealVector::LinSpaced(n, 0.0, end); }

TEST(Space, DimensionAndIndexRoundTrip) {
  const auto s = build_space(3, 9);
  EXPECT_EQ(s.dim, 729);
  EXPECT_EQ(s.stride(0), 81);
  EXPECT_EQ(s.stride(2), 1);
  for (long i = 0; i < s.dim; ++i) {
    const auto occ = s.occupations(i);
    EXPECT_EQ(s.index(occ), i);
    for (int m = 0; m < 3; ++m) EXPECT_EQ(s.occupation(i, m), occ[m]);
  }
  const std::vector<int> occ{1, 2, 3};
  EXPECT_EQ(s.index(occ), 81 + 18 + 3);
}

TEST(Space, CapacityIsEnforced) {
  EXPECT_THROW(build_space(3, 9, 500), CapacityError);
  EXPECT_THROW(build_space(4, 9), CapacityError);
  EXPECT_NO_THROW(build_space(4, 8));
}

TEST(Space, TruncatedCommutator) {
  const auto s = build_space(3, 4);
  for (int m = 0; m < 3; ++m) {
    const auto op = ladder_operators(s, m);
    const ComplexMatrix comm = ComplexMatrix(op.lower * op.raise) - ComplexMatrix(op.raise * op.lower);
    ComplexMatrix expected = ComplexMatrix::Identity(s.dim, s.dim);
    for (long i = 0; i < s.dim; ++i)
      if (s.occupation(i, m) == s.levels - 1) expected(i, i) -= double(s.levels);
    EXPECT_LT((comm - expected).cwiseAbs().maxCoeff(), 1e-14);
    const ComplexMatrix number = op.raise * op.lower;
    EXPECT_LT((number.diagonal().real() - number_diagonal(s, m)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Hamiltonian, SqueezerMatrixElements) {
  const auto s = build_space(1, 5);
  const double lambda = 0.7;
  const ComplexMatrix H = hamiltonian_matrix(ComplexMatrix::Zero(1, 1), ComplexMatrix::Constant(1, 1, lambda), s);
  // H = i (lambda / 2) (a^dag^2 - a^2)
  EXPECT_NEAR(std::abs(H(2, 0) - Complex(0.0, lambda / 2 * std::sqrt(2.0))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(H(0, 2) - Complex(0.0, -lambda / 2 * std::sqrt(2.0))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(H(3, 1) - Complex(0.0, lambda / 2 * std::sqrt(6.0))), 0.0, 1e-15);
  EXPECT_EQ(H.diagonal().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(relative_antihermiticity(H), 0.0);
}

TEST(Hamiltonian, RejectsAntiHermitianInput) {
  const auto s = build_space(2, 3);
  ComplexMatrix A = ComplexMatrix::Zero(2, 2);
  A(0, 0) = 1.0;  // i a^dag a is anti-Hermitian
  EXPECT_THROW(hamiltonian_matrix(A, ComplexMatrix::Zero(2, 2), s), AssemblyError);
}

TEST(Hamiltonian, PairTermsConserveParity) {
  const auto s = build_space(3, 4);
  ComplexMatrix A(3, 3), B(3, 3);
  A << Complex(0, 0.2), Complex(0.3, 0.1), Complex(0.0, 0.4), Complex(-0.3, 0.1), Complex(0, -0.5), Complex(0.2, 0),
      Complex(0.0, 0.4), Complex(-0.2, 0), Complex(0, 0.1);
  B << 1.0, Complex(0.2, 0.3), 0.4, Complex(0.2, 0.3), Complex(0.5, -0.1), 0.7, 0.4, 0.7, Complex(0.0, 0.9);
  const ComplexMatrix H = hamiltonian_matrix(A, B, s);
  const RealVector P = parity_diagonal(s);
  const ComplexMatrix PHP = P.asDiagonal() * H * P.asDiagonal();
  EXPECT_LT((PHP - H).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Evolution, SingleModeSqueezing) {
  const auto s = build_space(1, 40);
  const double lambda = 1e5;
  const ComplexMatrix H = hamiltonian_matrix(ComplexMatrix::Zero(1, 1), ComplexMatrix::Constant(1, 1, lambda), s);
  const auto states = evolve_pure(H, QuantumState::vacuum(s), linspace(5e-6, 11));
  for (const auto& st : states) {
    const double r = lambda * st.frame_time;
    EXPECT_NEAR(mean_photon_numbers(st)[0], std::sinh(r) * std::sinh(r), 1e-9) << "lambda t = " << r;
    EXPECT_LT(odd_parity_probability(st), 1e-14);
  }
  EXPECT_NEAR(std::sinh(0.3) * std::sinh(0.3), 0.09312, 1e-3);
}

TEST(Evolution, TwoModeSqueezingIsSymmetric) {
  const auto s = build_space(2, 25);
  const double lambda = 1e5;
  const ComplexMatrix H = hamiltonian_matrix(ComplexMatrix::Zero(2, 2), two_mode_pair(lambda), s);
  for (const auto& st : evolve_pure(H, QuantumState::vacuum(s), linspace(5e-6, 6))) {
    const RealVector n = mean_photon_numbers(st);
    const double r = lambda * st.frame_time;
    EXPECT_NEAR(n[0], std::sinh(r) * std::sinh(r), 1e-9);
    EXPECT_NEAR(n[0], n[1], 1e-12);
  }
}

TEST(Evolution, BeamsplitterSwapsPhoton) {
  const auto s = build_space(2, 3);
  const double g = 2.0;
  ComplexMatrix A = ComplexMatrix::Zero(2, 2);
  A(0, 1) = g;
  A(1, 0) = -g;
  const ComplexMatrix H = hamiltonian_matrix(A, ComplexMatrix::Zero(2, 2), s);
  const std::vector<int> one{1, 0};
  for (const auto& st : evolve_pure(H, QuantumState::fock(s, one), linspace(1.5, 7))) {
    const RealVector n = mean_photon_numbers(st);
    EXPECT_NEAR(n[0], std::cos(g * st.frame_time) * std::cos(g * st.frame_time), 1e-12);
    EXPECT_NEAR(n[0] + n[1], 1.0, 1e-12);
  }
}

TEST(Evolution, PureEvolutionConservesNormAndEnergy) {
  const auto s = build_space(2, 8);
  ComplexMatrix A = ComplexMatrix::Zero(2, 2);
  A(0, 1) = Complex(3e4, 1e4);
  A(1, 0) = -std::conj(A(0, 1));
  ComplexMatrix B = two_mode_pair(1e5);
  B(0, 0) = Complex(2e4, -1e4);
  const ComplexMatrix H = hamiltonian_matrix(A, B, s);
  const std::vector<int> start{1, 0};
  const auto psi0 = QuantumState::fock(s, start);
  const double e0 = energy_expectation(H, psi0);
  for (const auto& st : evolve_pure(H, psi0, linspace(5e-6, 11))) {
    EXPECT_NEAR(st.amplitudes.norm(), 1.0, 1e-12);
    EXPECT_NEAR(energy_expectation(H, st), e0, 1e-9 * H.norm());
    EXPECT_NO_THROW(st.validate());
  }
}

TEST(Lindblad, EnergyDecaysExponentially) {
  const auto s = build_space(1, 4);
  const double gamma = 1e5;
  const std::vector<int> one{1};
  const std::vector<int> two{2};
  const RealVector times = linspace(5.0 / gamma, 51);
  const ComplexMatrix H = ComplexMatrix::Zero(s.dim, s.dim);
  const auto a = evolve_lindblad(H, {{0, gamma}}, QuantumState::density(s, QuantumState::fock(s, one).density_matrix()),
                                 times);
  const auto b = evolve_lindblad(H, {{0, gamma}}, QuantumState::density(s, QuantumState::fock(s, two).density_matrix()),
                                 times);
  for (long i = 0; i < times.size(); ++i) {
    const double decay = std::exp(-gamma * times[i]);
    EXPECT_NEAR(mean_photon_numbers(a[i])[0], decay, 1e-6);
    EXPECT_NEAR(mean_photon_numbers(b[i])[0], 2.0 * decay, 1e-6);
    EXPECT_NO_THROW(b[i].validate());
  }
}

TEST(Lindblad, ZeroRateMatchesPureEvolution) {
  const auto s = build_space(2, 6);
  const ComplexMatrix H = hamiltonian_matrix(ComplexMatrix::Zero(2, 2), two_mode_pair(1e5), s);
  const RealVector times = linspace(5e-6, 11);
  const auto vac = QuantumState::vacuum(s);
  const auto pure = evolve_pure(H, vac, times);
  const auto open = evolve_lindblad(H, {{0, 0.0}, {1, 0.0}}, QuantumState::density(s, vac.density_matrix()), times);
  ASSERT_EQ(open.size(), pure.size());
  for (std::size_t i = 0; i < pure.size(); ++i) EXPECT_LT(trace_distance(pure[i], open[i]), 1e-7);
}

TEST(Lindblad, DampingLowersPhotonNumber) {
  const auto s = build_space(2, 6);
  const ComplexMatrix H = hamiltonian_matrix(ComplexMatrix::Zero(2, 2), two_mode_pair(1e5), s);
  const RealVector times = linspace(3e-6, 7);
  const auto vac = QuantumState::vacuum(s);
  const auto pure = evolve_pure(H, vac, times);
  const auto open = evolve_lindblad(H, {{0, 1e5}, {1, 1e5}}, QuantumState::density(s, vac.density_matrix()), times);
  for (std::size_t i = 1; i < pure.size(); ++i)
    EXPECT_LT(mean_photon_numbers(open[i]).sum(), mean_photon_numbers(pure[i]).sum());
}

TEST(Lindblad, CollapsingStepRaisesStiffness) {
  const auto s = build_space(1, 3);
  const std::vector<int> one{1};
  EXPECT_THROW(evolve_lindblad(ComplexMatrix::Zero(3, 3), {{0, 1e25}},
                               QuantumState::density(s, QuantumState::fock(s, one).density_matrix()), linspace(1.0, 3)),
               StiffnessError);
}

TEST(State, ValidationAndDiagnostics) {
  const auto s = build_space(3, 3);
  ComplexVector psi = ComplexVector::Zero(s.dim);
  psi[0] = 1.1;
  EXPECT_THROW(QuantumState::pure(s, psi).validate(), InvalidArgument);
  const std::vector<int> top{2, 0, 1};
  const auto f = QuantumState::fock(s, top);
  const auto check = truncation_check(f);
  EXPECT_TRUE(check.flagged);
  EXPECT_EQ(check.top_level[0], 1.0);
  EXPECT_EQ(check.top_level[1], 0.0);
  EXPECT_EQ(odd_parity_probability(f), 1.0);
  EXPECT_EQ(occupation_label(top), "201");
  EXPECT_NEAR(trace_distance(f, QuantumState::vacuum(s)), 1.0, 1e-12);
}

TEST(State, TomographyBlockKeepsLowOccupations) {
  const auto s = build_space(3, 3);
  ComplexVector psi = ComplexVector::Zero(s.dim);
  const std::vector<int> low{1, 1, 0}, high{2, 0, 0};
  psi[0] = std::sqrt(0.5);
  psi[s.index(low)] = std::sqrt(0.3);
  psi[s.index(high)] = std::sqrt(0.2);
  const auto block = tomography_subset(QuantumState::pure(s, psi), 2);
  EXPECT_EQ(block.indices.size(), 8u);
  EXPECT_EQ(block.block.rows(), 8);
  EXPECT_NEAR(block.probability_mass, 0.8, 1e-14);
  EXPECT_EQ(block.occupations[6], (std::vector<int>{1, 1, 0}));
  EXPECT_NEAR(block.block(6, 0).real(), std::sqrt(0.15), 1e-14);
}

}  // namespace
}  // namespace dcesim::fock
