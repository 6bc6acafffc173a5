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


#include <benchmark/benchmark.h>

#include <vector>

#include "dcesim/entanglement/concurrence.hpp"
#include "dcesim/fock/evolution.hpp"
#include "dcesim/fock/hamiltonian.hpp"

namespace {

using namespace dcesim;

// Representative coupling magnitudes (s^-1) of the three-mode problem.
void coefficients(ComplexMatrix& A, ComplexMatrix& B) {
  A = ComplexMatrix::Zero(3, 3);
  A(0, 1) = Complex(1200.0, 300.0);
  A(1, 2) = Complex(-800.0, 500.0);
  A(0, 2) = Complex(400.0, -900.0);
  A -= ComplexMatrix(A.adjoint());
  B = ComplexMatrix::Zero(3, 3);
  B(0, 0) = 5000.0;
  B(1, 1) = Complex(3000.0, 1000.0);
  B(2, 2) = 2500.0;
  B(0, 2) = B(2, 0) = Complex(2000.0, -700.0);
}

ComplexMatrix hamiltonian(int levels) {
  ComplexMatrix A, B;
  coefficients(A, B);
  return fock::hamiltonian_matrix(A, B, fock::build_space(3, levels));
}

void BM_HamiltonianAssembly(benchmark::State& state) {
  ComplexMatrix A, B;
  coefficients(A, B);
  const auto space = fock::build_space(3, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fock::hamiltonian_matrix(A, B, space));
}
BENCHMARK(BM_HamiltonianAssembly)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_PureEvolution(benchmark::State& state) {
  const int levels = static_cast<int>(state.range(0));
  const ComplexMatrix H = hamiltonian(levels);
  const auto vac = fock::QuantumState::vacuum(fock::build_space(3, levels));
  const RealVector times = RealVector::LinSpaced(501, 0.0, 5e-6);
  for (auto _ : state) benchmark::DoNotOptimize(fock::evolve_pure(H, vac, times));
}
BENCHMARK(BM_PureEvolution)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_LindbladEvolution(benchmark::State& state) {
  const int levels = static_cast<int>(state.range(0));
  const auto space = fock::build_space(3, levels);
  const ComplexMatrix H = hamiltonian(levels);
  const auto rho0 = fock::QuantumState::density(space, fock::QuantumState::vacuum(space).density_matrix());
  const std::vector<fock::CollapseChannel> channels{{0, 1e5}, {1, 1e5}, {2, 1e5}};
  const RealVector times = RealVector::LinSpaced(31, 0.0, 1e-6);
  for (auto _ : state) benchmark::DoNotOptimize(fock::evolve_lindblad(H, channels, rho0, times));
}
BENCHMARK(BM_LindbladEvolution)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_Concurrence(benchmark::State& state) {
  const int levels = static_cast<int>(state.range(0));
  const auto vac = fock::QuantumState::vacuum(fock::build_space(3, levels));
  const auto psi = fock::PureEvolver(hamiltonian(levels)).apply(vac.amplitudes, 5e-6);
  const auto st = fock::QuantumState::pure(vac.space, psi);
  for (auto _ : state) benchmark::DoNotOptimize(entanglement::concurrence(st));
}
BENCHMARK(BM_Concurrence)->Arg(5)->Arg(9)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
