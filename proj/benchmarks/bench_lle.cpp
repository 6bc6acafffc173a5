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

#include "dcesim/lle/modulation.hpp"
#include "dcesim/lle/soliton.hpp"

namespace {

using namespace dcesim;

lle::LleParams params(int grid) {
  lle::LleParams p;
  p.dispersion = lle::normalized_dispersion(1.5246e6, 5e5, 1550e-9);
  p.grid_points = grid;
  return p;
}

// 100 split steps (0.1 normalized time units at the default step).
void BM_LleSplitSteps(benchmark::State& state) {
  const auto seed = lle::sech_seed(params(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(lle::evolve_lle(seed, 0.1));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_LleSplitSteps)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMicrosecond);

void BM_CounterPropagatingIntensity(benchmark::State& state) {
  const auto seed = lle::sech_seed(params(1024));
  const lle::CpIntensitySynthesizer synth(seed);
  double shift = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(synth.at_shift(shift));
    shift += 0.01;
  }
}
BENCHMARK(BM_CounterPropagatingIntensity)->Unit(benchmark::kMicrosecond);

}  // namespace
