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

#include <cmath>

#include "dcesim/mw/coupling.hpp"
#include "dcesim/mw/modes.hpp"
#include "dcesim/util/periodic.hpp"

namespace {

using namespace dcesim;

RealVector bumped_profile(int grid) {
  RealVector p(grid);
  for (int j = 0; j < grid; ++j) p[j] = 2.1 + 1e-6 * std::exp(20.0 * (std::cos(grid_angle(j, grid)) - 1.0));
  return p;
}

void BM_SolveDoublets(benchmark::State& state) {
  const auto profile = bumped_profile(1024);
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mw::solve_doublets(profile, 200e-6, 3, {.galerkin_harmonics = m}));
}
BENCHMARK(BM_SolveDoublets)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_ModeBasisAndCouplings(benchmark::State& state) {
  const int samples = static_cast<int>(state.range(0));
  const int grid = 1024;
  lle::ModulationProfile p;
  p.ring_radius_m = 200e-6;
  p.fundamental = constants::speed_of_light / (2.1 * p.ring_radius_m);
  p.times.resize(samples);
  p.index_profiles.resize(samples, grid);
  p.path_lengths.resize(samples);
  for (int k = 0; k < samples; ++k) {
    p.times[k] = p.period() * k / samples;
    const double g = 0.5 * (1.0 + std::cos(2.0 * p.fundamental * p.times[k]));
    p.index_profiles.row(k) = (2.1 + g * (bumped_profile(grid).array() - 2.1)).transpose();
    p.path_lengths[k] = 2.1 * kTwoPi * p.ring_radius_m;
  }
  for (auto _ : state) {
    const auto basis = mw::build_mode_basis(p, 3, mw::DoubletPolicy::strongest_drive);
    benchmark::DoNotOptimize(mw::coupling_series(basis));
  }
}
BENCHMARK(BM_ModeBasisAndCouplings)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
