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

#include <cmath>

#include "dcesim/common.hpp"

namespace dcesim {

/// Angle of sample j on an N-point grid over [0, 2pi).
inline double grid_angle(int j, int n) { return kTwoPi * j / n; }

/// Same angle folded into [-pi, pi).
inline double wrapped_angle(int j, int n) {
  return j < n / 2 ? grid_angle(j, n) : grid_angle(j, n) - kTwoPi;
}

/// Signed wavenumber of DFT bin j (Nyquist bin maps to -N/2).
inline int wavenumber(int j, int n) { return j < n / 2 ? j : j - n; }

/// Periodic trapezoid rule: sum of samples times the grid spacing.
template <typename Derived>
double periodic_integral(const Eigen::MatrixBase<Derived>& samples) {
  return samples.sum() * kTwoPi / static_cast<double>(samples.size());
}

inline bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace dcesim
