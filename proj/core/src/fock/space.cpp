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

#include "dcesim/fock/space.hpp"

#include <cmath>
#include <string>

namespace dcesim::fock {

long FockSpace::stride(int mode) const {
  long s = 1;
  for (int k = mode + 1; k < n_modes; ++k) s *= levels;
  return s;
}

int FockSpace::occupation(long idx, int mode) const { return static_cast<int>((idx / stride(mode)) % levels); }

std::vector<int> FockSpace::occupations(long idx) const {
  std::vector<int> out(static_cast<std::size_t>(n_modes));
  for (int k = n_modes - 1; k >= 0; --k) {
    out[static_cast<std::size_t>(k)] = static_cast<int>(idx % levels);
    idx /= levels;
  }
  return out;
}

long FockSpace::index(std::span<const int> occ) const {
  if (static_cast<int>(occ.size()) != n_modes) throw InvalidArgument("fock index: wrong number of occupations");
  long idx = 0;
  for (int n : occ) {
    if (n < 0 || n >= levels) throw InvalidArgument("fock index: occupation outside the truncation");
    idx = idx * levels + n;
  }
  return idx;
}

FockSpace build_space(int n_modes, int levels, long max_dim) {
  if (n_modes < 1) throw InvalidArgument("fock space: n_modes must be >= 1");
  if (levels < 2) throw InvalidArgument("fock space: levels must be >= 2");
  long dim = 1;
  for (int k = 0; k < n_modes; ++k) {
    if (dim > max_dim / levels)
      throw CapacityError("fock space: " + std::to_string(levels) + "^" + std::to_string(n_modes) +
                          " exceeds the capacity cap of " + std::to_string(max_dim));
    dim *= levels;
  }
  return {n_modes, levels, dim};
}

LadderPair ladder_operators(const FockSpace& space, int mode) {
  if (mode < 0 || mode >= space.n_modes) throw InvalidArgument("ladder: mode index out of range");
  const long stride = space.stride(mode);
  std::vector<Eigen::Triplet<Complex>> lower;
  lower.reserve(static_cast<std::size_t>(space.dim));
  for (long idx = 0; idx < space.dim; ++idx) {
    const int n = space.occupation(idx, mode);
    if (n > 0) lower.emplace_back(idx - stride, idx, Complex(std::sqrt(static_cast<double>(n)), 0.0));
  }
  LadderPair out;
  out.lower.resize(space.dim, space.dim);
  out.lower.setFromTriplets(lower.begin(), lower.end());
  out.raise = out.lower.adjoint();
  return out;
}

RealVector number_diagonal(const FockSpace& space, int mode) {
  RealVector out(space.dim);
  for (long idx = 0; idx < space.dim; ++idx) out[idx] = space.occupation(idx, mode);
  return out;
}

RealVector parity_diagonal(const FockSpace& space) {
  RealVector out(space.dim);
  for (long idx = 0; idx < space.dim; ++idx) {
    int total = 0;
    for (int k = 0; k < space.n_modes; ++k) total += space.occupation(idx, k);
    out[idx] = total % 2 == 0 ? 1.0 : -1.0;
  }
  return out;
}

}  // namespace dcesim::fock
