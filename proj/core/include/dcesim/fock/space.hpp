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

#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "dcesim/common.hpp"

namespace dcesim::fock {

using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

/// Truncated Fock space of n_modes bosonic modes with photon numbers
/// 0..levels-1 each. Mode 0 is the most significant digit of the flat index.
struct FockSpace {
  int n_modes = 0;
  int levels = 0;
  long dim = 0;

  long stride(int mode) const;
  int occupation(long index, int mode) const;
  std::vector<int> occupations(long index) const;
  long index(std::span<const int> occupations) const;
  bool operator==(const FockSpace&) const = default;
};

inline constexpr long kDefaultCapacity = 4096;

/// Throws CapacityError when levels^n_modes exceeds `max_dim`.
FockSpace build_space(int n_modes, int levels, long max_dim = kDefaultCapacity);

struct LadderPair {
  SparseMatrix lower;  ///< a
  SparseMatrix raise;  ///< a^dag
};

LadderPair ladder_operators(const FockSpace& space, int mode);

/// Diagonal of a_k^dag a_k.
RealVector number_diagonal(const FockSpace& space, int mode);

/// Diagonal of (-1)^(sum of occupations).
RealVector parity_diagonal(const FockSpace& space);

}  // namespace dcesim::fock
