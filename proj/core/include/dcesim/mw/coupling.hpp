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

#include <vector>

#include "dcesim/common.hpp"
#include "dcesim/mw/modes.hpp"

namespace dcesim::mw {

/// Time-dependent coupling matrices of the instantaneous-mode expansion.
struct CouplingSeries {
  std::vector<RealMatrix> G;      ///< G_nm(t_k), s^-1
  std::vector<ComplexMatrix> C;   ///< -i omega delta + (G - G^T)/2
  std::vector<RealMatrix> C_rot;  ///< C with the free rotation removed, (G - G^T)/2
  std::vector<RealMatrix> D;      ///< ((omega'/omega) delta - G - G^T)/2
  RealMatrix freqs;               ///< n_modes x K, rad/s
  RealMatrix freq_derivatives;    ///< n_modes x K, rad/s^2

  long samples() const { return static_cast<long>(G.size()); }
  int n_modes() const { return static_cast<int>(freqs.rows()); }
};

/// G_nm = sqrt(omega_m / omega_n) integral n^2 (d psi_n / dt) psi_m R dtheta,
/// with d/dt by a 4th-order periodic difference over the sampled period.
std::vector<RealMatrix> coupling_G(const ModeBasis& basis);

/// d omega / dt for every mode (4th-order periodic difference).
RealMatrix frequency_derivatives(const ModeBasis& basis);

CouplingSeries assemble_CD(std::vector<RealMatrix> G, const RealMatrix& freqs, const RealMatrix& freq_derivatives);

/// coupling_G + frequency_derivatives + assemble_CD.
CouplingSeries coupling_series(const ModeBasis& basis);

/// Time series of one matrix element.
RealVector element_series(const std::vector<RealMatrix>& series, int row, int col);

}  // namespace dcesim::mw
