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

#include <string>
#include <vector>

#include "dcesim/common.hpp"
#include "dcesim/mw/coupling.hpp"

namespace dcesim::mw {

/// Time-independent coefficients of the rotating-frame Hamiltonian
///   H = i ( sum A_kl a_k^dag a_l + 1/2 sum B_kl a_k^dag a_l^dag - 1/2 sum B_kl^* a_k a_l ).
struct RwaHamiltonian {
  ComplexMatrix beamsplitter;  ///< A, s^-1
  ComplexMatrix pair;          ///< B, s^-1
  RealVector mode_freqs;       ///< nominal h omega_0, rad/s
  double fundamental = 0.0;    ///< omega_0, rad/s
  std::vector<int> harmonics;
  RealVector static_detuning;  ///< time-averaged omega_k - h omega_0, rad/s (diagnostic)
  double hermiticity_deviation = 0.0;  ///< before symmetrization
  long time_samples = 0;
  long grid_points = 0;
  int galerkin_harmonics = 0;
  double coupling_boost = 1.0;

  int n_modes() const { return static_cast<int>(beamsplitter.rows()); }
};

struct RwaOptions {
  double ladder_tolerance = 0.01;       ///< |mean omega_k / (h omega_0) - 1|
  double hermiticity_tolerance = 1e-6;  ///< above this the assembly is rejected
};

/// A_kl = Fourier coefficient of C_rot_kl at order (h_l - h_k),
/// B_kl = Fourier coefficient of D_kl at order -(h_k + h_l).
/// Checks the integer-harmonic ladder, measures and then removes any
/// anti-Hermitian residue (A -> (A - A^dag)/2, B -> (B + B^T)/2).
RwaHamiltonian rwa_hamiltonian(const CouplingSeries& coeffs, const RealVector& times, double fundamental,
                               const std::vector<int>& harmonics, const RwaOptions& options = {});

/// ||H - H^dag|| / ||H|| of the assembled operator in coefficient space:
/// ||A + A^dag||_F over ||A||_F + ||B||_F, plus the asymmetry of B.
double hermiticity_deviation(const ComplexMatrix& A, const ComplexMatrix& B);

std::string to_json_text(const RwaHamiltonian& h);
RwaHamiltonian rwa_from_json_text(const std::string& text);

}  // namespace dcesim::mw
