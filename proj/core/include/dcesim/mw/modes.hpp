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
#include "dcesim/lle/modulation.hpp"

/// Instantaneous eigenmodes of the microwave ring,
///
///   -psi'' = (omega / c)^2 n(theta)^2 R^2 psi,   psi periodic in theta,
///
/// normalized as  integral n^2 psi_n psi_m R dtheta = delta_nm  (grid trapezoid).
namespace dcesim::mw {

enum class Parity { even, odd, mixed };

struct ModeMember {
  double freq = 0.0;  ///< rad/s
  RealVector shape;   ///< psi on the angle grid
  Parity parity = Parity::mixed;
};

/// The two near-degenerate standing waves of harmonic h (cos- and sin-like).
struct Doublet {
  int harmonic = 0;
  ModeMember symmetric;      ///< even about theta = 0, or the most-even rotation
  ModeMember antisymmetric;  ///< the weighted-orthogonal partner
};

struct ModeSolverOptions {
  int galerkin_harmonics = 32;       ///< trig basis truncation; needs 4M <= N
  double symmetry_tolerance = 1e-14;  ///< relative odd content of n^2 treated as zero
  double doublet_resolution = 1e-12;  ///< relative splitting below which members are rotated
};

/// Solves the eigenproblem in a Fourier-Galerkin basis whose weight matrix is
/// the grid-trapezoid integral of n^2 times basis products (exact on the grid).
/// An even profile splits into independent cosine and sine sectors, which
/// separates every doublet exactly.
std::vector<Doublet> solve_doublets(const RealVector& profile, double radius_m, int n_harmonics,
                                    const ModeSolverOptions& options = {});

struct InstantaneousModes {
  RealVector freqs;   ///< n_modes, ascending
  RealMatrix shapes;  ///< n_modes x N
};

/// Symmetric members of harmonics 1..n_modes.
InstantaneousModes instantaneous_modes(const RealVector& profile, double radius_m, int n_modes,
                                       const ModeSolverOptions& options = {});

enum class DoubletPolicy {
  strongest_drive,  ///< member whose omega'/omega has the larger 2h-th Fourier component
  symmetric,
};

/// Gauge-fixed instantaneous basis sampled over one modulation period.
struct ModeBasis {
  RealVector times;
  double fundamental = 0.0;
  double radius_m = 0.0;
  std::vector<int> harmonics;          ///< physical harmonic number of each mode
  std::vector<bool> symmetric_member;  ///< which doublet member was retained
  RealMatrix freqs;                    ///< n_modes x K
  std::vector<RealMatrix> shapes;      ///< per mode, K x N
  RealMatrix weight;                   ///< n^2, K x N

  int n_modes() const { return static_cast<int>(shapes.size()); }
  long samples() const { return times.size(); }
  long grid_points() const { return weight.cols(); }
};

/// integral w f g R dtheta on the grid.
double weighted_inner(const RealVector& weight, const RealVector& f, const RealVector& g, double radius_m);

/// Chooses signs so that the weighted overlap between consecutive samples is
/// positive, with sample 0 oriented along cos(h theta) + sin(h theta).
/// Throws TimeResolutionError if any |overlap| < min_overlap, including the
/// wrap from the last sample back to the first.
ModeBasis fix_gauge(ModeBasis basis, double min_overlap = 0.5);

/// Solves every time sample, gauge-fixes both doublet members and keeps one
/// member per harmonic according to `policy`.
ModeBasis build_mode_basis(const lle::ModulationProfile& profile, int n_modes, DoubletPolicy policy,
                           const ModeSolverOptions& options = {});

/// max over samples of max |<psi_n, psi_m>_{n^2} - delta_nm|.
double orthonormality_deviation(const ModeBasis& basis);

/// Smallest weighted overlap between consecutive samples over all modes.
double min_consecutive_overlap(const ModeBasis& basis);

}  // namespace dcesim::mw
