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
#include "dcesim/lle/soliton.hpp"

namespace dcesim::lle {

/// Device parameters of the coupled optical / microwave ring.
struct PhysicalParams {
  double ring_radius_m = 200e-6;
  double base_index = 1.9;   ///< n0 of the optical guide
  double group_index = 2.1;  ///< n_g, sets FSR = c / (2 pi R n_g)
  double pump_wavelength_m = 1550e-9;
  double nonlinear_index_m2_per_w = 2.4e-19;  ///< only used for the implied intensity diagnostic
  double loaded_q = 5e5;
  double overlap = 0.1;         ///< eta, transverse optical/MW mode overlap
  double coupling_boost = 1.0;  ///< scales the Kerr index change; 1 = physical
  RealVector mask;              ///< M(theta) on the grid; empty means M = 1

  void validate(int grid_points) const;
  double pump_angular_frequency() const;
  double optical_linewidth() const;
  double free_spectral_range_hz() const;
  /// M(theta_j), expanding an empty mask to ones.
  RealVector mask_on(int grid_points) const;
};

/// M = 1 on angles in [start, end) (radians, wrapping), 0 elsewhere.
RealVector arc_mask(int grid_points, double start_rad, double end_rad);

/// Index profile n(theta, t_k) over one full optical round trip.
struct ModulationProfile {
  RealVector times;           ///< t_k = k T / K, s
  RealMatrix index_profiles;  ///< K x N, row = time sample
  RealVector path_lengths;    ///< L(t_k), m
  double fundamental = 0.0;   ///< omega_0 = 2 pi FSR, rad/s
  double ring_radius_m = 0.0;

  long samples() const { return times.size(); }
  long grid_points() const { return index_profiles.cols(); }
  double period() const { return kTwoPi / fundamental; }
};

/// Precomputes the soliton spectrum so many time samples can be synthesized.
class CpIntensitySynthesizer {
 public:
  explicit CpIntensitySynthesizer(const SolitonField& soliton);

  /// |S(theta - shift) + S(theta + shift)|^2 with spectral (exact) shifts.
  RealVector at_shift(double shift) const;
  int grid_points() const { return static_cast<int>(spectrum_.size()); }

 private:
  std::vector<Complex> spectrum_;
};

/// I(theta, t) = |S(theta - Omega t) + S(theta + Omega t)|^2 with Omega = 2 pi fsr.
/// Both solitons sit on theta = 0 with equal phase at t = 0.
RealVector synthesize_cp_intensity(const SolitonField& soliton, double t, double fsr_hz);

/// Delta n = boost * (n0 kappa / (2 omega_p)) * I, i.e. boost * n0 / (2 Q_l) * I.
RealVector kerr_index_profile(const RealVector& intensity, const PhysicalParams& params);

/// n(theta) = n_mw + eta M(theta) Delta n(theta).
RealVector mw_index_profile(const RealVector& delta_n, const PhysicalParams& params, double n_mw);

/// Integral of n(theta) R dtheta by the periodic trapezoid rule.
double optical_path_length(const RealVector& profile, double radius_m);

/// Kerr intensity in W/m^2 equivalent to an index change, 2 dn / (eps0 n0 n2 c).
double implied_kerr_intensity(double delta_n, const PhysicalParams& params);

/// Samples K (even, >= 64) uniform instants over one period T = 1 / FSR.
ModulationProfile sample_modulation_period(const SolitonField& soliton, const PhysicalParams& params,
                                           double n_mw, int samples);

}  // namespace dcesim::lle
