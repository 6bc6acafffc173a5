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

/// Dissipative Kerr solitons of the normalized Lugiato-Lefever equation
///
///   dpsi/dtau = F - (1 + i alpha) psi + i |psi|^2 psi + i (d2/2) d^2psi/dtheta^2
///
/// on the periodic angle grid theta_j = 2 pi j / N. Time is tau = kappa t / 2,
/// detuning alpha = 2 delta_omega / kappa and dispersion d2 = 2 D2 / kappa,
/// with kappa = omega_p / Q_l the loaded optical linewidth.
namespace dcesim::lle {

struct LleParams {
  double pump_strength_sq = 4.1;  ///< F^2
  double detuning = 3.2;          ///< alpha
  double dispersion = 0.0;        ///< d2, must be > 0 (anomalous)
  int grid_points = 1024;
  double step = 1e-3;  ///< split-step size in normalized time

  /// Throws InvalidArgument listing the first violated invariant.
  void validate() const;
  double pump() const;
};

/// Loaded optical linewidth kappa = omega_p / Q_l in rad/s.
double optical_linewidth(double loaded_q, double pump_wavelength_m);

/// d2 = 2 D2 / kappa with D2 given as D2/2pi in Hz.
double normalized_dispersion(double d2_over_2pi_hz, double loaded_q, double pump_wavelength_m);

struct SolitonField {
  ComplexVector envelope;
  LleParams params;
  double residual = 0.0;  ///< last L2 change of |psi| per unit normalized time
  bool steady = false;
  std::vector<std::string> warnings;

  double peak_intensity() const;
  /// integral of |psi|^2 over theta
  double energy() const;
  /// Re integral of F conj(psi) over theta; equals energy() at steady state.
  double pump_work() const;
  /// |energy - pump_work| / energy
  double power_balance_error() const;
};

struct SteadyStateOptions {
  double tolerance = 1e-8;      ///< on the L2 change of |psi| per unit time
  double check_interval = 1.0;  ///< normalized time between convergence checks
  double max_time = 2000.0;
  double divergence_cap = 1e4;  ///< max |psi|^2 before a run counts as diverged
  double flat_contrast = 1e-3;  ///< (max-min)/max of |psi|^2 below this is "flat"
};

/// Real intracavity intensities rho of the homogeneous steady states,
/// F^2 = rho (1 + (alpha - rho)^2), ascending.
std::vector<double> homogeneous_intensities(double pump_strength_sq, double detuning);

/// Flat field psi = F / (1 + i (alpha - rho)) for a homogeneous root rho.
Complex homogeneous_field(double pump_strength_sq, double detuning, double intensity);

/// Upper detuning edge of single-soliton existence, pi^2 F^2 / 8.
double soliton_existence_limit(double pump_strength_sq);

SolitonField flat_state(const LleParams& params, Complex value);

/// sqrt(2 alpha) sech(sqrt(2 alpha / d2) theta) centered at theta = 0 on top of
/// the low-intensity homogeneous branch.
SolitonField sech_seed(const LleParams& params);

/// Advances the field by `duration` normalized time with symmetric (Strang)
/// split steps. The linear part, pump included, is integrated exactly in the
/// spectral domain; the Kerr phase rotation exactly in the angle domain.
/// Throws DivergedError when max |psi|^2 exceeds `divergence_cap`.
SolitonField evolve_lle(const SolitonField& state, double duration, double divergence_cap = 1e4);

/// Seeds with sech_seed and evolves until the co-moving L2 change of |psi| per
/// unit time drops below options.tolerance. The returned field has its
/// intensity peak on sample 0.
///
/// Throws NoSolitonError if the field relaxes to a flat state and
/// ConvergenceError (carrying the residual) if max_time is exhausted.
SolitonField find_steady_soliton(const LleParams& params, const SteadyStateOptions& options = {});

/// Circularly shifts the field so the intensity maximum sits on sample 0.
ComplexVector recenter(const ComplexVector& envelope);

}  // namespace dcesim::lle
