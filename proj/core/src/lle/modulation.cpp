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

#include "dcesim/lle/modulation.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

#include "dcesim/util/parallel.hpp"
#include "dcesim/util/periodic.hpp"

namespace dcesim::lle {

void PhysicalParams::validate(int grid_points) const {
  if (!(ring_radius_m > 0.0)) throw InvalidArgument("ring_radius must be > 0");
  // 0 is accepted: it decouples the resonators.
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw InvalidArgument("overlap must lie in [0, 1]");
  if (!(base_index > 0.0) || !(group_index > 0.0)) throw InvalidArgument("indices must be > 0");
  if (!(loaded_q > 0.0)) throw InvalidArgument("loaded_q must be > 0");
  if (!(pump_wavelength_m > 0.0)) throw InvalidArgument("pump wavelength must be > 0");
  if (!(coupling_boost >= 0.0)) throw InvalidArgument("coupling_boost must be >= 0");
  if (mask.size() != 0) {
    if (mask.size() != grid_points) throw InvalidArgument("mask length does not match the angle grid");
    if (mask.minCoeff() < 0.0 || mask.maxCoeff() > 1.0) throw InvalidArgument("mask values must lie in [0, 1]");
  }
}

double PhysicalParams::pump_angular_frequency() const {
  return kTwoPi * constants::speed_of_light / pump_wavelength_m;
}

double PhysicalParams::optical_linewidth() const { return pump_angular_frequency() / loaded_q; }

double PhysicalParams::free_spectral_range_hz() const {
  return constants::speed_of_light / (kTwoPi * ring_radius_m * group_index);
}

RealVector PhysicalParams::mask_on(int grid_points) const {
  return mask.size() == 0 ? RealVector::Ones(grid_points) : mask;
}

RealVector arc_mask(int grid_points, double start_rad, double end_rad) {
  RealVector m = RealVector::Zero(grid_points);
  const auto wrap = [](double a) {
    a = std::fmod(a, kTwoPi);
    return a < 0.0 ? a + kTwoPi : a;
  };
  const double start = wrap(start_rad);
  const double end = wrap(end_rad);
  for (int j = 0; j < grid_points; ++j) {
    const double theta = grid_angle(j, grid_points);
    const bool inside = start <= end ? (theta >= start && theta < end) : (theta >= start || theta < end);
    if (inside) m[j] = 1.0;
  }
  return m;
}

CpIntensitySynthesizer::CpIntensitySynthesizer(const SolitonField& soliton) {
  std::vector<Complex> field(soliton.envelope.data(), soliton.envelope.data() + soliton.envelope.size());
  Eigen::FFT<double> fft;
  fft.fwd(spectrum_, field);
}

RealVector CpIntensitySynthesizer::at_shift(double shift) const {
  const int n = grid_points();
  std::vector<Complex> sum(n);
  for (int j = 0; j < n; ++j) {
    // S(theta - d) + S(theta + d)  <->  S_m (e^{-i m d} + e^{i m d})
    sum[j] = spectrum_[j] * (2.0 * std::cos(wavenumber(j, n) * shift));
  }
  std::vector<Complex> field;
  Eigen::FFT<double> fft;
  fft.inv(field, sum);
  RealVector intensity(n);
  for (int j = 0; j < n; ++j) intensity[j] = std::norm(field[j]);
  return intensity;
}

RealVector synthesize_cp_intensity(const SolitonField& soliton, double t, double fsr_hz) {
  if (soliton.envelope.size() != soliton.params.grid_points)
    throw InvalidArgument("synthesize_cp_intensity: envelope does not match its grid");
  return CpIntensitySynthesizer(soliton).at_shift(kTwoPi * fsr_hz * t);
}

RealVector kerr_index_profile(const RealVector& intensity, const PhysicalParams& params) {
  if (intensity.size() > 0 && intensity.minCoeff() < 0.0)
    throw InvalidArgument("kerr_index_profile: intensity must be non-negative");
  const double scale =
      params.coupling_boost * params.base_index * params.optical_linewidth() / (2.0 * params.pump_angular_frequency());
  return scale * intensity;
}

RealVector mw_index_profile(const RealVector& delta_n, const PhysicalParams& params, double n_mw) {
  const RealVector mask = params.mask_on(static_cast<int>(delta_n.size()));
  if (mask.size() != delta_n.size()) throw InvalidArgument("mw_index_profile: mask/grid mismatch");
  return (RealVector::Constant(delta_n.size(), n_mw).array() + params.overlap * mask.array() * delta_n.array())
      .matrix();
}

double optical_path_length(const RealVector& profile, double radius_m) {
  return radius_m * periodic_integral(profile);
}

double implied_kerr_intensity(double delta_n, const PhysicalParams& params) {
  return 2.0 * delta_n /
         (constants::vacuum_permittivity * params.base_index * params.nonlinear_index_m2_per_w *
          constants::speed_of_light);
}

ModulationProfile sample_modulation_period(const SolitonField& soliton, const PhysicalParams& params,
                                           double n_mw, int samples) {
  if (samples < 64 || samples % 2 != 0) throw InvalidArgument("sample_modulation_period: K must be even and >= 64");
  if (!(n_mw > 0.0)) throw InvalidArgument("sample_modulation_period: MW index must be > 0");
  const int n = soliton.params.grid_points;
  params.validate(n);
  const double fsr = params.free_spectral_range_hz();
  const double period = 1.0 / fsr;
  const CpIntensitySynthesizer synth(soliton);

  ModulationProfile profile;
  profile.fundamental = kTwoPi * fsr;
  profile.ring_radius_m = params.ring_radius_m;
  profile.times.resize(samples);
  profile.path_lengths.resize(samples);
  profile.index_profiles.resize(samples, n);
  parallel_for(samples, [&](long k) {
    const double t = period * static_cast<double>(k) / samples;
    // Omega t = 2 pi k / K exactly, independent of rounding in t.
    const double shift = kTwoPi * static_cast<double>(k) / samples;
    const RealVector index = mw_index_profile(kerr_index_profile(synth.at_shift(shift), params), params, n_mw);
    profile.times[k] = t;
    profile.index_profiles.row(k) = index.transpose();
    profile.path_lengths[k] = optical_path_length(index, params.ring_radius_m);
  });
  return profile;
}

}  // namespace dcesim::lle
