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

#include "dcesim/lle/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "dcesim/util/periodic.hpp"

namespace dcesim::lle {
namespace {

// Strang splitting with merged half steps: L(h/2) [N(h) L(h)]... N(h) L(h/2).
class SplitStepper {
 public:
  SplitStepper(const LleParams& params, double h)
      : n_(params.grid_points), pump_(params.pump()), half_(n_), full_(n_), buffer_(n_), spectrum_(n_) {
    const Complex damping(1.0, params.detuning);
    for (int j = 0; j < n_; ++j) {
      const double m = wavenumber(j, n_);
      const Complex rate = -damping - Complex(0.0, 0.5 * params.dispersion * m * m);
      half_[j] = std::exp(rate * (0.5 * h));
      full_[j] = std::exp(rate * h);
    }
    // Exact response of the k = 0 mode to the uniform pump over one sub-step.
    const Complex rate0 = -damping;
    half_drive_ = static_cast<double>(n_) * pump_ * (half_[0] - 1.0) / rate0;
    full_drive_ = static_cast<double>(n_) * pump_ * (full_[0] - 1.0) / rate0;
    h_ = h;
  }

  void run(ComplexVector& psi, long steps, double cap) {
    std::copy(psi.data(), psi.data() + n_, buffer_.begin());
    fft_.fwd(spectrum_, buffer_);
    linear(true);
    for (long s = 0; s < steps; ++s) {
      fft_.inv(buffer_, spectrum_);
      double peak = 0.0;
      for (auto& value : buffer_) {
        const double intensity = std::norm(value);
        peak = std::max(peak, intensity);
        value *= std::polar(1.0, intensity * h_);
      }
      if (!(peak <= cap)) {
        std::ostringstream msg;
        msg << "LLE integration diverged at step " << s << " (max |psi|^2 = " << peak << ", cap " << cap << ")";
        throw DivergedError(msg.str(), s);
      }
      fft_.fwd(spectrum_, buffer_);
      linear(s + 1 == steps);
    }
    fft_.inv(buffer_, spectrum_);
    std::copy(buffer_.begin(), buffer_.end(), psi.data());
  }

 private:
  void linear(bool half) {
    const auto& factor = half ? half_ : full_;
    for (int j = 0; j < n_; ++j) spectrum_[j] *= factor[j];
    spectrum_[0] += half ? half_drive_ : full_drive_;
  }

  int n_;
  double pump_;
  double h_ = 0.0;
  std::vector<Complex> half_, full_;
  Complex half_drive_, full_drive_;
  std::vector<Complex> buffer_, spectrum_;
  Eigen::FFT<double> fft_;
};

double contrast(const ComplexVector& psi) {
  const RealVector intensity = psi.cwiseAbs2();
  const double peak = intensity.maxCoeff();
  return peak > 0.0 ? (peak - intensity.minCoeff()) / peak : 0.0;
}

}  // namespace

void LleParams::validate() const {
  if (!(pump_strength_sq >= 0.0) || !std::isfinite(pump_strength_sq))
    throw InvalidArgument("LLE: pump_strength_sq must be finite and >= 0");
  if (!(dispersion > 0.0)) throw InvalidArgument("LLE: dispersion must be > 0 (anomalous regime)");
  if (grid_points < 256 || !is_power_of_two(grid_points))
    throw InvalidArgument("LLE: grid_points must be a power of two >= 256");
  if (!(step > 0.0)) throw InvalidArgument("LLE: step must be > 0");
  if (!std::isfinite(detuning)) throw InvalidArgument("LLE: detuning must be finite");
}

double LleParams::pump() const { return std::sqrt(pump_strength_sq); }

double optical_linewidth(double loaded_q, double pump_wavelength_m) {
  const double omega_p = kTwoPi * constants::speed_of_light / pump_wavelength_m;
  return omega_p / loaded_q;
}

double normalized_dispersion(double d2_over_2pi_hz, double loaded_q, double pump_wavelength_m) {
  return 2.0 * kTwoPi * d2_over_2pi_hz / optical_linewidth(loaded_q, pump_wavelength_m);
}

double SolitonField::peak_intensity() const { return envelope.cwiseAbs2().maxCoeff(); }

double SolitonField::energy() const { return periodic_integral(envelope.cwiseAbs2()); }

double SolitonField::pump_work() const {
  return params.pump() * periodic_integral(envelope.real());
}

double SolitonField::power_balance_error() const {
  const double e = energy();
  return std::abs(e - pump_work()) / e;
}

std::vector<double> homogeneous_intensities(double pump_strength_sq, double detuning) {
  // rho^3 - 2 alpha rho^2 + (1 + alpha^2) rho - F^2 = 0
  const double a2 = -2.0 * detuning;
  const double a1 = 1.0 + detuning * detuning;
  const double a0 = -pump_strength_sq;
  Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
  companion(0, 0) = -a2;
  companion(0, 1) = -a1;
  companion(0, 2) = -a0;
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  const Eigen::Vector3cd roots = Eigen::EigenSolver<Eigen::Matrix3d>(companion, false).eigenvalues();
  const auto cubic = [&](double r) { return ((r + a2) * r + a1) * r + a0; };
  const auto slope = [&](double r) { return (3.0 * r + 2.0 * a2) * r + a1; };
  const double scale = 1.0 + std::abs(detuning) + pump_strength_sq;
  std::vector<double> real_roots;
  for (const Complex& root : roots) {
    if (std::abs(root.imag()) > 1e-7 * scale) continue;
    double r = root.real();
    for (int it = 0; it < 4; ++it) {
      const double d = slope(r);
      if (d == 0.0) break;
      r -= cubic(r) / d;
    }
    if (r >= 0.0) real_roots.push_back(r);
  }
  std::sort(real_roots.begin(), real_roots.end());
  real_roots.erase(std::unique(real_roots.begin(), real_roots.end(),
                               [&](double x, double y) { return std::abs(x - y) < 1e-9 * scale; }),
                   real_roots.end());
  return real_roots;
}

Complex homogeneous_field(double pump_strength_sq, double detuning, double intensity) {
  return std::sqrt(pump_strength_sq) / Complex(1.0, detuning - intensity);
}

double soliton_existence_limit(double pump_strength_sq) { return kPi * kPi * pump_strength_sq / 8.0; }

SolitonField flat_state(const LleParams& params, Complex value) {
  params.validate();
  SolitonField field;
  field.params = params;
  field.envelope = ComplexVector::Constant(params.grid_points, value);
  return field;
}

SolitonField sech_seed(const LleParams& params) {
  params.validate();
  const auto roots = homogeneous_intensities(params.pump_strength_sq, params.detuning);
  const Complex background =
      roots.empty() ? Complex(0.0) : homogeneous_field(params.pump_strength_sq, params.detuning, roots.front());
  SolitonField field = flat_state(params, background);
  if (params.detuning <= 0.0) return field;
  const double amplitude = std::sqrt(2.0 * params.detuning);
  const double inverse_width = std::sqrt(2.0 * params.detuning / params.dispersion);
  for (int j = 0; j < params.grid_points; ++j)
    field.envelope[j] += amplitude / std::cosh(inverse_width * wrapped_angle(j, params.grid_points));
  return field;
}

SolitonField evolve_lle(const SolitonField& state, double duration, double divergence_cap) {
  state.params.validate();
  if (state.envelope.size() != state.params.grid_points)
    throw InvalidArgument("evolve_lle: envelope size does not match grid_points");
  if (!(duration >= 0.0)) throw InvalidArgument("evolve_lle: duration must be >= 0");
  SolitonField out = state;
  out.steady = false;
  if (duration == 0.0) return out;
  const long steps = std::max(1L, static_cast<long>(std::ceil(duration / state.params.step - 1e-9)));
  SplitStepper stepper(state.params, duration / static_cast<double>(steps));
  stepper.run(out.envelope, steps, divergence_cap);
  return out;
}

ComplexVector recenter(const ComplexVector& envelope) {
  Eigen::Index peak = 0;
  envelope.cwiseAbs2().maxCoeff(&peak);
  ComplexVector out(envelope.size());
  const Eigen::Index n = envelope.size();
  for (Eigen::Index j = 0; j < n; ++j) out[j] = envelope[(j + peak) % n];
  return out;
}

SolitonField find_steady_soliton(const LleParams& params, const SteadyStateOptions& options) {
  params.validate();
  SolitonField field = sech_seed(params);
  if (params.detuning > soliton_existence_limit(params.pump_strength_sq)) {
    std::ostringstream msg;
    msg << "detuning " << params.detuning << " exceeds the single-soliton existence limit pi^2 F^2 / 8 = "
        << soliton_existence_limit(params.pump_strength_sq);
    field.warnings.push_back(msg.str());
  }
  if (contrast(field.envelope) < options.flat_contrast)
    throw NoSolitonError("no bright soliton: the seed has no contrast over the homogeneous background");

  const double dtheta = kTwoPi / params.grid_points;
  RealVector previous = field.envelope.cwiseAbs();
  double residual = std::numeric_limits<double>::infinity();
  for (double elapsed = 0.0; elapsed < options.max_time; elapsed += options.check_interval) {
    field = evolve_lle(field, options.check_interval, options.divergence_cap);
    field.envelope = recenter(field.envelope);
    const RealVector magnitude = field.envelope.cwiseAbs();
    residual = std::sqrt((magnitude - previous).squaredNorm() * dtheta) / options.check_interval;
    field.residual = residual;
    if (contrast(field.envelope) < options.flat_contrast) {
      std::ostringstream msg;
      msg << "no bright soliton: field relaxed to the homogeneous state after tau = "
          << elapsed + options.check_interval;
      throw NoSolitonError(msg.str());
    }
    if (residual < options.tolerance) {
      field.steady = true;
      return field;
    }
    previous = magnitude;
  }
  std::ostringstream msg;
  msg << "soliton search did not converge within tau = " << options.max_time << " (residual " << residual << ")";
  throw ConvergenceError(msg.str(), residual);
}

}  // namespace dcesim::lle
