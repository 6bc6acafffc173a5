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

#include "dcesim/mw/rwa.hpp"

#include <cmath>
#include <sstream>

#include "../util/json_support.hpp"
#include "dcesim/mw/time_series.hpp"

namespace dcesim::mw {

using io::Json;
using io::complex_matrix_from_json;
using io::complex_matrix_to_json;
using io::real_vector_from_json;
using io::real_vector_to_json;

double hermiticity_deviation(const ComplexMatrix& A, const ComplexMatrix& B) {
  const double scale = A.norm() + B.norm();
  if (scale == 0.0) return 0.0;
  return ((A + A.adjoint()).norm() + (B - B.transpose()).norm()) / scale;
}

RwaHamiltonian rwa_hamiltonian(const CouplingSeries& coeffs, const RealVector& times, double fundamental,
                               const std::vector<int>& harmonics, const RwaOptions& options) {
  const int n = coeffs.n_modes();
  if (static_cast<int>(harmonics.size()) != n) throw InvalidArgument("rwa: one harmonic number per mode required");
  if (times.size() != coeffs.samples()) throw InvalidArgument("rwa: time grid does not match the coupling series");
  require_full_period(times, fundamental);

  RwaHamiltonian h;
  h.fundamental = fundamental;
  h.harmonics = harmonics;
  h.time_samples = coeffs.samples();
  h.mode_freqs.resize(n);
  h.static_detuning.resize(n);
  for (int k = 0; k < n; ++k) {
    const double nominal = harmonics[static_cast<std::size_t>(k)] * fundamental;
    const double mean = coeffs.freqs.row(k).mean();
    h.mode_freqs[k] = nominal;
    h.static_detuning[k] = mean - nominal;
    if (std::abs(mean / nominal - 1.0) > options.ladder_tolerance) {
      std::ostringstream msg;
      msg << "rwa: mode " << k << " has mean frequency " << mean << " rad/s, off the nominal ladder " << nominal
          << " rad/s by more than " << options.ladder_tolerance * 100.0 << "%";
      throw AssemblyError(msg.str());
    }
  }

  const auto span_of = [](const RealVector& v) {
    return std::span<const double>(v.data(), static_cast<std::size_t>(v.size()));
  };
  h.beamsplitter = ComplexMatrix::Zero(n, n);
  h.pair = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const int hk = harmonics[static_cast<std::size_t>(k)];
      const int hl = harmonics[static_cast<std::size_t>(l)];
      const RealVector c = element_series(coeffs.C_rot, k, l);
      const RealVector d = element_series(coeffs.D, k, l);
      h.beamsplitter(k, l) = fourier_coefficient(span_of(c), times, fundamental, hl - hk);
      h.pair(k, l) = fourier_coefficient(span_of(d), times, fundamental, -(hk + hl));
    }

  h.hermiticity_deviation = hermiticity_deviation(h.beamsplitter, h.pair);
  if (h.hermiticity_deviation > options.hermiticity_tolerance) {
    std::ostringstream msg;
    msg << "rwa: Hermiticity deviation " << h.hermiticity_deviation << " exceeds " << options.hermiticity_tolerance
        << " (gauge or sampling fault)";
    throw AssemblyError(msg.str());
  }
  h.beamsplitter = (0.5 * (h.beamsplitter - h.beamsplitter.adjoint())).eval();
  h.pair = (0.5 * (h.pair + h.pair.transpose())).eval();
  return h;
}

std::string to_json_text(const RwaHamiltonian& h) {
  Json j;
  j["fundamental_rad_per_s"] = h.fundamental;
  j["harmonics"] = h.harmonics;
  j["mode_freqs_rad_per_s"] = real_vector_to_json(h.mode_freqs);
  j["static_detuning_rad_per_s"] = real_vector_to_json(h.static_detuning);
  j["beamsplitter_per_s"] = complex_matrix_to_json(h.beamsplitter);
  j["pair_per_s"] = complex_matrix_to_json(h.pair);
  j["hermiticity_deviation"] = h.hermiticity_deviation;
  j["time_samples"] = h.time_samples;
  j["grid_points"] = h.grid_points;
  j["galerkin_harmonics"] = h.galerkin_harmonics;
  j["coupling_boost"] = h.coupling_boost;
  return j.dump(2) + "\n";
}

RwaHamiltonian rwa_from_json_text(const std::string& text) {
  RwaHamiltonian h;
  try {
    const Json j = Json::parse(text);
    h.fundamental = j.at("fundamental_rad_per_s").get<double>();
    h.harmonics = j.at("harmonics").get<std::vector<int>>();
    h.mode_freqs = real_vector_from_json(j.at("mode_freqs_rad_per_s"));
    h.static_detuning = real_vector_from_json(j.at("static_detuning_rad_per_s"));
    h.beamsplitter = complex_matrix_from_json(j.at("beamsplitter_per_s"));
    h.pair = complex_matrix_from_json(j.at("pair_per_s"));
    h.hermiticity_deviation = j.at("hermiticity_deviation").get<double>();
    h.time_samples = j.at("time_samples").get<long>();
    h.grid_points = j.value("grid_points", 0L);
    h.galerkin_harmonics = j.value("galerkin_harmonics", 0);
    h.coupling_boost = j.value("coupling_boost", 1.0);
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("rwa document: ") + e.what());
  }
  const int n = h.n_modes();
  if (h.pair.rows() != n || h.pair.cols() != n || h.beamsplitter.cols() != n ||
      static_cast<int>(h.harmonics.size()) != n || h.mode_freqs.size() != n)
    throw InvalidArgument("rwa document: inconsistent matrix shapes");
  return h;
}

}  // namespace dcesim::mw
