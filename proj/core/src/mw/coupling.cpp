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

#include "dcesim/mw/coupling.hpp"

#include <cmath>

#include "dcesim/mw/time_series.hpp"
#include "dcesim/util/periodic.hpp"

namespace dcesim::mw {

std::vector<RealMatrix> coupling_G(const ModeBasis& basis) {
  const long k_count = basis.samples();
  const int n_modes = basis.n_modes();
  if (k_count < 5) throw InvalidArgument("coupling: need at least 5 time samples");
  require_full_period(basis.times, basis.fundamental);
  const double dt = kTwoPi / basis.fundamental / static_cast<double>(k_count);

  std::vector<RealMatrix> rates;
  rates.reserve(static_cast<std::size_t>(n_modes));
  for (const auto& shapes : basis.shapes) rates.push_back(periodic_derivative_rows(shapes, dt));

  std::vector<RealMatrix> G(static_cast<std::size_t>(k_count), RealMatrix::Zero(n_modes, n_modes));
  for (long k = 0; k < k_count; ++k) {
    const RealVector w = basis.weight.row(k).transpose();
    for (int a = 0; a < n_modes; ++a) {
      const RealVector da = rates[static_cast<std::size_t>(a)].row(k).transpose();
      for (int b = 0; b < n_modes; ++b) {
        const double overlap =
            weighted_inner(w, da, basis.shapes[static_cast<std::size_t>(b)].row(k).transpose(), basis.radius_m);
        G[static_cast<std::size_t>(k)](a, b) = std::sqrt(basis.freqs(b, k) / basis.freqs(a, k)) * overlap;
      }
    }
  }
  return G;
}

RealMatrix frequency_derivatives(const ModeBasis& basis) {
  const long k_count = basis.samples();
  const double dt = kTwoPi / basis.fundamental / static_cast<double>(k_count);
  RealMatrix out(basis.n_modes(), k_count);
  for (int a = 0; a < basis.n_modes(); ++a)
    out.row(a) = periodic_derivative(basis.freqs.row(a).transpose(), dt).transpose();
  return out;
}

CouplingSeries assemble_CD(std::vector<RealMatrix> G, const RealMatrix& freqs, const RealMatrix& freq_derivatives) {
  const auto k_count = static_cast<long>(G.size());
  const auto n_modes = static_cast<int>(freqs.rows());
  if (freqs.cols() != k_count || freq_derivatives.rows() != n_modes || freq_derivatives.cols() != k_count)
    throw InvalidArgument("assemble_CD: frequency arrays do not match the coupling series");
  CouplingSeries out;
  out.freqs = freqs;
  out.freq_derivatives = freq_derivatives;
  for (long k = 0; k < k_count; ++k) {
    const RealMatrix& g = G[static_cast<std::size_t>(k)];
    if (g.rows() != n_modes || g.cols() != n_modes) throw InvalidArgument("assemble_CD: G has the wrong shape");
    RealMatrix rot = 0.5 * (g - g.transpose());
    RealMatrix d = -0.5 * (g + g.transpose());
    ComplexMatrix c = rot.cast<Complex>();
    for (int a = 0; a < n_modes; ++a) {
      d(a, a) += 0.5 * freq_derivatives(a, k) / freqs(a, k);
      c(a, a) += Complex(0.0, -freqs(a, k));
    }
    out.C.push_back(std::move(c));
    out.C_rot.push_back(std::move(rot));
    out.D.push_back(std::move(d));
  }
  out.G = std::move(G);
  return out;
}

CouplingSeries coupling_series(const ModeBasis& basis) {
  return assemble_CD(coupling_G(basis), basis.freqs, frequency_derivatives(basis));
}

RealVector element_series(const std::vector<RealMatrix>& series, int row, int col) {
  RealVector out(static_cast<Eigen::Index>(series.size()));
  for (std::size_t k = 0; k < series.size(); ++k) out[static_cast<Eigen::Index>(k)] = series[k](row, col);
  return out;
}

}  // namespace dcesim::mw
