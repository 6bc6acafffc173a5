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

#include "dcesim/mw/time_series.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace dcesim::mw {
namespace {

template <typename T>
std::vector<Complex> coefficients(std::span<const T> series, const RealVector& times, double fundamental,
                                  std::span<const int> orders) {
  const auto k_count = static_cast<long>(series.size());
  if (k_count != times.size()) throw InvalidArgument("fourier_coefficients: series/times length mismatch");
  require_full_period(times, fundamental);
  std::vector<Complex> out;
  out.reserve(orders.size());
  for (int mu : orders) {
    if (2L * std::abs(mu) >= k_count) {
      std::ostringstream msg;
      msg << "Fourier order " << mu << " aliases on " << k_count << " samples (need |mu| < K/2)";
      throw AliasingError(msg.str());
    }
    Complex sum(0.0);
    for (long k = 0; k < k_count; ++k) {
      // omega_0 t_k = 2 pi k / K on the uniform grid; use the exact phase.
      const double phase = -kTwoPi * static_cast<double>((static_cast<long>(mu) * k) % k_count) / k_count;
      sum += Complex(series[static_cast<std::size_t>(k)]) * std::polar(1.0, phase);
    }
    out.push_back(sum / static_cast<double>(k_count));
  }
  return out;
}

}  // namespace

RealVector periodic_derivative(const RealVector& series, double dt) {
  const Eigen::Index n = series.size();
  if (n < 5) throw InvalidArgument("periodic_derivative: need at least 5 samples");
  RealVector out(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto at = [&](Eigen::Index offset) { return series[(k + offset + n) % n]; };
    out[k] = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * dt);
  }
  return out;
}

RealMatrix periodic_derivative_rows(const RealMatrix& series, double dt) {
  const Eigen::Index n = series.rows();
  if (n < 5) throw InvalidArgument("periodic_derivative_rows: need at least 5 samples");
  RealMatrix out(n, series.cols());
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto row = [&](Eigen::Index offset) { return series.row((k + offset + n) % n); };
    out.row(k) = (-row(2) + 8.0 * row(1) - 8.0 * row(-1) + row(-2)) / (12.0 * dt);
  }
  return out;
}

void require_full_period(const RealVector& times, double fundamental) {
  if (!(fundamental > 0.0)) throw InvalidArgument("fundamental frequency must be > 0");
  const long k_count = times.size();
  if (k_count < 2) throw InvalidArgument("need at least two time samples");
  const double period = kTwoPi / fundamental;
  for (long k = 0; k < k_count; ++k) {
    const double expected = period * static_cast<double>(k) / k_count;
    if (std::abs(times[k] - expected) > 1e-9 * period)
      throw InvalidArgument("time samples must be uniform over exactly one period");
  }
}

std::vector<Complex> fourier_coefficients(std::span<const double> series, const RealVector& times,
                                          double fundamental, std::span<const int> orders) {
  return coefficients(series, times, fundamental, orders);
}

std::vector<Complex> fourier_coefficients(std::span<const Complex> series, const RealVector& times,
                                          double fundamental, std::span<const int> orders) {
  return coefficients(series, times, fundamental, orders);
}

Complex fourier_coefficient(std::span<const double> series, const RealVector& times, double fundamental,
                            int order) {
  const int orders[] = {order};
  return coefficients(series, times, fundamental, std::span<const int>(orders)).front();
}

}  // namespace dcesim::mw
