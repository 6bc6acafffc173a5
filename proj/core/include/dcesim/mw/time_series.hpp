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

#include <span>
#include <vector>

#include "dcesim/common.hpp"

namespace dcesim::mw {

/// Fourth-order centered derivative of a periodic, uniformly sampled series:
/// (-x[k+2] + 8 x[k+1] - 8 x[k-1] + x[k-2]) / (12 dt).
RealVector periodic_derivative(const RealVector& series, double dt);

/// Same stencil applied down each column (rows are time samples).
RealMatrix periodic_derivative_rows(const RealMatrix& series, double dt);

/// Checks that `times` is t_k = k T / K with T = 2 pi / fundamental.
void require_full_period(const RealVector& times, double fundamental);

/// X^(mu) = (1/K) sum_k X(t_k) exp(-i mu omega_0 t_k) for each requested order.
/// Throws AliasingError when |mu| >= K/2.
std::vector<Complex> fourier_coefficients(std::span<const double> series, const RealVector& times,
                                          double fundamental, std::span<const int> orders);
std::vector<Complex> fourier_coefficients(std::span<const Complex> series, const RealVector& times,
                                          double fundamental, std::span<const int> orders);

Complex fourier_coefficient(std::span<const double> series, const RealVector& times, double fundamental,
                            int order);

}  // namespace dcesim::mw
