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

#include "dcesim/fock/evolution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace dcesim::fock {

PureEvolver::PureEvolver(const ComplexMatrix& H) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(H);
  if (eig.info() != Eigen::Success) throw NumericalError("pure evolution: eigendecomposition of H failed");
  energies_ = eig.eigenvalues();
  vectors_ = eig.eigenvectors();
}

ComplexVector PureEvolver::apply(const ComplexVector& psi0, double t) const {
  ComplexVector c = vectors_.adjoint() * psi0;
  for (Eigen::Index j = 0; j < c.size(); ++j) c[j] *= std::exp(Complex(0.0, -energies_[j] * t));
  return vectors_ * c;
}

std::vector<QuantumState> evolve_pure(const ComplexMatrix& H, const QuantumState& psi0, const RealVector& times) {
  if (!psi0.is_pure()) throw InvalidArgument("pure evolution: initial state must be pure");
  psi0.validate();
  if (H.rows() != psi0.space.dim) throw InvalidArgument("pure evolution: H does not match the state space");
  const PureEvolver evolver(H);
  std::vector<QuantumState> out;
  out.reserve(static_cast<std::size_t>(times.size()));
  for (double t : times) out.push_back(QuantumState::pure(psi0.space, evolver.apply(psi0.amplitudes, t), t));
  return out;
}

namespace {

// Dormand-Prince 5(4) tableau with Hairer's dense-output coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

class LindbladRhs {
 public:
  LindbladRhs(const ComplexMatrix& H, const std::vector<CollapseChannel>& channels, const FockSpace& space) {
    SparseMatrix h = H.sparseView(Complex(0.0), 0.0);
    SparseMatrix drift = Complex(0.0, -1.0) * h;
    for (const auto& ch : channels) {
      if (ch.mode < 0 || ch.mode >= space.n_modes) throw InvalidArgument("lindblad: channel mode out of range");
      if (!(ch.rate >= 0.0)) throw InvalidArgument("lindblad: decay rate must be >= 0");
      if (ch.rate == 0.0) continue;
      SparseMatrix c = std::sqrt(ch.rate) * ladder_operators(space, ch.mode).lower;
      drift = drift - SparseMatrix(0.5 * (SparseMatrix(c.adjoint()) * c));
      jumps_.push_back(std::move(c));
    }
    drift_ = std::move(drift);
  }

  // L rho + (L rho)^dag + sum C (C rho)^dag, valid for Hermitian rho.
  void operator()(const ComplexMatrix& rho, ComplexMatrix& out) const {
    out.noalias() = drift_ * rho;
    out += out.adjoint().eval();
    for (const auto& c : jumps_) {
      const ComplexMatrix crho = c * rho;
      out.noalias() += c * crho.adjoint();
    }
  }

 private:
  SparseMatrix drift_;
  std::vector<SparseMatrix> jumps_;
};

double error_norm(const ComplexMatrix& err, const ComplexMatrix& y0, const ComplexMatrix& y1, double rtol,
                  double atol) {
  double sum = 0.0;
  const Eigen::Index n = err.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double scale = atol + rtol * std::max(std::abs(y0.data()[i]), std::abs(y1.data()[i]));
    const double r = std::abs(err.data()[i]) / scale;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(n));
}

}  // namespace

std::vector<QuantumState> evolve_lindblad(const ComplexMatrix& H, const std::vector<CollapseChannel>& channels,
                                          const QuantumState& rho0, const RealVector& times,
                                          const LindbladOptions& options, LindbladStats* stats) {
  rho0.validate();
  const FockSpace& space = rho0.space;
  if (H.rows() != space.dim || H.cols() != space.dim) throw InvalidArgument("lindblad: H does not match the space");
  for (Eigen::Index i = 1; i < times.size(); ++i)
    if (!(times[i] >= times[i - 1])) throw InvalidArgument("lindblad: output times must be non-decreasing");

  const LindbladRhs rhs(H, channels, space);
  LindbladStats local;
  std::vector<QuantumState> out;
  out.reserve(static_cast<std::size_t>(times.size()));
  if (times.size() == 0) return out;

  const Eigen::Index dim = space.dim;
  double t = std::min(0.0, times[0]);
  ComplexMatrix y = rho0.density_matrix();
  const double t_end = times[times.size() - 1];
  const double window = std::max(t_end - t, 1e-300);

  std::array<ComplexMatrix, 7> k;
  for (auto& m : k) m.resize(dim, dim);
  ComplexMatrix stage(dim, dim), y_new(dim, dim), err(dim, dim);
  rhs(y, k[0]);
  ++local.rhs_evaluations;

  double h = options.initial_step;
  if (!(h > 0.0)) {
    const double d0 = y.norm(), d1n = k[0].norm();
    h = (d1n > 0.0 && d0 > 0.0) ? 0.01 * d0 / d1n : 1e-6 * window;
    h = std::min(h, window);
  }

  Eigen::Index next = 0;
  const auto emit = [&](const ComplexMatrix& rho, double at) {
    ComplexMatrix sym = 0.5 * (rho + rho.adjoint());
    out.push_back(QuantumState::density(space, std::move(sym), at));
  };
  while (next < times.size() && times[next] <= t) emit(y, times[next++]);

  long steps = 0;
  while (next < times.size()) {
    if (++steps > options.max_steps) {
      std::ostringstream msg;
      msg << "lindblad: exceeded " << options.max_steps << " steps at t = " << t << " s (h = " << h << " s)";
      throw StiffnessError(msg.str());
    }
    if (h < options.min_step_ratio * window) {
      std::ostringstream msg;
      msg << "lindblad: step size underflow (h = " << h << " s at t = " << t << " s, " << local.accepted
          << " accepted / " << local.rejected << " rejected steps)";
      throw StiffnessError(msg.str());
    }
    const double hs = std::min(h, t_end - t);

    stage = y + hs * a21 * k[0];
    rhs(stage, k[1]);
    stage = y + hs * (a31 * k[0] + a32 * k[1]);
    rhs(stage, k[2]);
    stage = y + hs * (a41 * k[0] + a42 * k[1] + a43 * k[2]);
    rhs(stage, k[3]);
    stage = y + hs * (a51 * k[0] + a52 * k[1] + a53 * k[2] + a54 * k[3]);
    rhs(stage, k[4]);
    stage = y + hs * (a61 * k[0] + a62 * k[1] + a63 * k[2] + a64 * k[3] + a65 * k[4]);
    rhs(stage, k[5]);
    y_new = y + hs * (a71 * k[0] + a73 * k[2] + a74 * k[3] + a75 * k[4] + a76 * k[5]);
    rhs(y_new, k[6]);
    local.rhs_evaluations += 6;
    err = hs * (e1 * k[0] + e3 * k[2] + e4 * k[3] + e5 * k[4] + e6 * k[5] + e7 * k[6]);
    const double e = error_norm(err, y, y_new, options.rtol, options.atol);
    if (!std::isfinite(e)) throw StiffnessError("lindblad: non-finite error estimate at t = " + std::to_string(t));

    if (e <= 1.0) {
      const double t_new = t + hs;
      if (next < times.size() && times[next] <= t_new) {
        const ComplexMatrix ydiff = y_new - y;
        const ComplexMatrix bspl = hs * k[0] - ydiff;
        const ComplexMatrix r4 = ydiff - hs * k[6] - bspl;
        const ComplexMatrix r5 = hs * (d1 * k[0] + d3 * k[2] + d4 * k[3] + d5 * k[4] + d6 * k[5] + d7 * k[6]);
        while (next < times.size() && times[next] <= t_new) {
          const double theta = (times[next] - t) / hs;
          const double theta1 = 1.0 - theta;
          const ComplexMatrix value = y + theta * (ydiff + theta1 * (bspl + theta * (r4 + theta1 * r5)));
          emit(value, times[next++]);
        }
      }
      y.swap(y_new);
      k[0].swap(k[6]);
      t = t_new;
      ++local.accepted;
    } else {
      ++local.rejected;
    }
    const double factor = e == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
    const double proposed = hs * (e <= 1.0 ? factor : std::min(factor, 1.0));
    // a step clipped to the window end says nothing about the natural step size
    h = (hs < h && e <= 1.0) ? std::max(h, proposed) : proposed;
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace dcesim::fock
