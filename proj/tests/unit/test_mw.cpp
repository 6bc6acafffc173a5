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


#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dcesim/lle/modulation.hpp"
#include "dcesim/mw/coupling.hpp"
#include "dcesim/mw/modes.hpp"
#include "dcesim/mw/rwa.hpp"
#include "dcesim/mw/time_series.hpp"
#include "dcesim/util/periodic.hpp"

namespace dcesim::mw {
namespace {

constexpr double kRadius = 200e-6;
constexpr double kIndex = 2.1;
constexpr double kC = constants::speed_of_light;

double fundamental() { return kC / (kIndex * kRadius); }

// Smooth even bump with content at every harmonic.
double bump(double theta) { return std::exp(4.0 * std::cos(theta)) / std::exp(4.0); }

// n(theta, t) = n0 + eps (1 + cos(2 w0 t)) bump(theta) / 2, sampled over one period.
lle::ModulationProfile breathing_profile(double eps, int samples = 256, int grid = 256) {
  lle::ModulationProfile p;
  p.fundamental = fundamental();
  p.ring_radius_m = kRadius;
  p.times.resize(samples);
  p.index_profiles.resize(samples, grid);
  p.path_lengths.resize(samples);
  for (int k = 0; k < samples; ++k) {
    p.times[k] = p.period() * k / samples;
    const double g = 0.5 * (1.0 + std::cos(2.0 * p.fundamental * p.times[k]));
    for (int j = 0; j < grid; ++j) p.index_profiles(k, j) = kIndex + eps * g * bump(grid_angle(j, grid));
    p.path_lengths[k] = lle::optical_path_length(p.index_profiles.row(k).transpose(), kRadius);
  }
  return p;
}

TEST(Modes, UniformRingHasIntegerLadder) {
  const auto doublets = solve_doublets(RealVector::Constant(256, kIndex), kRadius, 3);
  ASSERT_EQ(doublets.size(), 3u);
  for (int h = 1; h <= 3; ++h) {
    const auto& d = doublets[h - 1];
    const double expected = h * kC / (kIndex * kRadius);
    EXPECT_EQ(d.harmonic, h);
    EXPECT_NEAR(d.symmetric.freq, expected, 1e-12 * expected);
    EXPECT_NEAR(d.antisymmetric.freq, expected, 1e-12 * expected);
    EXPECT_EQ(d.symmetric.parity, Parity::even);
    EXPECT_EQ(d.antisymmetric.parity, Parity::odd);
  }
}

TEST(Modes, DoubletSplittingMatchesFirstOrderPerturbation) {
  // n^2 = n0^2 + eps cos(2 h theta) shifts the cos member by +eps/2 and the sin
  // member by -eps/2 in the effective n^2.
  const int grid = 256;
  const double eps = 1e-5;
  for (int h = 1; h <= 3; ++h) {
    RealVector prof(grid);
    for (int j = 0; j < grid; ++j) prof[j] = std::sqrt(kIndex * kIndex + eps * std::cos(2 * h * grid_angle(j, grid)));
    const auto d = solve_doublets(prof, kRadius, 3)[h - 1];
    const double cos_member = h * kC / (kRadius * std::sqrt(kIndex * kIndex + eps / 2));
    const double sin_member = h * kC / (kRadius * std::sqrt(kIndex * kIndex - eps / 2));
    EXPECT_NEAR(d.symmetric.freq, cos_member, 1e-10 * cos_member) << "h=" << h;
    EXPECT_NEAR(d.antisymmetric.freq, sin_member, 1e-10 * sin_member) << "h=" << h;
  }
}

TEST(Modes, ShapesAreWeightedOrthonormal) {
  const int grid = 256;
  RealVector prof(grid);
  for (int j = 0; j < grid; ++j) prof[j] = kIndex + 0.01 * bump(grid_angle(j, grid) - 0.3);
  const auto doublets = solve_doublets(prof, kRadius, 3);
  std::vector<RealVector> shapes;
  for (const auto& d : doublets) {
    shapes.push_back(d.symmetric.shape);
    shapes.push_back(d.antisymmetric.shape);
  }
  const RealVector w = prof.array().square();
  for (std::size_t a = 0; a < shapes.size(); ++a)
    for (std::size_t b = 0; b < shapes.size(); ++b)
      EXPECT_NEAR(weighted_inner(w, shapes[a], shapes[b], kRadius), a == b ? 1.0 : 0.0, 1e-10);
}

TEST(Modes, SolverRejectsTooFewGridPoints) {
  EXPECT_THROW(solve_doublets(RealVector::Constant(64, kIndex), kRadius, 3, {.galerkin_harmonics = 32}),
               InvalidArgument);
}

TEST(Modes, DoubletMeanFollowsPathLength) {
  // To first order the doublet-averaged frequency tracks -dL/L; single members
  // also feel the 2h-th harmonic of the perturbation.
  const auto profile = breathing_profile(1e-4, 64);
  const long K = profile.samples();
  RealVector mean_freq(K);
  for (long k = 0; k < K; ++k) {
    const auto d = solve_doublets(profile.index_profiles.row(k).transpose(), kRadius, 1)[0];
    mean_freq[k] = 0.5 * (d.symmetric.freq + d.antisymmetric.freq);
  }
  const double wbar = mean_freq.mean();
  const double lbar = profile.path_lengths.mean();
  double scale = 0.0, err = 0.0;
  for (long k = 0; k < K; ++k) {
    const double expected = -(profile.path_lengths[k] - lbar) / lbar;
    scale = std::max(scale, std::abs(expected));
    err = std::max(err, std::abs((mean_freq[k] - wbar) / wbar - expected));
  }
  ASSERT_GT(scale, 0.0);
  EXPECT_LT(err, 0.01 * scale);
}

TEST(Basis, StaticProfileHasNoCoupling) {
  const auto profile = breathing_profile(0.0, 64);
  const auto basis = build_mode_basis(profile, 3, DoubletPolicy::strongest_drive);
  EXPECT_LT(orthonormality_deviation(basis), 1e-10);
  const auto series = coupling_series(basis);
  for (const auto& G : series.G) EXPECT_LT(G.cwiseAbs().maxCoeff(), 1e-12 * profile.fundamental);
  const auto rwa = rwa_hamiltonian(series, profile.times, profile.fundamental, basis.harmonics);
  EXPECT_LT(rwa.beamsplitter.cwiseAbs().maxCoeff(), 1e-12 * profile.fundamental);
  EXPECT_LT(rwa.pair.cwiseAbs().maxCoeff(), 1e-12 * profile.fundamental);
}

TEST(Basis, LogFrequencyRateMatchesAnalyticOverlap) {
  const double eps = 1e-3;
  const auto profile = breathing_profile(eps);
  const auto basis = build_mode_basis(profile, 3, DoubletPolicy::symmetric);
  const auto series = coupling_series(basis);
  const long K = basis.samples();
  const long N = basis.grid_points();
  const double w0 = profile.fundamental;
  for (int m = 0; m < 3; ++m) {
    double scale = 0.0, err_g = 0.0, err_fd = 0.0;
    for (long k = 0; k < K; ++k) {
      // d(n^2)/dt from the closed form of the profile.
      const double t = basis.times[k];
      const double dg = -w0 * std::sin(2.0 * w0 * t);
      RealVector dn2(N);
      for (long j = 0; j < N; ++j) dn2[j] = 2.0 * profile.index_profiles(k, j) * eps * dg * bump(grid_angle(j, N));
      const RealVector psi = basis.shapes[m].row(k).transpose();
      const double oracle = -0.5 * weighted_inner(dn2, psi, psi, kRadius);
      scale = std::max(scale, std::abs(oracle));
      err_g = std::max(err_g, std::abs(series.G[k](m, m) - oracle));
      err_fd = std::max(err_fd, std::abs(series.freq_derivatives(m, k) / series.freqs(m, k) - oracle));
    }
    ASSERT_GT(scale, 0.0);
    EXPECT_LT(err_g, 1e-5 * scale) << "mode " << m;
    EXPECT_LT(err_fd, 1e-5 * scale) << "mode " << m;
  }
}

TEST(Basis, CouplingMatricesHaveStructure) {
  const auto profile = breathing_profile(1e-3, 128);
  const auto series = coupling_series(build_mode_basis(profile, 3, DoubletPolicy::strongest_drive));
  for (long k = 0; k < series.samples(); ++k) {
    EXPECT_LT((series.C_rot[k] + series.C_rot[k].transpose()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((series.D[k] - series.D[k].transpose()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Basis, PairCouplingScalesLinearlyWithModulationDepth) {
  const auto rwa_at = [](double eps) {
    const auto profile = breathing_profile(eps, 128);
    const auto basis = build_mode_basis(profile, 3, DoubletPolicy::symmetric);
    return rwa_hamiltonian(coupling_series(basis), profile.times, profile.fundamental, basis.harmonics);
  };
  const auto a = rwa_at(1e-4);
  const auto b = rwa_at(2e-4);
  ASSERT_GT(std::abs(a.pair(0, 0)), 0.0);
  EXPECT_NEAR(std::abs(b.pair(0, 0)) / std::abs(a.pair(0, 0)), 2.0, 1e-3);
  EXPECT_LT(a.hermiticity_deviation, 1e-10);
}

TEST(Basis, GaugeRepairsSignFlips) {
  const auto profile = breathing_profile(1e-3, 64);
  const auto basis = build_mode_basis(profile, 3, DoubletPolicy::symmetric);
  auto broken = basis;
  broken.shapes[1].row(10) *= -1.0;
  broken.shapes[2].row(0) *= -1.0;
  const auto fixed = fix_gauge(broken);
  for (int m = 0; m < 3; ++m) EXPECT_LT((fixed.shapes[m] - basis.shapes[m]).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_GT(min_consecutive_overlap(fixed), 0.99);
}

TEST(Basis, GaugeRejectsUnresolvedJump) {
  const auto profile = breathing_profile(1e-3, 64);
  auto basis = build_mode_basis(profile, 3, DoubletPolicy::symmetric);
  basis.shapes[0].row(20) = basis.shapes[1].row(20);
  EXPECT_THROW(fix_gauge(basis), TimeResolutionError);
}

TEST(TimeSeries, FourierCoefficientsMatchDftOracle) {
  const int K = 64;
  const double w0 = 3.0;
  RealVector t(K);
  std::vector<double> x(K);
  for (int k = 0; k < K; ++k) {
    t[k] = kTwoPi / w0 * k / K;
    x[k] = std::cos(2.0 * w0 * t[k]) + 0.3 * std::sin(5.0 * w0 * t[k]) + 0.1;
  }
  EXPECT_NEAR(std::abs(fourier_coefficient(x, t, w0, 2) - Complex(0.5, 0.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(fourier_coefficient(x, t, w0, -2) - Complex(0.5, 0.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(fourier_coefficient(x, t, w0, 0) - Complex(0.1, 0.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(fourier_coefficient(x, t, w0, 5) - Complex(0.0, -0.15)), 0.0, 1e-14);
  const std::vector<int> orders{-7, -1, 3, 31};
  const auto got = fourier_coefficients(std::span<const double>(x), t, w0, orders);
  for (std::size_t i = 0; i < orders.size(); ++i) {
    Complex oracle = 0.0;
    for (int k = 0; k < K; ++k) oracle += x[k] * std::polar(1.0, -kTwoPi * orders[i] * k / K);
    EXPECT_NEAR(std::abs(got[i] - oracle / double(K)), 0.0, 1e-14);
  }
  EXPECT_THROW(fourier_coefficient(x, t, w0, 32), AliasingError);
  EXPECT_THROW(fourier_coefficient(x, t, w0, -40), AliasingError);
}

TEST(TimeSeries, DerivativeIsFourthOrder) {
  const auto error_at = [](int K) {
    const double dt = kTwoPi / K;
    RealVector x(K);
    for (int k = 0; k < K; ++k) x[k] = std::sin(3.0 * k * dt);
    const RealVector d = periodic_derivative(x, dt);
    double err = 0.0;
    for (int k = 0; k < K; ++k) err = std::max(err, std::abs(d[k] - 3.0 * std::cos(3.0 * k * dt)));
    return err;
  };
  const double ratio = error_at(64) / error_at(128);
  EXPECT_NEAR(ratio, 16.0, 0.5);
}

TEST(Rwa, TrivialCouplingGivesFreeRotation) {
  const int K = 64;
  RealMatrix freqs(2, K), fd = RealMatrix::Zero(2, K);
  freqs.row(0).setConstant(1.0);
  freqs.row(1).setConstant(2.0);
  const auto s = assemble_CD(std::vector<RealMatrix>(K, RealMatrix::Zero(2, 2)), freqs, fd);
  for (long k = 0; k < K; ++k) {
    EXPECT_EQ(s.C_rot[k].cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(s.D[k].cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(s.C[k](0, 0), Complex(0.0, -1.0));
    EXPECT_EQ(s.C[k](1, 1), Complex(0.0, -2.0));
  }
  RealVector t(K);
  for (int k = 0; k < K; ++k) t[k] = kTwoPi * k / K;
  const auto rwa = rwa_hamiltonian(s, t, 1.0, {1, 2});
  EXPECT_EQ(rwa.beamsplitter.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(rwa.pair.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(rwa_hamiltonian(s, t, 1.0, {1, 3}), AssemblyError);
}

TEST(Rwa, HermiticityDeviationMeasuresResidue) {
  ComplexMatrix A(2, 2), B(2, 2);
  A << Complex(0, 1), Complex(1, 0), Complex(-1, 0), Complex(0, 2);
  B << 1, 2, 2, 3;
  EXPECT_EQ(hermiticity_deviation(A, B), 0.0);
  B(0, 1) = 2.5;
  EXPECT_GT(hermiticity_deviation(A, B), 0.0);
}

TEST(Rwa, JsonRoundTrip) {
  const auto profile = breathing_profile(1e-3, 64);
  const auto basis = build_mode_basis(profile, 3, DoubletPolicy::strongest_drive);
  const auto rwa = rwa_hamiltonian(coupling_series(basis), profile.times, profile.fundamental, basis.harmonics);
  const auto back = rwa_from_json_text(to_json_text(rwa));
  EXPECT_EQ(back.beamsplitter, rwa.beamsplitter);
  EXPECT_EQ(back.pair, rwa.pair);
  EXPECT_EQ(back.harmonics, rwa.harmonics);
  EXPECT_EQ(back.fundamental, rwa.fundamental);
  EXPECT_EQ(back.mode_freqs, rwa.mode_freqs);
}

}  // namespace
}  // namespace dcesim::mw
