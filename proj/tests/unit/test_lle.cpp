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

#include <algorithm>
#include <cmath>
#include <vector>

#include "dcesim/lle/modulation.hpp"
#include "dcesim/lle/soliton.hpp"
#include "dcesim/util/periodic.hpp"

namespace dcesim::lle {
namespace {

LleParams device_params() {
  LleParams p;
  p.dispersion = normalized_dispersion(1.5246e6, 5e5, 1550e-9);
  return p;
}

// Roots of rho (1 + (alpha - rho)^2) = F^2 by scanning for sign changes and bisecting.
std::vector<double> bisection_roots(double f2, double alpha) {
  const auto g = [&](double r) { return r * (1.0 + (alpha - r) * (alpha - r)) - f2; };
  std::vector<double> roots;
  const double hi = f2 + 1.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double a = hi * i / n, b = hi * (i + 1) / n;
    if (g(a) == 0.0) {
      roots.push_back(a);
      continue;
    }
    if (g(a) * g(b) > 0.0) continue;
    for (int k = 0; k < 200; ++k) {
      const double m = 0.5 * (a + b);
      (g(a) * g(m) <= 0.0 ? b : a) = m;
    }
    roots.push_back(0.5 * (a + b));
  }
  return roots;
}

class SteadySoliton : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { soliton_ = new SolitonField(find_steady_soliton(device_params())); }
  static void TearDownTestSuite() {
    delete soliton_;
    soliton_ = nullptr;
  }
  static const SolitonField& soliton() { return *soliton_; }

 private:
  static SolitonField* soliton_;
};
SolitonField* SteadySoliton::soliton_ = nullptr;

TEST(Dispersion, NormalizedValueMatchesHandComputation) {
  const double kappa = kTwoPi * constants::speed_of_light / 1550e-9 / 5e5;
  const double expected = 2.0 * kTwoPi * 1.5246e6 / kappa;
  EXPECT_NEAR(normalized_dispersion(1.5246e6, 5e5, 1550e-9), expected, 1e-15 * expected);
  EXPECT_NEAR(optical_linewidth(5e5, 1550e-9), kappa, 1e-9 * kappa);
}

TEST(Homogeneous, RootsMatchBisectionOracle) {
  for (auto [f2, alpha] : {std::pair{4.1, 3.2}, std::pair{1.0, 0.0}, std::pair{10.0, 4.0}, std::pair{1.0, 3.2}}) {
    const auto roots = homogeneous_intensities(f2, alpha);
    const auto oracle = bisection_roots(f2, alpha);
    ASSERT_EQ(roots.size(), oracle.size()) << "F2=" << f2 << " alpha=" << alpha;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      EXPECT_NEAR(roots[i], oracle[i], 1e-9);
      EXPECT_NEAR(roots[i] * (1.0 + (alpha - roots[i]) * (alpha - roots[i])), f2, 1e-9 * f2);
    }
  }
}

TEST(Homogeneous, FlatFieldHasRequestedIntensity) {
  const double rho = homogeneous_intensities(4.1, 3.2).front();
  EXPECT_NEAR(std::norm(homogeneous_field(4.1, 3.2, rho)), rho, 1e-12);
}

TEST(Evolve, ZeroPumpKeepsZeroField) {
  auto p = device_params();
  p.pump_strength_sq = 0.0;
  const auto out = evolve_lle(flat_state(p, Complex(0.0, 0.0)), 2.0);
  EXPECT_EQ(out.envelope.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Evolve, HomogeneousStateIsStationary) {
  // The split-step fixed point sits O(step^2) away from the exact root.
  auto p = device_params();
  p.grid_points = 256;
  p.step = 1e-4;
  const double rho = homogeneous_intensities(p.pump_strength_sq, p.detuning).front();
  const auto start = flat_state(p, homogeneous_field(p.pump_strength_sq, p.detuning, rho));
  const auto out = evolve_lle(start, 5.0);
  EXPECT_LT((out.envelope - start.envelope).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Evolve, DivergenceReportsStep) {
  auto seed = sech_seed(device_params());
  try {
    evolve_lle(seed, 1.0, 1.0);
    FAIL() << "expected DivergedError";
  } catch (const DivergedError& e) {
    EXPECT_GE(e.step(), 0);
  }
}

TEST(Steady, WeakPumpGivesNoSoliton) {
  auto p = device_params();
  p.pump_strength_sq = 1.0;
  EXPECT_THROW(find_steady_soliton(p), NoSolitonError);
}

TEST(Steady, NearZeroDetuningRelaxesToFlat) {
  auto p = device_params();
  p.detuning = 0.05;
  EXPECT_THROW(find_steady_soliton(p), NoSolitonError);
}

TEST(Params, ValidationRejectsBadInputs) {
  auto p = device_params();
  p.dispersion = -1.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = device_params();
  p.grid_points = 1000;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST_F(SteadySoliton, ConvergesWithPowerBalance) {
  EXPECT_TRUE(soliton().steady);
  EXPECT_LT(soliton().residual, 1e-8);
  EXPECT_LT(soliton().power_balance_error(), 1e-6);
}

TEST_F(SteadySoliton, IsSingleLocalizedPeakOnSampleZero) {
  const RealVector I = soliton().envelope.cwiseAbs2();
  const int n = static_cast<int>(I.size());
  Eigen::Index arg = 0;
  I.maxCoeff(&arg);
  EXPECT_EQ(arg, 0);
  EXPECT_GT(I.maxCoeff() / I.minCoeff(), 5.0);
  // Intensity is mirror symmetric about the peak.
  double asym = 0.0;
  for (int j = 1; j < n; ++j) asym = std::max(asym, std::abs(I[j] - I[n - j]));
  EXPECT_LT(asym, 1e-6 * I.maxCoeff());
}

TEST_F(SteadySoliton, CombSpectrumIsSymmetricAndDecays) {
  const auto& psi = soliton().envelope;
  const int n = static_cast<int>(psi.size());
  // Explicit DFT oracle for the comb-line powers.
  std::vector<double> power(n);
  for (int m = 0; m < n; ++m) {
    Complex acc = 0.0;
    for (int j = 0; j < n; ++j) acc += psi[j] * std::polar(1.0, -kTwoPi * m * j / n);
    power[m] = std::norm(acc / double(n));
  }
  const double top = *std::max_element(power.begin(), power.end());
  for (int m = 1; m < n / 2; ++m) EXPECT_NEAR(power[m], power[n - m], 1e-6 * top + 1e-6 * power[m]);
  for (int m = 4; m < n / 2 && power[m] > 1e-20 * top; ++m) EXPECT_LT(power[m], power[m - 1]) << "line " << m;
}

TEST_F(SteadySoliton, CounterPropagatingPairPeaksFourfoldAtCoincidence) {
  const auto& s = soliton();
  const double fsr = 1e10;
  const RealVector I0 = synthesize_cp_intensity(s, 0.0, fsr);
  EXPECT_NEAR(I0.maxCoeff(), 4.0 * s.peak_intensity(), 1e-9 * s.peak_intensity());
  // A quarter period puts the two solitons on opposite sides of the ring.
  const int n = static_cast<int>(I0.size());
  const RealVector Iq = synthesize_cp_intensity(s, 0.25 / fsr, fsr);
  const double expected = std::norm(s.envelope[0] + s.envelope[n / 2]);
  EXPECT_NEAR(Iq[n / 4], expected, 1e-9 * expected);
  EXPECT_NEAR(Iq.maxCoeff(), expected, 1e-9 * expected);
  // Half a period later the pattern is the t = 0 one rotated by half a ring.
  const RealVector Ih = synthesize_cp_intensity(s, 0.5 / fsr, fsr);
  double dev = 0.0;
  for (int j = 0; j < n; ++j) dev = std::max(dev, std::abs(Ih[j] - I0[(j + n / 2) % n]));
  EXPECT_LT(dev, 1e-9 * I0.maxCoeff());
}

TEST(Kerr, IndexChangeOracle) {
  PhysicalParams p;
  RealVector I(2);
  I << 0.0, 6.4;
  const RealVector dn = kerr_index_profile(I, p);
  EXPECT_EQ(dn[0], 0.0);
  EXPECT_NEAR(dn[1], 1.9 / (2.0 * 5e5) * 6.4, 1e-18);
  EXPECT_NEAR(dn[1], 1.216e-5, 1e-17);
  p.coupling_boost = 3.0;
  EXPECT_NEAR(kerr_index_profile(I, p)[1], 3.0 * dn[1], 1e-18);
}

TEST(Kerr, MicrowaveProfileAppliesOverlapAndMask) {
  PhysicalParams p;
  const int n = 256;
  const RealVector dn = RealVector::Constant(n, 1e-5);
  RealVector prof = mw_index_profile(dn, p, 2.1);
  EXPECT_NEAR((prof.array() - 2.1).abs().maxCoeff() - 1e-6, 0.0, 1e-15);
  p.overlap = 0.0;
  prof = mw_index_profile(dn, p, 2.1);
  EXPECT_EQ((prof.array() - 2.1).abs().maxCoeff(), 0.0);
  p.overlap = 0.1;
  p.mask = arc_mask(n, 0.0, kPi);
  prof = mw_index_profile(dn, p, 2.1);
  EXPECT_NEAR(prof[n / 4], 2.1 + 1e-6, 1e-15);
  EXPECT_EQ(prof[3 * n / 4], 2.1);
}

TEST(PathLength, ConstantAndZeroMeanPerturbation) {
  const int n = 512;
  const double R = 200e-6;
  RealVector prof = RealVector::Constant(n, 2.1);
  EXPECT_NEAR(optical_path_length(prof, R), kTwoPi * 2.1 * R, 1e-15);
  for (int j = 0; j < n; ++j) prof[j] += 1e-3 * std::cos(3 * grid_angle(j, n));
  EXPECT_NEAR(optical_path_length(prof, R), kTwoPi * 2.1 * R, 1e-15);
}

TEST_F(SteadySoliton, ModulationPeriodicityAndPathLengthDrop) {
  PhysicalParams p;
  const auto prof = sample_modulation_period(soliton(), p, p.group_index, 64);
  const long K = prof.samples();
  ASSERT_EQ(K, 64);
  EXPECT_NEAR(prof.period(), 1.0 / p.free_spectral_range_hz(), 1e-20);
  // Half a period later the profile is rotated by half a ring; L repeats.
  const long n = prof.grid_points();
  for (long k = 0; k < K / 2; ++k) {
    double dev = 0.0;
    for (long j = 0; j < n; ++j)
      dev = std::max(dev, std::abs(prof.index_profiles(k + K / 2, j) - prof.index_profiles(k, (j + n / 2) % n)));
    EXPECT_LT(dev, 1e-12);
    EXPECT_NEAR(prof.path_lengths[k], prof.path_lengths[k + K / 2], 1e-10 * prof.path_lengths[k]);
  }
  EXPECT_GT(prof.path_lengths[0], prof.path_lengths[K / 4]);
  for (long k = 0; k < K; ++k)
    EXPECT_NEAR(prof.path_lengths[k], optical_path_length(prof.index_profiles.row(k).transpose(), prof.ring_radius_m),
                1e-12 * prof.path_lengths[k]);
}

TEST_F(SteadySoliton, ZeroOverlapGivesStaticProfile) {
  PhysicalParams p;
  p.overlap = 0.0;
  const auto prof = sample_modulation_period(soliton(), p, 2.1, 64);
  EXPECT_EQ((prof.index_profiles.array() - 2.1).abs().maxCoeff(), 0.0);
}

TEST_F(SteadySoliton, SampleCountIsValidated) {
  PhysicalParams p;
  EXPECT_THROW(sample_modulation_period(soliton(), p, 2.1, 63), InvalidArgument);
  EXPECT_THROW(sample_modulation_period(soliton(), p, 2.1, 32), InvalidArgument);
}

}  // namespace
}  // namespace dcesim::lle
