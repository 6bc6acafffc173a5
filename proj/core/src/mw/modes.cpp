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

#include "dcesim/mw/modes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include "dcesim/mw/time_series.hpp"
#include "dcesim/util/parallel.hpp"
#include "dcesim/util/periodic.hpp"

namespace dcesim::mw {
namespace {

using DenseMatrix = Eigen::MatrixXd;

// Basis function descriptor: cos(m theta) (m = 0 is the constant) or sin(m theta).
struct Trig {
  int m;
  bool is_sin;
};

// c_j = dtheta sum n^2 cos(j theta), s_j = dtheta sum n^2 sin(j theta), j = 0..2M.
struct WeightHarmonics {
  std::vector<double> c, s;

  double cos_part(int j) const { return c[static_cast<std::size_t>(std::abs(j))]; }
  double sin_part(int j) const { return j < 0 ? -s[static_cast<std::size_t>(-j)] : s[static_cast<std::size_t>(j)]; }

  // integral of n^2 f g for trig basis functions f, g
  double product(const Trig& f, const Trig& g) const {
    if (!f.is_sin && !g.is_sin) return 0.5 * (cos_part(f.m - g.m) + cos_part(f.m + g.m));
    if (f.is_sin && g.is_sin) return 0.5 * (cos_part(f.m - g.m) - cos_part(f.m + g.m));
    const Trig& c = f.is_sin ? g : f;
    const Trig& s = f.is_sin ? f : g;
    // cos(a) sin(b) = (sin(a + b) - sin(a - b)) / 2
    return 0.5 * (sin_part(c.m + s.m) - sin_part(c.m - s.m));
  }
};

WeightHarmonics weight_harmonics(const RealVector& weight, int max_order) {
  const auto n = static_cast<int>(weight.size());
  std::vector<double> samples(weight.data(), weight.data() + n);
  std::vector<Complex> spectrum;
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, samples);
  const double dtheta = kTwoPi / n;
  WeightHarmonics h;
  h.c.resize(static_cast<std::size_t>(max_order) + 1);
  h.s.resize(static_cast<std::size_t>(max_order) + 1);
  for (int j = 0; j <= max_order; ++j) {
    h.c[static_cast<std::size_t>(j)] = dtheta * spectrum[static_cast<std::size_t>(j)].real();
    h.s[static_cast<std::size_t>(j)] = -dtheta * spectrum[static_cast<std::size_t>(j)].imag();
  }
  return h;
}

struct SectorSolution {
  std::vector<Trig> basis;
  RealVector eigenvalues;  // lambda = (omega R / c)^2, ascending
  DenseMatrix vectors;     // columns, W-orthonormal
  DenseMatrix weight;
};

SectorSolution solve_sector(std::vector<Trig> basis, const WeightHarmonics& h) {
  const auto size = static_cast<Eigen::Index>(basis.size());
  DenseMatrix stiffness = DenseMatrix::Zero(size, size);
  DenseMatrix weight(size, size);
  for (Eigen::Index p = 0; p < size; ++p) {
    const Trig& f = basis[static_cast<std::size_t>(p)];
    stiffness(p, p) = f.m == 0 ? 0.0 : kPi * f.m * f.m;
    for (Eigen::Index q = 0; q <= p; ++q) {
      weight(p, q) = h.product(f, basis[static_cast<std::size_t>(q)]);
      weight(q, p) = weight(p, q);
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> solver(stiffness, weight);
  if (solver.info() != Eigen::Success)
    throw NumericalError("mode solver: generalized eigenproblem failed (weight matrix not positive definite?)");
  return {std::move(basis), solver.eigenvalues(), solver.eigenvectors(), std::move(weight)};
}

RealVector synthesize(const std::vector<Trig>& basis, const Eigen::VectorXd& coeffs, int n) {
  RealVector shape = RealVector::Zero(n);
  for (std::size_t p = 0; p < basis.size(); ++p) {
    const double c = coeffs[static_cast<Eigen::Index>(p)];
    if (c == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      const double arg = basis[p].m * grid_angle(j, n);
      shape[j] += c * (basis[p].is_sin ? std::sin(arg) : std::cos(arg));
    }
  }
  return shape;
}

ModeMember make_member(const SectorSolution& sector, const Eigen::VectorXd& coeffs, double lambda, double radius,
                       int n, Parity parity) {
  // W integrates n^2 f g dtheta, so the target normalization is R c^T W c = 1.
  const double norm = std::sqrt(radius * coeffs.dot(sector.weight * coeffs));
  ModeMember member;
  member.freq = constants::speed_of_light * std::sqrt(std::max(lambda, 0.0)) / radius;
  member.shape = synthesize(sector.basis, coeffs / norm, n);
  member.parity = parity;
  return member;
}

double cos_content(const SectorSolution& sector, const Eigen::VectorXd& v) {
  double sum = 0.0;
  for (std::size_t p = 0; p < sector.basis.size(); ++p)
    if (!sector.basis[p].is_sin) sum += v[static_cast<Eigen::Index>(p)] * v[static_cast<Eigen::Index>(p)];
  return sum;
}

}  // namespace

std::vector<Doublet> solve_doublets(const RealVector& profile, double radius_m, int n_harmonics,
                                    const ModeSolverOptions& options) {
  const auto n = static_cast<int>(profile.size());
  const int m_max = options.galerkin_harmonics;
  if (n_harmonics < 1) throw InvalidArgument("mode solver: need at least one mode");
  if (!(radius_m > 0.0)) throw InvalidArgument("mode solver: radius must be > 0");
  if (profile.size() == 0 || profile.minCoeff() <= 0.0) throw InvalidArgument("mode solver: profile must be positive");
  if (m_max <= n_harmonics + 1 || 4 * m_max > n)
    throw InvalidArgument("mode solver: galerkin_harmonics must exceed n_modes + 1 and satisfy 4M <= N");

  const RealVector weight = profile.cwiseAbs2();
  const WeightHarmonics h = weight_harmonics(weight, 2 * m_max);
  double odd_content = 0.0;
  for (double s : h.s) odd_content = std::max(odd_content, std::abs(s));
  const bool even_profile = odd_content <= options.symmetry_tolerance * h.c[0];

  std::vector<Doublet> doublets(static_cast<std::size_t>(n_harmonics));
  if (even_profile) {
    std::vector<Trig> cos_basis, sin_basis;
    for (int m = 0; m <= m_max; ++m) cos_basis.push_back({m, false});
    for (int m = 1; m <= m_max; ++m) sin_basis.push_back({m, true});
    const SectorSolution even = solve_sector(std::move(cos_basis), h);
    const SectorSolution odd = solve_sector(std::move(sin_basis), h);
    for (int harmonic = 1; harmonic <= n_harmonics; ++harmonic) {
      auto& d = doublets[static_cast<std::size_t>(harmonic - 1)];
      d.harmonic = harmonic;
      d.symmetric = make_member(even, even.vectors.col(harmonic), even.eigenvalues[harmonic], radius_m, n,
                                Parity::even);
      d.antisymmetric = make_member(odd, odd.vectors.col(harmonic - 1), odd.eigenvalues[harmonic - 1], radius_m, n,
                                    Parity::odd);
    }
    return doublets;
  }

  std::vector<Trig> basis{{0, false}};
  for (int m = 1; m <= m_max; ++m) {
    basis.push_back({m, false});
    basis.push_back({m, true});
  }
  const SectorSolution full = solve_sector(std::move(basis), h);
  for (int harmonic = 1; harmonic <= n_harmonics; ++harmonic) {
    const Eigen::Index lo = 2 * harmonic - 1;
    const Eigen::Index hi = 2 * harmonic;
    Eigen::VectorXd first = full.vectors.col(lo);
    Eigen::VectorXd second = full.vectors.col(hi);
    double lambda_first = full.eigenvalues[lo];
    double lambda_second = full.eigenvalues[hi];
    const double splitting = (lambda_second - lambda_first) / lambda_second;
    if (splitting < options.doublet_resolution) {
      // Unresolved pair: rotate inside the span to the most cosine-like member.
      Eigen::Matrix2d gram;
      const auto cosine = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        double sum = 0.0;
        for (std::size_t p = 0; p < full.basis.size(); ++p)
          if (!full.basis[p].is_sin) sum += a[static_cast<Eigen::Index>(p)] * b[static_cast<Eigen::Index>(p)];
        return sum;
      };
      gram << cosine(first, first), cosine(first, second), cosine(second, first), cosine(second, second);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> rot(gram);
      const Eigen::Vector2d top = rot.eigenvectors().col(1);
      const Eigen::Vector2d rest = rot.eigenvectors().col(0);
      const Eigen::VectorXd sym = top[0] * first + top[1] * second;
      const Eigen::VectorXd anti = rest[0] * first + rest[1] * second;
      first = sym;
      second = anti;
      // Rayleigh quotients in the W-orthonormal pair: lambda = sum c_i^2 lambda_i
      const double l1 = full.eigenvalues[lo], l2 = full.eigenvalues[hi];
      lambda_first = top[0] * top[0] * l1 + top[1] * top[1] * l2;
      lambda_second = rest[0] * rest[0] * l1 + rest[1] * rest[1] * l2;
    } else if (cos_content(full, second) > cos_content(full, first)) {
      std::swap(first, second);
      std::swap(lambda_first, lambda_second);
    }
    auto& d = doublets[static_cast<std::size_t>(harmonic - 1)];
    d.harmonic = harmonic;
    d.symmetric = make_member(full, first, lambda_first, radius_m, n, Parity::mixed);
    d.antisymmetric = make_member(full, second, lambda_second, radius_m, n, Parity::mixed);
  }
  return doublets;
}

InstantaneousModes instantaneous_modes(const RealVector& profile, double radius_m, int n_modes,
                                       const ModeSolverOptions& options) {
  const auto doublets = solve_doublets(profile, radius_m, n_modes, options);
  InstantaneousModes out;
  out.freqs.resize(n_modes);
  out.shapes.resize(n_modes, profile.size());
  for (int i = 0; i < n_modes; ++i) {
    out.freqs[i] = doublets[static_cast<std::size_t>(i)].symmetric.freq;
    out.shapes.row(i) = doublets[static_cast<std::size_t>(i)].symmetric.shape.transpose();
  }
  return out;
}

double weighted_inner(const RealVector& weight, const RealVector& f, const RealVector& g, double radius_m) {
  return radius_m * periodic_integral((weight.array() * f.array() * g.array()).matrix());
}

ModeBasis fix_gauge(ModeBasis basis, double min_overlap) {
  const long k_count = basis.samples();
  const auto n = static_cast<int>(basis.grid_points());
  for (int mode = 0; mode < basis.n_modes(); ++mode) {
    RealMatrix& shapes = basis.shapes[static_cast<std::size_t>(mode)];
    const int harmonic = basis.harmonics.empty() ? mode + 1 : basis.harmonics[static_cast<std::size_t>(mode)];
    RealVector reference(n);
    for (int j = 0; j < n; ++j)
      reference[j] = std::cos(harmonic * grid_angle(j, n)) + std::sin(harmonic * grid_angle(j, n));
    if (shapes.row(0).dot(reference.transpose()) < 0.0) shapes.row(0) *= -1.0;
    for (long k = 1; k <= k_count; ++k) {
      const long cur = k % k_count;
      const RealVector prev = shapes.row(k - 1).transpose();
      const RealVector now = shapes.row(cur).transpose();
      double overlap = weighted_inner(basis.weight.row(cur).transpose(), prev, now, basis.radius_m);
      if (k < k_count && overlap < 0.0) {
        shapes.row(cur) *= -1.0;
        overlap = -overlap;
      }
      if (overlap < min_overlap) {
        std::ostringstream msg;
        msg << "gauge fixing: overlap " << overlap << " between samples " << k - 1 << " and " << cur << " of mode "
            << mode << " is below " << min_overlap << "; increase the number of time samples";
        throw TimeResolutionError(msg.str());
      }
    }
  }
  return basis;
}

ModeBasis build_mode_basis(const lle::ModulationProfile& profile, int n_modes, DoubletPolicy policy,
                           const ModeSolverOptions& options) {
  const long k_count = profile.samples();
  const long n = profile.grid_points();
  std::vector<std::vector<Doublet>> solved(static_cast<std::size_t>(k_count));
  parallel_for(k_count, [&](long k) {
    solved[static_cast<std::size_t>(k)] =
        solve_doublets(profile.index_profiles.row(k).transpose(), profile.ring_radius_m, n_modes, options);
  });

  // Both members of every doublet, symmetric ones first.
  ModeBasis both;
  both.times = profile.times;
  both.fundamental = profile.fundamental;
  both.radius_m = profile.ring_radius_m;
  both.weight = profile.index_profiles.cwiseAbs2();
  both.freqs.resize(2 * n_modes, k_count);
  for (int member = 0; member < 2 * n_modes; ++member) {
    const int harmonic = member % n_modes + 1;
    both.harmonics.push_back(harmonic);
    both.symmetric_member.push_back(member < n_modes);
    RealMatrix shapes(k_count, n);
    for (long k = 0; k < k_count; ++k) {
      const Doublet& d = solved[static_cast<std::size_t>(k)][static_cast<std::size_t>(harmonic - 1)];
      const ModeMember& m = member < n_modes ? d.symmetric : d.antisymmetric;
      shapes.row(k) = m.shape.transpose();
      both.freqs(member, k) = m.freq;
    }
    both.shapes.push_back(std::move(shapes));
  }
  both = fix_gauge(std::move(both));

  const double dt = profile.period() / static_cast<double>(k_count);
  ModeBasis basis;
  basis.times = both.times;
  basis.fundamental = both.fundamental;
  basis.radius_m = both.radius_m;
  basis.weight = std::move(both.weight);
  basis.freqs.resize(n_modes, k_count);
  for (int mode = 0; mode < n_modes; ++mode) {
    const int harmonic = mode + 1;
    bool keep_symmetric = true;
    if (policy == DoubletPolicy::strongest_drive) {
      const auto drive = [&](int member) {
        const RealVector w = both.freqs.row(member).transpose();
        const RealVector rate = (periodic_derivative(w, dt).array() / w.array()).matrix();
        return std::abs(fourier_coefficient(std::span<const double>(rate.data(), static_cast<std::size_t>(rate.size())),
                                            basis.times, basis.fundamental, 2 * harmonic));
      };
      keep_symmetric = drive(mode) >= drive(mode + n_modes);
    }
    const int member = keep_symmetric ? mode : mode + n_modes;
    basis.harmonics.push_back(harmonic);
    basis.symmetric_member.push_back(keep_symmetric);
    basis.freqs.row(mode) = both.freqs.row(member);
    basis.shapes.push_back(std::move(both.shapes[static_cast<std::size_t>(member)]));
  }
  return basis;
}

double orthonormality_deviation(const ModeBasis& basis) {
  double worst = 0.0;
  for (long k = 0; k < basis.samples(); ++k) {
    const RealVector w = basis.weight.row(k).transpose();
    for (int a = 0; a < basis.n_modes(); ++a)
      for (int b = 0; b < basis.n_modes(); ++b) {
        const double overlap = weighted_inner(w, basis.shapes[static_cast<std::size_t>(a)].row(k).transpose(),
                                              basis.shapes[static_cast<std::size_t>(b)].row(k).transpose(),
                                              basis.radius_m);
        worst = std::max(worst, std::abs(overlap - (a == b ? 1.0 : 0.0)));
      }
  }
  return worst;
}

double min_consecutive_overlap(const ModeBasis& basis) {
  double worst = 1e300;
  const long k_count = basis.samples();
  for (int mode = 0; mode < basis.n_modes(); ++mode) {
    const RealMatrix& s = basis.shapes[static_cast<std::size_t>(mode)];
    for (long k = 0; k < k_count; ++k) {
      const long next = (k + 1) % k_count;
      worst = std::min(worst, weighted_inner(basis.weight.row(next).transpose(), s.row(k).transpose(),
                                             s.row(next).transpose(), basis.radius_m));
    }
  }
  return worst;
}

}  // namespace dcesim::mw
