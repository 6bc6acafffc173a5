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

#include "dcesim/pipeline/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include "../util/json_support.hpp"
#include "dcesim/entanglement/concurrence.hpp"
#include "dcesim/fock/evolution.hpp"
#include "dcesim/fock/hamiltonian.hpp"
#include "dcesim/mw/coupling.hpp"
#include "dcesim/mw/modes.hpp"
#include "dcesim/pipeline/export.hpp"
#include "dcesim/util/digest.hpp"
#include "dcesim/util/periodic.hpp"

namespace dcesim::pipeline {

using io::Json;

namespace {

constexpr const char* kInvariantsFile = "invariants.json";
constexpr const char* kStatesFile = "closed_states.c128";

class InvariantLog {
 public:
  explicit InvariantLog(std::string stage) : stage_(std::move(stage)) {}

  void at_most(const std::string& name, double value, double threshold) { add(name, value, threshold, "<=", value <= threshold); }
  void at_least(const std::string& name, double value, double threshold) { add(name, value, threshold, ">=", value >= threshold); }
  void above(const std::string& name, double value, double threshold) { add(name, value, threshold, ">", value > threshold); }
  void below(const std::string& name, double value, double threshold) { add(name, value, threshold, "<", value < threshold); }

  const std::vector<InvariantResult>& results() const { return results_; }

  void write(const fs::path& dir) const {
    Json list = Json::array();
    for (const auto& r : results_)
      list.push_back({{"name", r.name}, {"value", r.value}, {"threshold", r.threshold}, {"relation", r.relation},
                      {"passed", r.passed}});
    io::write_text(dir / kInvariantsFile, Json{{"stage", stage_}, {"checks", list}}.dump(2) + "\n");
  }

 private:
  void add(const std::string& name, double value, double threshold, const char* relation, bool passed) {
    // NaN never passes
    results_.push_back({stage_, name, value, threshold, passed && !std::isnan(value), relation});
  }

  std::string stage_;
  std::vector<InvariantResult> results_;
};

fs::path table_path(const fs::path& dir, const std::string& stem, io::TableFormat format) {
  return dir / (stem + io::extension(format));
}

void write_json(const fs::path& path, const Json& j) { io::write_text(path, j.dump(2) + "\n"); }
Json read_json(const fs::path& path) { return Json::parse(io::read_text(path)); }

std::string mode_column(const char* prefix, int mode) { return std::string(prefix) + std::to_string(mode); }

void log(const RunOptions& options, const std::string& message) {
  if (options.log) options.log(message);
}

// ---- soliton ----------------------------------------------------------------

void build_soliton(const ExperimentConfig& cfg, const fs::path& dir, InvariantLog& inv) {
  const auto& params = cfg.soliton.lle;
  const lle::SolitonField field = lle::find_steady_soliton(params, cfg.soliton.steady);
  const int n = params.grid_points;

  io::write_complex_binary(dir / "envelope.c128", field.envelope);

  io::Table t;
  t.names = {"theta_rad", "re", "im", "intensity"};
  RealVector theta(n);
  for (int j = 0; j < n; ++j) theta[j] = grid_angle(j, n);
  t.columns = {theta, field.envelope.real(), field.envelope.imag(), field.envelope.cwiseAbs2()};
  io::write_table(table_path(dir, "field", cfg.io.table_format), t, cfg.io.table_format);

  std::vector<Complex> samples(field.envelope.data(), field.envelope.data() + n), spectrum;
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, samples);
  io::Table s;
  s.names = {"mode", "power_db"};
  RealVector mode(n), power(n);
  for (int j = 0; j < n; ++j) {
    const int src = (j + n / 2) % n;  // ascending mode number, -N/2 .. N/2-1
    mode[j] = wavenumber(src, n);
    power[j] = 10.0 * std::log10(std::max(std::norm(spectrum[static_cast<std::size_t>(src)] / double(n)), 1e-300));
  }
  s.columns = {mode, power};
  io::write_table(table_path(dir, "spectrum", cfg.io.table_format), s, cfg.io.table_format);

  Json meta{{"grid_points", n},
            {"pump_strength_sq", params.pump_strength_sq},
            {"detuning", params.detuning},
            {"dispersion", params.dispersion},
            {"step_normalized", params.step},
            {"residual", field.residual},
            {"steady", field.steady},
            {"warnings", field.warnings},
            {"peak_intensity", field.peak_intensity()},
            {"peak_over_two_detuning", field.peak_intensity() / (2.0 * params.detuning)},
            {"energy", field.energy()},
            {"pump_work", field.pump_work()},
            {"power_balance_error", field.power_balance_error()},
            {"existence_limit", lle::soliton_existence_limit(params.pump_strength_sq)}};
  write_json(dir / "soliton.json", meta);

  inv.at_most("steady_residual", field.residual, cfg.soliton.steady.tolerance);
  inv.below("power_balance_error", field.power_balance_error(), 1e-6);
}

// ---- modulation -------------------------------------------------------------

void build_modulation(const ExperimentConfig& cfg, const fs::path& upstream, const fs::path& dir, InvariantLog& inv) {
  const lle::SolitonField soliton = load_soliton(upstream);
  const lle::ModulationProfile prof =
      lle::sample_modulation_period(soliton, cfg.device.physical, cfg.mw.effective_index, cfg.mw.time_samples);

  io::Table t;
  t.names = {"t_s", "path_length_m"};
  t.columns = {prof.times, prof.path_lengths};
  io::write_table(table_path(dir, "path_length", cfg.io.table_format), t, cfg.io.table_format);
  io::write_matrix(dir / (std::string("index_profiles") + io::extension(cfg.io.matrix_encoding)), prof.index_profiles,
                   cfg.io.matrix_encoding);

  const double max_dn = (prof.index_profiles.array() - cfg.mw.effective_index).abs().maxCoeff();
  const RealVector kerr_peak = lle::kerr_index_profile(soliton.envelope.cwiseAbs2() * 4.0, cfg.device.physical);
  write_json(dir / "modulation.json",
             Json{{"samples", prof.samples()},
                  {"grid_points", prof.grid_points()},
                  {"fundamental_rad_per_s", prof.fundamental},
                  {"ring_radius_m", prof.ring_radius_m},
                  {"effective_index", cfg.mw.effective_index},
                  {"matrix_encoding", cfg.io.matrix_encoding == io::MatrixEncoding::binary ? "binary" : "text"},
                  {"coupling_boost", cfg.device.physical.coupling_boost},
                  {"max_index_perturbation", max_dn},
                  {"peak_kerr_index_change", kerr_peak.maxCoeff()},
                  {"implied_peak_intensity_w_per_m2",
                   lle::implied_kerr_intensity(kerr_peak.maxCoeff(), cfg.device.physical)}});

  const long k = prof.samples();
  const double mean_l = prof.path_lengths.mean();
  double periodicity = 0.0, identity = 0.0;
  for (long i = 0; i < k; ++i) {
    periodicity = std::max(periodicity, std::abs(prof.path_lengths[i] - prof.path_lengths[(i + k / 2) % k]) / mean_l);
    const double direct = kTwoPi * prof.ring_radius_m * prof.index_profiles.row(i).mean();
    identity = std::max(identity, std::abs(prof.path_lengths[i] - direct) / direct);
  }
  inv.below("path_length_half_period", periodicity, 1e-10);
  inv.at_most("path_length_identity", identity, 1e-12);
  const double drop = (prof.path_lengths[0] - prof.path_lengths[k / 4]) / mean_l;
  if (max_dn > 0.0)
    inv.above("path_length_quarter_drop", drop, 0.0);
  else
    inv.at_least("path_length_quarter_drop", drop, 0.0);
}

// ---- hamiltonian ------------------------------------------------------------

double relative_asymmetry(const RealMatrix& m, double sign) {
  const double scale = m.norm();
  if (scale == 0.0) return 0.0;
  return (m - sign * m.transpose()).norm() / scale;
}

void build_hamiltonian(const ExperimentConfig& cfg, const fs::path& upstream, const fs::path& dir, InvariantLog& inv) {
  const lle::ModulationProfile prof = load_modulation(upstream);
  const mw::ModeBasis basis = mw::build_mode_basis(prof, cfg.mw.n_modes, cfg.mw.doublet_policy, cfg.mw.solver);
  const mw::CouplingSeries series = mw::coupling_series(basis);
  mw::RwaHamiltonian h = mw::rwa_hamiltonian(series, basis.times, basis.fundamental, basis.harmonics);
  h.grid_points = prof.grid_points();
  h.galerkin_harmonics = cfg.mw.solver.galerkin_harmonics;
  h.coupling_boost = cfg.device.physical.coupling_boost;
  io::write_text(dir / "rwa_hamiltonian.json", mw::to_json_text(h));

  io::Table t;
  t.names = {"t_s"};
  t.columns = {basis.times};
  for (int m = 0; m < basis.n_modes(); ++m) {
    t.names.push_back(mode_column("omega_rad_per_s_mode", m));
    t.columns.push_back(basis.freqs.row(m).transpose());
  }
  io::write_table(table_path(dir, "mode_frequencies", cfg.io.table_format), t, cfg.io.table_format);

  double antisym = 0.0, sym = 0.0, mean_rate = 0.0;
  for (long k = 0; k < series.samples(); ++k) {
    antisym = std::max(antisym, relative_asymmetry(series.C_rot[static_cast<std::size_t>(k)], -1.0));
    sym = std::max(sym, relative_asymmetry(series.D[static_cast<std::size_t>(k)], 1.0));
  }
  for (int m = 0; m < series.n_modes(); ++m) {
    const RealVector rate = (series.freq_derivatives.row(m).array() / series.freqs.row(m).array()).matrix().transpose();
    mean_rate = std::max(mean_rate, std::abs(rate.mean()));
  }
  const double ortho = mw::orthonormality_deviation(basis);
  const double overlap = mw::min_consecutive_overlap(basis);

  Json members = Json::array();
  for (bool s : basis.symmetric_member) members.push_back(s ? "symmetric" : "antisymmetric");
  write_json(dir / "hamiltonian.json", Json{{"doublet_members", members},
                                            {"orthonormality_deviation", ortho},
                                            {"min_consecutive_overlap", overlap},
                                            {"rotating_antisymmetry", antisym},
                                            {"pair_symmetry", sym},
                                            {"hermiticity_deviation", h.hermiticity_deviation},
                                            {"beamsplitter_max_abs", h.beamsplitter.cwiseAbs().maxCoeff()},
                                            {"pair_max_abs", h.pair.cwiseAbs().maxCoeff()}});

  inv.below("orthonormality_deviation", ortho, 1e-10);
  inv.above("min_consecutive_overlap", overlap, 0.99);
  inv.at_most("rotating_coupling_antisymmetry", antisym, 1e-9);
  inv.at_most("pair_coupling_symmetry", sym, 1e-9);
  inv.below("rwa_hermiticity_deviation", h.hermiticity_deviation, 1e-10);
  // ln(omega) returns to itself after one period: the integral of omega'/omega over T.
  inv.at_most("log_frequency_closure", mean_rate * kTwoPi / basis.fundamental, 1e-10);
}

// ---- evolution --------------------------------------------------------------

std::vector<double> snapshot_times_within(const std::vector<double>& snapshots, double window) {
  std::vector<double> out;
  for (double t : snapshots)
    if (t <= window * (1.0 + 1e-12)) out.push_back(std::min(t, window));
  return out;
}

void build_evolution(const ExperimentConfig& cfg, const fs::path& upstream, const fs::path& dir, InvariantLog& inv) {
  const mw::RwaHamiltonian rwa = load_hamiltonian(upstream);
  const fock::FockSpace space = fock::build_space(cfg.mw.n_modes, cfg.quantum.levels, cfg.quantum.capacity_dim);
  const ComplexMatrix H = fock::hamiltonian_matrix(rwa, space);
  const int n_modes = space.n_modes;

  // Closed system.
  const RealVector closed_t = cfg.quantum.closed_times();
  const auto states = fock::evolve_pure(H, fock::QuantumState::vacuum(space), closed_t);
  ComplexMatrix amplitudes(static_cast<Eigen::Index>(states.size()), space.dim);
  io::Table closed;
  closed.names = {"t_s"};
  for (int m = 0; m < n_modes; ++m) closed.names.push_back(mode_column("n_mode", m));
  closed.names.insert(closed.names.end(), {"odd_parity_probability", "energy_rad_per_s", "top_level_probability"});
  std::vector<RealVector> cols(closed.names.size(), RealVector(closed_t.size()));
  cols[0] = closed_t;
  double norm_dev = 0.0, parity = 0.0, energy_drift = 0.0, top = 0.0;
  const double e0 = fock::energy_expectation(H, states.front());
  const double h_scale = H.norm() / std::sqrt(static_cast<double>(space.dim));
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& s = states[i];
    amplitudes.row(static_cast<Eigen::Index>(i)) = s.amplitudes.transpose();
    const RealVector n = fock::mean_photon_numbers(s);
    for (int m = 0; m < n_modes; ++m) cols[static_cast<std::size_t>(1 + m)][static_cast<Eigen::Index>(i)] = n[m];
    const double odd = fock::odd_parity_probability(s);
    const double e = fock::energy_expectation(H, s);
    const double top_i = fock::truncation_check(s, cfg.quantum.truncation_threshold).worst;
    cols[static_cast<std::size_t>(n_modes + 1)][static_cast<Eigen::Index>(i)] = odd;
    cols[static_cast<std::size_t>(n_modes + 2)][static_cast<Eigen::Index>(i)] = e;
    cols[static_cast<std::size_t>(n_modes + 3)][static_cast<Eigen::Index>(i)] = top_i;
    norm_dev = std::max(norm_dev, std::abs(s.amplitudes.norm() - 1.0));
    parity = std::max(parity, odd);
    energy_drift = std::max(energy_drift, std::abs(e - e0));
    top = std::max(top, top_i);
  }
  closed.columns = std::move(cols);
  io::write_table(table_path(dir, "closed_photon_numbers", cfg.io.table_format), closed, cfg.io.table_format);
  io::write_complex_binary(dir / kStatesFile, amplitudes);

  // Open system: the snapshot instants are added to the output grid.
  const RealVector open_t = cfg.quantum.open_times();
  const auto snaps = snapshot_times_within(cfg.analysis.snapshot_times_s, cfg.quantum.open_window_s);
  std::vector<double> grid(open_t.data(), open_t.data() + open_t.size());
  grid.insert(grid.end(), snaps.begin(), snaps.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<fock::CollapseChannel> channels;
  for (int m = 0; m < n_modes; ++m) channels.push_back({m, cfg.quantum.decay_rate_per_s});
  fock::LindbladOptions lopt;
  lopt.rtol = cfg.quantum.rtol;
  lopt.atol = cfg.quantum.atol;
  fock::LindbladStats stats;
  const auto open_states =
      fock::evolve_lindblad(H, channels, fock::QuantumState::density(space, fock::QuantumState::vacuum(space).density_matrix()),
                            Eigen::Map<const RealVector>(grid.data(), static_cast<Eigen::Index>(grid.size())), lopt,
                            &stats);

  io::Table open;
  open.names = {"t_s"};
  for (int m = 0; m < n_modes; ++m) open.names.push_back(mode_column("n_mode", m));
  open.names.push_back("trace_error");
  std::vector<RealVector> ocols(open.names.size(), RealVector(open_t.size()));
  ocols[0] = open_t;
  double trace_err = 0.0, excess = -1e300;
  Json snapshot_list = Json::array();
  std::size_t g = 0;
  for (Eigen::Index i = 0; i < open_t.size(); ++i) {
    while (grid[g] != open_t[i]) ++g;
    const auto& s = open_states[g];
    const RealVector n = fock::mean_photon_numbers(s);
    for (int m = 0; m < n_modes; ++m) ocols[static_cast<std::size_t>(1 + m)][i] = n[m];
    const double te = std::abs(s.rho.trace() - Complex(1.0, 0.0));
    ocols[static_cast<std::size_t>(n_modes + 1)][i] = te;
    trace_err = std::max(trace_err, te);
    // matched instant on the closed grid
    const auto c = std::find(closed_t.data(), closed_t.data() + closed_t.size(), open_t[i]);
    if (c != closed_t.data() + closed_t.size()) {
      const RealVector nc = fock::mean_photon_numbers(states[static_cast<std::size_t>(c - closed_t.data())]);
      excess = std::max(excess, (n - nc).maxCoeff());
    }
  }
  open.columns = std::move(ocols);
  io::write_table(table_path(dir, "open_photon_numbers", cfg.io.table_format), open, cfg.io.table_format);

  double min_eig = 1e300;
  for (std::size_t si = 0; si < snaps.size(); ++si) {
    const auto at = std::find(grid.begin(), grid.end(), snaps[si]);
    const auto& s = open_states[static_cast<std::size_t>(at - grid.begin())];
    const std::string name = "open_rho_" + std::to_string(si) + ".c128";
    io::write_complex_binary(dir / name, s.rho);
    snapshot_list.push_back({{"time_s", snaps[si]}, {"file", name}});
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(s.rho, Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());
  }

  write_json(dir / "evolution.json", Json{{"dim", space.dim},
                                          {"levels", space.levels},
                                          {"n_modes", n_modes},
                                          {"closed_samples", closed_t.size()},
                                          {"decay_rate_per_s", cfg.quantum.decay_rate_per_s},
                                          {"open_snapshots", snapshot_list},
                                          {"lindblad_accepted_steps", stats.accepted},
                                          {"lindblad_rejected_steps", stats.rejected},
                                          {"truncation_flagged", top > cfg.quantum.truncation_threshold}});

  inv.at_most("closed_norm_deviation", norm_dev, 1e-9);
  inv.below("odd_parity_probability", parity, 1e-10);
  inv.at_most("energy_drift", h_scale > 0.0 ? energy_drift / h_scale : energy_drift, 1e-9);
  inv.at_most("top_level_probability", top, cfg.quantum.truncation_threshold);
  inv.at_most("open_trace_error", trace_err, 1e-8);
  if (!snaps.empty()) inv.at_least("open_min_eigenvalue", min_eig, -1e-8);
  if (excess > -1e300) inv.at_most("open_minus_closed_photons", excess, 0.0);
}

// ---- analysis ---------------------------------------------------------------

std::size_t nearest_index(const RealVector& times, double t) {
  Eigen::Index best = 0;
  (times.array() - t).abs().minCoeff(&best);
  return static_cast<std::size_t>(best);
}

std::string pair_label(int n_modes, int traced) {
  std::string label = "C_pair_";
  for (int m = 0; m < n_modes; ++m)
    if (m != traced) label += std::to_string(m);
  return label;
}

void build_analysis(const ExperimentConfig& cfg, const fs::path& upstream, const fs::path& dir, InvariantLog& inv) {
  const auto states = load_closed_states(upstream);
  const RealVector times = load_table(upstream, "closed_photon_numbers").column("t_s");
  const int n_modes = states.front().space.n_modes;
  const auto trace = entanglement::concurrence_trace(states);

  io::Table t;
  t.names = {"t_s", "C_full"};
  const bool has_pairs = !trace.front().reduced.empty();
  if (has_pairs)
    for (int k = 0; k < n_modes; ++k) t.names.push_back(pair_label(n_modes, k));
  std::vector<RealVector> cols(t.names.size(), RealVector(times.size()));
  cols[0] = times;
  double dominance = 1e300, bound = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    cols[1][static_cast<Eigen::Index>(i)] = trace[i].full;
    double best_pair = 0.0;
    for (std::size_t k = 0; k < trace[i].reduced.size(); ++k) {
      cols[2 + k][static_cast<Eigen::Index>(i)] = trace[i].reduced[k];
      best_pair = std::max(best_pair, trace[i].reduced[k]);
    }
    if (has_pairs) dominance = std::min(dominance, trace[i].full - best_pair);
    bound = std::max(bound, trace[i].full);
  }
  t.columns = std::move(cols);
  io::write_table(table_path(dir, "concurrence", cfg.io.table_format), t, cfg.io.table_format);

  Json snapshots = Json::array();
  for (double ts : cfg.analysis.snapshot_times_s) {
    const std::size_t i = nearest_index(times, ts);
    snapshots.push_back({{"time_s", times[static_cast<Eigen::Index>(i)]}, {"index", i}, {"C_full", trace[i].full},
                         {"reduced", trace[i].reduced}});
  }

  // Persistency at the last snapshot instant.
  const double t_meas = cfg.analysis.snapshot_times_s.empty() ? times[times.size() - 1]
                                                              : cfg.analysis.snapshot_times_s.back();
  const std::size_t im = nearest_index(times, t_meas);
  const auto table = entanglement::persistency_table(states[im], cfg.analysis.measured_modes, cfg.analysis.max_fock);
  Json cells = Json::array();
  double min_significant = 1e300;
  for (const auto& c : table.cells) {
    cells.push_back({{"mode", c.mode},
                     {"level", c.level},
                     {"probability", c.probability},
                     {"possible", c.possible},
                     {"concurrence", c.concurrence}});
    if (c.probability > 1e-6) min_significant = std::min(min_significant, c.concurrence);
  }
  write_json(dir / "persistency.json", Json{{"time_s", times[static_cast<Eigen::Index>(im)]},
                                            {"modes", table.modes},
                                            {"max_fock", table.max_fock},
                                            {"cells", cells}});
  write_json(dir / "analysis.json", Json{{"snapshots", snapshots},
                                         {"persistency_time_s", times[static_cast<Eigen::Index>(im)]},
                                         {"min_significant_persistency", min_significant}});

  inv.at_most("initial_concurrence", trace.front().full, 1e-10);
  inv.at_most("concurrence_bound_excess", bound - entanglement::concurrence_bound(n_modes), 0.0);
  if (has_pairs) inv.at_least("full_minus_pair_concurrence", dominance, -1e-12);
}

// ---- orchestration ----------------------------------------------------------

bool abort_on_failure(const ExperimentConfig& cfg, const RunOptions& options) {
  return options.abort_on_invariant_failure.value_or(cfg.io.abort_on_invariant_failure);
}

void enforce(const std::vector<InvariantResult>& results, Stage stage, bool abort) {
  std::vector<InvariantResult> failed;
  for (const auto& r : results)
    if (!r.passed) failed.push_back(r);
  if (failed.empty() || !abort) return;
  std::ostringstream msg;
  msg << "stage '" << stage_name(stage) << "' failed invariant checks:";
  for (const auto& f : failed) msg << "\n  " << f.name << " = " << f.value << " (required " << f.relation << " " << f.threshold << ")";
  throw InvariantFailure(msg.str(), std::move(failed));
}

}  // namespace

const char* stage_name(Stage stage) {
  switch (stage) {
    case Stage::soliton: return "soliton";
    case Stage::modulation: return "modulation";
    case Stage::hamiltonian: return "hamiltonian";
    case Stage::evolution: return "evolution";
    case Stage::analysis: return "analysis";
  }
  return "?";
}

std::optional<Stage> parse_stage(const std::string& name) {
  for (Stage s : kStages)
    if (name == stage_name(s)) return s;
  return std::nullopt;
}

std::array<std::string, 5> stage_keys(const ExperimentConfig& config) {
  std::array<std::string, 5> keys;
  std::string upstream = "dcesim-artifacts-v1";
  for (std::size_t i = 0; i < kStages.size(); ++i) {
    keys[i] = stage_key(upstream, stage_inputs(config, stage_name(kStages[i])));
    upstream = keys[i];
  }
  return keys;
}

StageRecord run_stage(const ExperimentConfig& config, Stage stage, const RunOptions& options) {
  const ArtifactStore store(config.io.cache_dir);
  const auto keys = stage_keys(config);
  const auto index = static_cast<std::size_t>(stage);
  const std::string name = stage_name(stage);
  const std::string& key = keys[index];
  StageRecord record{stage, key, {}, false};

  if (!options.force) {
    if (auto dir = store.find(name, key)) {
      log(options, name + ": cached (" + key.substr(0, 16) + ")");
      record.dir = *dir;
      record.from_cache = true;
      enforce(load_invariants(*dir), stage, abort_on_failure(config, options));
      return record;
    }
  }

  fs::path upstream;
  if (index > 0) upstream = store.require(stage_name(kStages[index - 1]), keys[index - 1]);

  log(options, name + ": computing");
  const fs::path scratch = store.begin(name, key);
  std::vector<InvariantResult> results;
  try {
    results = build_stage(config, stage, upstream, scratch);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(scratch, ec);
    throw;
  }
  // Failing artifacts are still committed so they can be inspected; the
  // recorded invariants keep failing on every cache hit.
  record.dir = store.commit(scratch, name, key, stage_inputs(config, name));
  enforce(results, stage, abort_on_failure(config, options));
  return record;
}

std::vector<InvariantResult> build_stage(const ExperimentConfig& config, Stage stage, const fs::path& upstream,
                                         const fs::path& target) {
  const std::string name = stage_name(stage);
  if (stage != Stage::soliton && !fs::is_directory(upstream)) {
    const char* needed = stage_name(kStages[static_cast<std::size_t>(stage) - 1]);
    throw DependencyError(needed, name + ": upstream '" + needed + "' artifact directory " + upstream.string() +
                                      " does not exist");
  }
  fs::create_directories(target);
  InvariantLog inv(name);
  try {
    switch (stage) {
      case Stage::soliton: build_soliton(config, target, inv); break;
      case Stage::modulation: build_modulation(config, upstream, target, inv); break;
      case Stage::hamiltonian: build_hamiltonian(config, upstream, target, inv); break;
      case Stage::evolution: build_evolution(config, upstream, target, inv); break;
      case Stage::analysis: build_analysis(config, upstream, target, inv); break;
    }
  } catch (const DependencyError&) {
    throw;
  } catch (const CapacityError&) {
    throw;
  } catch (const NumericalError& e) {
    throw NumericalError(name + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw NumericalError(name + ": " + e.what());
  } catch (const Json::exception& e) {
    throw DependencyError(name, name + ": unreadable upstream artifact in " + upstream.string() + ": " + e.what());
  }
  inv.write(target);
  return inv.results();
}

std::vector<StageRecord> cached_stages(const ExperimentConfig& config) {
  const ArtifactStore store(config.io.cache_dir);
  const auto keys = stage_keys(config);
  std::vector<StageRecord> out;
  for (std::size_t i = 0; i < kStages.size(); ++i)
    if (auto dir = store.find(stage_name(kStages[i]), keys[i])) out.push_back({kStages[i], keys[i], *dir, true});
  return out;
}

RunResult run_pipeline(const ExperimentConfig& config, const RunOptions& options) {
  RunResult result;
  for (Stage s : kStages) {
    StageRecord r = run_stage(config, s, options);
    for (auto& inv : load_invariants(r.dir)) {
      result.invariants_passed = result.invariants_passed && inv.passed;
      result.invariants.push_back(std::move(inv));
    }
    result.stages.push_back(std::move(r));
    if (options.last_stage && *options.last_stage == s) break;
  }
  result.output_dir = config.io.output_dir;
  if (options.write_outputs) {
    const bool complete = result.stages.size() == kStages.size();
    fs::remove_all(fs::path(config.io.output_dir) / "figures");
    if (complete)
      for (Figure f : {Figure::fig3, Figure::fig4, Figure::fig5, Figure::table1}) export_figure(config, f);
    result.manifest = write_manifest(config, result.stages, result.invariants);
  }
  return result;
}

std::vector<InvariantResult> load_invariants(const fs::path& stage_dir) {
  const Json j = read_json(stage_dir / kInvariantsFile);
  std::vector<InvariantResult> out;
  for (const auto& c : j.at("checks"))
    out.push_back({j.at("stage").get<std::string>(), c.at("name").get<std::string>(), c.at("value").get<double>(),
                   c.at("threshold").get<double>(), c.at("passed").get<bool>(), c.at("relation").get<std::string>()});
  return out;
}

io::Table load_table(const fs::path& dir, const std::string& stem) {
  for (auto format : {io::TableFormat::csv, io::TableFormat::json}) {
    const fs::path p = table_path(dir, stem, format);
    if (fs::exists(p)) return io::read_table(p, format);
  }
  throw DependencyError(dir.filename().string(), "artifact table '" + stem + "' missing in " + dir.string());
}

lle::SolitonField load_soliton(const fs::path& dir) {
  const Json meta = read_json(dir / "soliton.json");
  lle::SolitonField field;
  field.params.grid_points = meta.at("grid_points").get<int>();
  field.params.pump_strength_sq = meta.at("pump_strength_sq").get<double>();
  field.params.detuning = meta.at("detuning").get<double>();
  field.params.dispersion = meta.at("dispersion").get<double>();
  field.params.step = meta.at("step_normalized").get<double>();
  field.residual = meta.at("residual").get<double>();
  field.steady = meta.at("steady").get<bool>();
  field.warnings = meta.at("warnings").get<std::vector<std::string>>();
  field.envelope = io::read_complex_binary(dir / "envelope.c128", field.params.grid_points, 1);
  return field;
}

lle::ModulationProfile load_modulation(const fs::path& dir) {
  const Json meta = read_json(dir / "modulation.json");
  const auto encoding = io::parse_matrix_encoding(meta.at("matrix_encoding").get<std::string>());
  lle::ModulationProfile prof;
  const io::Table t = load_table(dir, "path_length");
  prof.times = t.column("t_s");
  prof.path_lengths = t.column("path_length_m");
  prof.fundamental = meta.at("fundamental_rad_per_s").get<double>();
  prof.ring_radius_m = meta.at("ring_radius_m").get<double>();
  prof.index_profiles = io::read_matrix(dir / (std::string("index_profiles") + io::extension(encoding)), encoding,
                                        meta.at("samples").get<long>());
  return prof;
}

mw::RwaHamiltonian load_hamiltonian(const fs::path& dir) {
  return mw::rwa_from_json_text(io::read_text(dir / "rwa_hamiltonian.json"));
}

std::vector<fock::QuantumState> load_closed_states(const fs::path& dir) {
  const Json meta = read_json(dir / "evolution.json");
  const fock::FockSpace space{meta.at("n_modes").get<int>(), meta.at("levels").get<int>(), meta.at("dim").get<long>()};
  const RealVector times = load_table(dir, "closed_photon_numbers").column("t_s");
  const ComplexMatrix amps = io::read_complex_binary(dir / kStatesFile, times.size(), space.dim);
  std::vector<fock::QuantumState> out;
  out.reserve(static_cast<std::size_t>(times.size()));
  for (Eigen::Index i = 0; i < times.size(); ++i)
    out.push_back(fock::QuantumState::pure(space, amps.row(i).transpose(), times[i]));
  return out;
}

std::vector<fock::QuantumState> load_open_snapshots(const fs::path& dir) {
  const Json meta = read_json(dir / "evolution.json");
  const fock::FockSpace space{meta.at("n_modes").get<int>(), meta.at("levels").get<int>(), meta.at("dim").get<long>()};
  std::vector<fock::QuantumState> out;
  for (const auto& s : meta.at("open_snapshots"))
    out.push_back(fock::QuantumState::density(
        space, io::read_complex_binary(dir / s.at("file").get<std::string>(), space.dim, space.dim),
        s.at("time_s").get<double>()));
  return out;
}

fs::path write_manifest(const ExperimentConfig& config, const std::vector<StageRecord>& stages,
                        const std::vector<InvariantResult>& invariants) {
  const fs::path out(config.io.output_dir);
  fs::create_directories(out);
  Json stage_list = Json::array();
  for (const auto& r : stages) {
    const fs::path target = out / stage_name(r.stage);
    fs::remove_all(target);
    fs::create_directories(target);
    for (const auto& rel : artifact_files(r.dir)) {
      fs::create_directories((target / rel).parent_path());
      fs::copy_file(r.dir / rel, target / rel, fs::copy_options::overwrite_existing);
    }
    stage_list.push_back({{"stage", stage_name(r.stage)}, {"key", r.key}});
  }

  std::vector<std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(out)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel = fs::relative(entry.path(), out).generic_string();
    if (rel != "manifest.json") files.push_back(rel);
  }
  std::sort(files.begin(), files.end());
  Json file_list = Json::array();
  for (const auto& rel : files)
    file_list.push_back({{"path", rel}, {"sha256", sha256_file(out / rel)}, {"bytes", fs::file_size(out / rel)}});

  Json inv_list = Json::array();
  for (const auto& r : invariants)
    inv_list.push_back({{"stage", r.stage}, {"name", r.name}, {"value", r.value}, {"threshold", r.threshold},
                        {"relation", r.relation}, {"passed", r.passed}});

  Json manifest{{"tool", "dcesim"},
                {"version", "0.1.0"},
                {"config_hash", config.hash},
                {"config", Json::parse(config.canonical)},
                {"stages", stage_list},
                {"files", file_list},
                {"invariants", inv_list},
                {"tolerances",
                 {{"steady_tolerance", config.soliton.steady.tolerance},
                  {"lindblad_rtol", config.quantum.rtol},
                  {"lindblad_atol", config.quantum.atol},
                  {"truncation_threshold", config.quantum.truncation_threshold},
                  {"outcome_probability_threshold", entanglement::kImpossibleOutcome}}}};
  const fs::path path = out / "manifest.json";
  write_json(path, manifest);
  return path;
}

}  // namespace dcesim::pipeline
