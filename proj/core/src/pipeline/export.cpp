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

#include "dcesim/pipeline/export.hpp"

#include <cmath>

#include "../util/json_support.hpp"
#include "dcesim/entanglement/concurrence.hpp"
#include "dcesim/fock/state.hpp"
#include "dcesim/pipeline/pipeline.hpp"

namespace dcesim::pipeline {

using io::Json;

namespace {

struct Context {
  const ExperimentConfig& cfg;
  fs::path out;
  fs::path figures;
  std::vector<std::string> written;

  fs::path stage_dir(Stage stage) const {
    const ArtifactStore store(cfg.io.cache_dir);
    return store.require(stage_name(stage), stage_keys(cfg)[static_cast<std::size_t>(stage)]);
  }

  void table(const std::string& stem, const io::Table& t) {
    const std::string name = stem + io::extension(cfg.io.table_format);
    io::write_table(figures / name, t, cfg.io.table_format);
    written.push_back("figures/" + name);
  }

  void json(const std::string& name, const Json& j) {
    io::write_text(figures / name, j.dump(2) + "\n");
    written.push_back("figures/" + name);
  }
};

// One row per density-matrix element: occupation labels of row and column, then re, im.
io::Table tomography_table(const fock::TomographyBlock& block, int n_modes) {
  io::Table t;
  for (int m = 0; m < n_modes; ++m) t.names.push_back("row_n" + std::to_string(m));
  for (int m = 0; m < n_modes; ++m) t.names.push_back("col_n" + std::to_string(m));
  t.names.insert(t.names.end(), {"re", "im"});
  const auto size = static_cast<Eigen::Index>(block.indices.size());
  std::vector<RealVector> cols(t.names.size(), RealVector(size * size));
  for (Eigen::Index r = 0; r < size; ++r)
    for (Eigen::Index c = 0; c < size; ++c) {
      const Eigen::Index row = r * size + c;
      for (int m = 0; m < n_modes; ++m) {
        cols[static_cast<std::size_t>(m)][row] = block.occupations[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)];
        cols[static_cast<std::size_t>(n_modes + m)][row] =
            block.occupations[static_cast<std::size_t>(c)][static_cast<std::size_t>(m)];
      }
      cols[static_cast<std::size_t>(2 * n_modes)][row] = block.block(r, c).real();
      cols[static_cast<std::size_t>(2 * n_modes + 1)][row] = block.block(r, c).imag();
    }
  t.columns = std::move(cols);
  return t;
}

std::size_t nearest(const std::vector<fock::QuantumState>& states, double t) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < states.size(); ++i)
    if (std::abs(states[i].frame_time - t) < std::abs(states[best].frame_time - t)) best = i;
  return best;
}

void export_fig3(Context& ctx) {
  const fs::path evo = ctx.stage_dir(Stage::evolution);
  ctx.table("fig3_photon_numbers_closed", load_table(evo, "closed_photon_numbers"));
  ctx.table("fig3_photon_numbers_open", load_table(evo, "open_photon_numbers"));
  const auto closed = load_closed_states(evo);
  const auto open = load_open_snapshots(evo);
  const int display = ctx.cfg.analysis.display_levels;
  Json blocks = Json::array();
  const auto emit = [&](const fock::QuantumState& s, const std::string& kind, std::size_t i) {
    const auto block = fock::tomography_subset(s, display);
    const std::string stem = "fig3_tomography_" + kind + "_" + std::to_string(i);
    ctx.table(stem, tomography_table(block, s.space.n_modes));
    blocks.push_back({{"file", stem + io::extension(ctx.cfg.io.table_format)},
                      {"decay", kind},
                      {"time_s", s.frame_time},
                      {"display_levels", display},
                      {"probability_mass", block.probability_mass}});
  };
  for (std::size_t i = 0; i < ctx.cfg.analysis.snapshot_times_s.size(); ++i)
    emit(closed[nearest(closed, ctx.cfg.analysis.snapshot_times_s[i])], "closed", i);
  for (std::size_t i = 0; i < open.size(); ++i) emit(open[i], "open", i);
  ctx.json("fig3_tomography.json", Json{{"blocks", blocks}});
}

void export_fig4(Context& ctx) {
  ctx.table("fig4_concurrence", load_table(ctx.stage_dir(Stage::analysis), "concurrence"));
}

void export_fig5(Context& ctx) {
  const fs::path evo = ctx.stage_dir(Stage::evolution);
  const auto closed = load_closed_states(evo);
  const double t = ctx.cfg.analysis.snapshot_times_s.empty() ? closed.back().frame_time
                                                             : ctx.cfg.analysis.snapshot_times_s.back();
  const auto& state = closed[nearest(closed, t)];
  Json outcomes = Json::array();
  for (int mode : ctx.cfg.analysis.measured_modes)
    for (auto kind : {entanglement::OutcomeKind::zero, entanglement::OutcomeKind::nonzero}) {
      const std::string label = kind == entanglement::OutcomeKind::zero ? "zero" : "nonzero";
      const auto m = entanglement::project_mode(state, mode, {kind, 0});
      Json entry{{"mode", mode}, {"outcome", label}, {"probability", m.probability}, {"possible", m.possible()}};
      if (m.possible()) {
        const std::string stem = "fig5_mode" + std::to_string(mode) + "_" + label;
        ctx.table(stem, tomography_table(fock::tomography_subset(*m.collapsed, ctx.cfg.analysis.display_levels),
                                         state.space.n_modes));
        entry["file"] = stem + io::extension(ctx.cfg.io.table_format);
        const auto report = entanglement::concurrence(*m.collapsed);
        entry["full_concurrence"] = report.full;
        if (!report.reduced.empty()) entry["remaining_pair_concurrence"] = report.reduced[static_cast<std::size_t>(mode)];
      }
      outcomes.push_back(std::move(entry));
    }
  ctx.json("fig5_projections.json", Json{{"time_s", state.frame_time}, {"outcomes", outcomes}});
}

void export_table1(Context& ctx) {
  const Json p = Json::parse(io::read_text(ctx.stage_dir(Stage::analysis) / "persistency.json"));
  const int max_fock = p.at("max_fock").get<int>();
  const auto modes = p.at("modes").get<std::vector<int>>();
  if (ctx.cfg.io.table_format == io::TableFormat::json) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < modes.size(); ++r) {
      Json cells = Json::array();
      for (int j = 0; j <= max_fock; ++j) {
        const auto& c = p.at("cells")[r * static_cast<std::size_t>(max_fock + 1) + static_cast<std::size_t>(j)];
        cells.push_back({{"n", j}, {"value", c.at("concurrence")}, {"probability", c.at("probability")},
                         {"possible", c.at("possible")}});
      }
      rows.push_back({{"mode", modes[r]}, {"cells", cells}});
    }
    ctx.json("table1.json", Json{{"time_s", p.at("time_s")}, {"rows", rows}});
    return;
  }
  io::Table t;
  t.names = {"mode"};
  for (int j = 0; j <= max_fock; ++j) t.names.push_back("C_n" + std::to_string(j));
  for (int j = 0; j <= max_fock; ++j) t.names.push_back("P_n" + std::to_string(j));
  const auto rows = static_cast<Eigen::Index>(modes.size());
  std::vector<RealVector> cols(t.names.size(), RealVector(rows));
  for (Eigen::Index r = 0; r < rows; ++r) {
    cols[0][r] = modes[static_cast<std::size_t>(r)];
    for (int j = 0; j <= max_fock; ++j) {
      const auto& c = p.at("cells")[static_cast<std::size_t>(r) * static_cast<std::size_t>(max_fock + 1) +
                                    static_cast<std::size_t>(j)];
      cols[static_cast<std::size_t>(1 + j)][r] = c.at("concurrence").get<double>();
      cols[static_cast<std::size_t>(2 + max_fock + j)][r] = c.at("probability").get<double>();
    }
  }
  t.columns = std::move(cols);
  ctx.table("table1", t);
}

}  // namespace

Figure parse_figure(const std::string& name) {
  if (name == "fig3") return Figure::fig3;
  if (name == "fig4") return Figure::fig4;
  if (name == "fig5") return Figure::fig5;
  if (name == "table1") return Figure::table1;
  throw InvalidArgument("unknown figure '" + name + "' (expected fig3, fig4, fig5 or table1)");
}

const char* figure_name(Figure figure) {
  switch (figure) {
    case Figure::fig3: return "fig3";
    case Figure::fig4: return "fig4";
    case Figure::fig5: return "fig5";
    case Figure::table1: return "table1";
  }
  return "?";
}

std::vector<std::string> export_figure(const ExperimentConfig& config, Figure figure) {
  Context ctx{config, config.io.output_dir, fs::path(config.io.output_dir) / "figures", {}};
  fs::create_directories(ctx.figures);
  switch (figure) {
    case Figure::fig3: export_fig3(ctx); break;
    case Figure::fig4: export_fig4(ctx); break;
    case Figure::fig5: export_fig5(ctx); break;
    case Figure::table1: export_table1(ctx); break;
  }
  return ctx.written;
}

}  // namespace dcesim::pipeline
