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
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <random>
#include <string>

#include "dcesim/pipeline/artifacts.hpp"
#include "dcesim/pipeline/config.hpp"
#include "dcesim/pipeline/export.hpp"
#include "dcesim/pipeline/pipeline.hpp"
#include "dcesim/util/io.hpp"

namespace dcesim::pipeline {
namespace {

using nlohmann::json;

// Small but fully valid experiment: coarse grid, few levels, short sample lists.
json small_config(const fs::path& root) {
  return json{{"soliton", {{"grid_points", 256}, {"dispersion_d2_mhz", 20.0}}},
              {"mw", {{"time_samples", 64}, {"galerkin_harmonics", 16}}},
              {"quantum",
               {{"levels", 4}, {"closed_window_us", 1.0}, {"closed_samples", 11}, {"open_window_us", 1.0},
                {"open_samples", 7}}},
              {"analysis", {{"display_levels", 2}, {"max_fock", 3}, {"snapshot_times_us", {0.5, 1.0}}}},
              {"io", {{"output_dir", (root / "out").string()}, {"cache_dir", (root / "cache").string()}}}};
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    root_ = fs::temp_directory_path() / ("dcesim-test-" + std::to_string(rd()));
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }
  const fs::path& root() const { return root_; }
  ExperimentConfig config(const json& patch = json::object()) const {
    json doc = small_config(root_);
    doc.merge_patch(patch);
    return validate_config(doc.dump());
  }

 private:
  fs::path root_;
};

std::vector<std::string> issues_of(const std::string& text) {
  try {
    validate_config(text);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<std::string>& issues, const std::string& needle) {
  for (const auto& i : issues)
    if (i.find(needle) != std::string::npos) return true;
  return false;
}

TEST(Config, EmptyDocumentMeansDefaults) {
  EXPECT_EQ(validate_config("").hash, default_config().hash);
  EXPECT_EQ(validate_config("{}").hash, default_config().hash);
  const auto c = default_config();
  EXPECT_EQ(c.soliton.lle.pump_strength_sq, 4.1);
  EXPECT_EQ(c.quantum.levels, 9);
  EXPECT_EQ(c.hash.size(), 64u);
}

TEST(Config, RejectsNegativeQualityFactor) {
  const auto issues = issues_of(R"({"soliton": {"loaded_q": -5}})");
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_TRUE(mentions(issues, "soliton.loaded_q"));
}

TEST(Config, SuggestsNearestKey) {
  EXPECT_TRUE(mentions(issues_of(R"({"solitonn": {}})"), "did you mean 'soliton'"));
  EXPECT_TRUE(mentions(issues_of(R"({"quantum": {"levles": 5}})"), "did you mean 'levels'"));
  EXPECT_EQ(levenshtein("kitten", "sitting"), 3u);
}

TEST(Config, ReportsEveryProblemAtOnce) {
  const auto issues = issues_of(R"({"soliton": {"loaded_q": -5}, "quantum": {"levels": "nine"}, "io": {"colour": 1}})");
  EXPECT_EQ(issues.size(), 3u);
  EXPECT_TRUE(mentions(issues, "soliton.loaded_q"));
  EXPECT_TRUE(mentions(issues, "quantum.levels"));
  EXPECT_TRUE(mentions(issues, "io.colour"));
}

TEST(Config, CrossFieldChecks) {
  EXPECT_TRUE(mentions(issues_of(R"({"analysis": {"max_fock": 9}})"), "max_fock"));
  EXPECT_TRUE(mentions(issues_of(R"({"quantum": {"levels": 17}})"), "capacity"));
  EXPECT_TRUE(mentions(issues_of(R"({"analysis": {"measured_modes": [3]}})"), "measured_modes"));
  EXPECT_THROW(validate_config("{not json"), ConfigError);
}

TEST(Config, HashIgnoresLayoutButTracksValues) {
  const auto a = validate_config(R"({"quantum": {"closed_samples": 401, "decay_rate_per_s": 2e5}})");
  const auto b = validate_config("{\n  \"quantum\" : {\"decay_rate_per_s\":200000.0,\n \"closed_samples\":401}}");
  const auto c = validate_config(R"({"quantum": {"closed_samples": 401, "decay_rate_per_s": 3e5}})");
  EXPECT_EQ(a.hash, b.hash);
  EXPECT_EQ(a.canonical, b.canonical);
  EXPECT_NE(a.hash, c.hash);
}

TEST(Config, OverridesReplaceStringValues) {
  const auto c = validate_config(with_overrides(R"({"io": {"output_dir": "a"}})", {{"io.output_dir", "b"}}));
  EXPECT_EQ(c.io.output_dir, "b");
}

TEST(Config, StageKeysChainUpstreamInputs) {
  const auto base = stage_keys(default_config());
  const auto decay = stage_keys(validate_config(R"({"quantum": {"decay_rate_per_s": 2e5}})"));
  for (int s = 0; s < 3; ++s) EXPECT_EQ(base[s], decay[s]);
  EXPECT_NE(base[3], decay[3]);
  EXPECT_NE(base[4], decay[4]);
  const auto pump = stage_keys(validate_config(R"({"soliton": {"detuning": 3.0}})"));
  for (int s = 0; s < 5; ++s) EXPECT_NE(base[s], pump[s]);
  const auto outdir = stage_keys(validate_config(R"({"io": {"output_dir": "elsewhere"}})"));
  EXPECT_EQ(base, outdir);
}

TEST_F(TempDir, ArtifactStoreCommitsAtomically) {
  ArtifactStore store(root() / "store");
  const auto scratch = store.begin("soliton", "abc123");
  io::write_text(scratch / "x.txt", "hello");
  EXPECT_FALSE(store.find("soliton", "abc123"));
  const auto dir = store.commit(scratch, "soliton", "abc123", "{}");
  EXPECT_EQ(store.find("soliton", "abc123"), dir);
  EXPECT_EQ(artifact_files(dir), std::vector<std::string>{"x.txt"});
  EXPECT_FALSE(fs::exists(scratch));
  EXPECT_THROW(store.require("modulation", "abc123"), DependencyError);
}

TEST_F(TempDir, TablesAndMatricesRoundTrip) {
  io::Table t;
  t.names = {"t_s", "value"};
  t.columns = {RealVector::LinSpaced(5, 0.0, 1.0), RealVector::Constant(5, 1.0 / 3.0)};
  for (auto fmt : {io::TableFormat::csv, io::TableFormat::json}) {
    const auto path = root() / (std::string("t") + io::extension(fmt));
    io::write_table(path, t, fmt);
    const auto back = io::read_table(path, fmt);
    EXPECT_EQ(back.names, t.names);
    EXPECT_EQ(back.column("value"), t.columns[1]);
  }
  RealMatrix m(2, 3);
  m << 1.0, -2.5, 1e-300, 3.0, 0.1, 7.0;
  for (auto enc : {io::MatrixEncoding::binary, io::MatrixEncoding::text}) {
    const auto path = root() / (std::string("m") + io::extension(enc));
    io::write_matrix(path, m, enc);
    EXPECT_EQ(io::read_matrix(path, enc, 2), m);
  }
}

TEST_F(TempDir, MissingUpstreamRaisesDependencyError) {
  const auto cfg = config();
  try {
    run_stage(cfg, Stage::hamiltonian);
    FAIL() << "expected DependencyError";
  } catch (const DependencyError& e) {
    EXPECT_EQ(e.stage(), "modulation");
  }
  EXPECT_THROW(export_figure(cfg, Figure::fig4), DependencyError);
}

TEST_F(TempDir, SecondRunIsServedFromCache) {
  const auto cfg = config();
  const auto first = run_pipeline(cfg);
  EXPECT_TRUE(first.invariants_passed);
  for (const auto& s : first.stages) EXPECT_FALSE(s.from_cache);
  const std::string manifest = io::read_text(first.manifest);
  const auto second = run_pipeline(cfg);
  for (const auto& s : second.stages) EXPECT_TRUE(s.from_cache) << stage_name(s.stage);
  EXPECT_EQ(io::read_text(second.manifest), manifest);

  const auto doc = json::parse(manifest);
  EXPECT_EQ(doc.at("config_hash"), cfg.hash);
  for (const auto& f : doc.at("files")) EXPECT_TRUE(fs::exists(root() / "out" / f.at("path").get<std::string>()));

  // A downstream-only change reuses the upstream artifacts.
  const auto changed = run_pipeline(config({{"quantum", {{"decay_rate_per_s", 2e5}}}}));
  for (const auto& s : changed.stages)
    EXPECT_EQ(s.from_cache, s.stage != Stage::evolution && s.stage != Stage::analysis) << stage_name(s.stage);
}

TEST_F(TempDir, ZeroOverlapStaysInVacuum) {
  RunOptions o;
  o.last_stage = Stage::evolution;
  o.write_outputs = false;
  const auto run = run_pipeline(config({{"device", {{"mode_overlap", 0.0}}}}), o);
  EXPECT_TRUE(run.invariants_passed);
  const auto h = load_hamiltonian(run.stages[2].dir);
  EXPECT_LT(h.beamsplitter.cwiseAbs().maxCoeff(), 1e-12 * h.fundamental);
  EXPECT_LT(h.pair.cwiseAbs().maxCoeff(), 1e-12 * h.fundamental);
  const auto table = load_table(run.stages[3].dir, "closed_photon_numbers");
  for (int m = 0; m < 3; ++m) EXPECT_LT(table.column("n_mode" + std::to_string(m)).cwiseAbs().maxCoeff(), 1e-20);
}

#ifdef DCESIM_CLI_PATH
int run_cli(const std::string& args) {
  const int status = std::system((std::string(DCESIM_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(TempDir, CliExitCodes) {
  const auto good = root() / "good.json";
  const auto bad = root() / "bad.json";
  io::write_text(good, small_config(root()).dump());
  io::write_text(bad, R"({"soliton": {"loaded_q": -1}})");
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli("keys"), 0);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("soliton --config " + bad.string()), 2);
  EXPECT_EQ(run_cli("hamiltonian -q --config " + good.string()), 4);
  EXPECT_EQ(run_cli("export fig4 -q --config " + good.string()), 4);
  EXPECT_EQ(run_cli("pipeline -q --config " + good.string()), 0);
  EXPECT_EQ(run_cli("pipeline --check -q --config " + good.string()), 0);
  // The table format is part of the artifact identity, so json exports need json artifacts.
  EXPECT_EQ(run_cli("export table1 -q --format json --config " + good.string()), 4);
  EXPECT_EQ(run_cli("export table1 -q --config " + good.string()), 0);
  EXPECT_TRUE(fs::exists(root() / "out" / "manifest.json"));
}
#endif

}  // namespace
}  // namespace dcesim::pipeline
