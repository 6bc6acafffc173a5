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

#include "dcesim/pipeline/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "../util/json_support.hpp"
#include "dcesim/util/digest.hpp"

namespace dcesim::pipeline {

using io::Json;

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string out = "invalid configuration:";
  for (const auto& i : issues) out += "\n  - " + i;
  return out;
}

enum class Kind { number, integer, boolean, string, number_list, integer_list };

using Check = std::function<std::string(const Json&)>;

struct Field {
  const char* section;
  const char* key;
  Kind kind;
  Json fallback;
  Check check;
};

Check positive() {
  return [](const Json& v) { return v.get<double>() > 0.0 ? "" : std::string("must be > 0"); };
}
Check non_negative() {
  return [](const Json& v) { return v.get<double>() >= 0.0 ? "" : std::string("must be >= 0"); };
}
Check in_range(double lo, double hi) {
  return [lo, hi](const Json& v) {
    const double x = v.get<double>();
    if (x >= lo && x <= hi) return std::string();
    std::ostringstream msg;
    msg << "must lie in [" << lo << ", " << hi << "]";
    return msg.str();
  };
}
Check at_least(long lo) {
  return [lo](const Json& v) { return v.get<long>() >= lo ? "" : "must be >= " + std::to_string(lo); };
}
Check one_of(std::vector<std::string> options) {
  return [options](const Json& v) {
    const auto s = v.get<std::string>();
    if (std::find(options.begin(), options.end(), s) != options.end()) return std::string();
    std::string msg = "must be one of";
    for (const auto& o : options) msg += " '" + o + "'";
    return msg;
  };
}
Check non_empty() {
  return [](const Json& v) { return v.get<std::string>().empty() ? std::string("must not be empty") : ""; };
}
Check any() {
  return [](const Json&) { return std::string(); };
}
Check all_non_negative() {
  return [](const Json& v) {
    for (const auto& x : v)
      if (!(x.get<double>() >= 0.0)) return std::string("entries must be >= 0");
    return std::string();
  };
}

const std::vector<Field>& schema() {
  static const std::vector<Field> fields = {
      {"soliton", "pump_strength_sq", Kind::number, 4.1, positive()},
      {"soliton", "detuning", Kind::number, 3.2, any()},
      {"soliton", "dispersion_d2_mhz", Kind::number, 1.5246, positive()},
      {"soliton", "loaded_q", Kind::number, 5e5, positive()},
      {"soliton", "pump_wavelength_nm", Kind::number, 1550.0, positive()},
      {"soliton", "grid_points", Kind::integer, 1024, at_least(64)},
      {"soliton", "step_normalized", Kind::number, 1e-3, positive()},
      {"soliton", "steady_tolerance", Kind::number, 1e-8, positive()},
      {"soliton", "max_time_normalized", Kind::number, 2000.0, positive()},
      {"device", "ring_radius_um", Kind::number, 200.0, positive()},
      {"device", "base_index", Kind::number, 1.9, positive()},
      {"device", "group_index", Kind::number, 2.1, positive()},
      {"device", "kerr_n2_m2_per_w", Kind::number, 2.4e-19, positive()},
      {"device", "mode_overlap", Kind::number, 0.1, in_range(0.0, 1.0)},
      {"device", "coupling_boost", Kind::number, 1.0, non_negative()},
      {"device", "mask_start_deg", Kind::number, 0.0, in_range(0.0, 360.0)},
      {"device", "mask_end_deg", Kind::number, 360.0, in_range(0.0, 360.0)},
      {"mw", "n_modes", Kind::integer, 3, at_least(1)},
      {"mw", "time_samples", Kind::integer, 256, at_least(64)},
      {"mw", "effective_index", Kind::number, nullptr, positive()},
      {"mw", "galerkin_harmonics", Kind::integer, 32, at_least(3)},
      {"mw", "doublet_policy", Kind::string, "strongest_drive", one_of({"strongest_drive", "symmetric"})},
      {"quantum", "levels", Kind::integer, 9, at_least(2)},
      {"quantum", "capacity_dim", Kind::integer, 4096, at_least(2)},
      {"quantum", "decay_rate_per_s", Kind::number, 1e5, non_negative()},
      {"quantum", "closed_window_us", Kind::number, 5.0, positive()},
      {"quantum", "closed_samples", Kind::integer, 501, at_least(2)},
      {"quantum", "open_window_us", Kind::number, 3.0, positive()},
      {"quantum", "open_samples", Kind::integer, 301, at_least(2)},
      {"quantum", "rtol", Kind::number, 1e-8, in_range(1e-14, 1e-2)},
      {"quantum", "atol", Kind::number, 1e-10, in_range(1e-16, 1e-2)},
      {"quantum", "truncation_threshold", Kind::number, 1e-4, in_range(0.0, 1.0)},
      {"analysis", "snapshot_times_us", Kind::number_list, Json::array({2.5, 5.0}), all_non_negative()},
      {"analysis", "display_levels", Kind::integer, 4, at_least(1)},
      {"analysis", "measured_modes", Kind::integer_list, Json::array({0, 1, 2}), all_non_negative()},
      {"analysis", "max_fock", Kind::integer, 8, at_least(0)},
      {"io", "output_dir", Kind::string, "dcesim-out", non_empty()},
      {"io", "cache_dir", Kind::string, ".dcesim-cache", non_empty()},
      {"io", "table_format", Kind::string, "csv", one_of({"csv", "json"})},
      {"io", "matrix_encoding", Kind::string, "binary", one_of({"binary", "text"})},
      {"io", "use_cache", Kind::boolean, true, any()},
      {"io", "abort_on_invariant_failure", Kind::boolean, true, any()},
  };
  return fields;
}

bool kind_matches(Kind kind, const Json& v) {
  switch (kind) {
    case Kind::number: return v.is_number();
    case Kind::integer: return v.is_number_integer();
    case Kind::boolean: return v.is_boolean();
    case Kind::string: return v.is_string();
    case Kind::number_list:
      return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_number(); });
    case Kind::integer_list:
      return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_number_integer(); });
  }
  return false;
}

const char* kind_name(Kind kind) {
  switch (kind) {
    case Kind::number: return "a number";
    case Kind::integer: return "an integer";
    case Kind::boolean: return "a boolean";
    case Kind::string: return "a string";
    case Kind::number_list: return "a list of numbers";
    case Kind::integer_list: return "a list of integers";
  }
  return "?";
}

std::string suggestion(const std::string& name, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_distance = std::string::npos;
  for (const auto& c : candidates) {
    const std::size_t d = levenshtein(name, c);
    if (d < best_distance) {
      best_distance = d;
      best = c;
    }
  }
  if (best.empty() || best_distance > std::max<std::size_t>(3, name.size() / 2)) return "";
  return " (did you mean '" + best + "'?)";
}

std::vector<std::string> sections() {
  std::vector<std::string> out;
  for (const auto& f : schema())
    if (std::find(out.begin(), out.end(), f.section) == out.end()) out.emplace_back(f.section);
  return out;
}

std::vector<std::string> keys_of(const std::string& section) {
  std::vector<std::string> out;
  for (const auto& f : schema())
    if (section == f.section) out.emplace_back(f.key);
  return out;
}

// Merges the user document over the defaults and records every problem.
Json normalize(const Json& user, std::vector<std::string>& issues) {
  Json merged = Json::object();
  for (const auto& s : sections()) merged[s] = Json::object();
  for (const auto& f : schema()) merged[f.section][f.key] = f.fallback;

  const auto known_sections = sections();
  for (const auto& [section, body] : user.items()) {
    if (std::find(known_sections.begin(), known_sections.end(), section) == known_sections.end()) {
      issues.push_back("unknown key '" + section + "'" + suggestion(section, known_sections));
      continue;
    }
    if (!body.is_object()) {
      issues.push_back("'" + section + "' must be an object");
      continue;
    }
    const auto known = keys_of(section);
    for (const auto& [key, value] : body.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        issues.push_back("unknown key '" + section + "." + key + "'" + suggestion(key, known));
        continue;
      }
      merged[section][key] = value;
    }
  }

  for (const auto& f : schema()) {
    const Json& v = merged[f.section][f.key];
    const std::string name = std::string(f.section) + "." + f.key;
    if (v.is_null() && f.fallback.is_null()) continue;
    if (!kind_matches(f.kind, v)) {
      issues.push_back("'" + name + "' must be " + kind_name(f.kind));
      continue;
    }
    if (const std::string why = f.check(v); !why.empty()) issues.push_back("'" + name + "' " + why);
  }
  return merged;
}

RealVector uniform_times(double window, int samples) {
  return RealVector::LinSpaced(samples, 0.0, window);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : Error(join_issues(issues)), issues_(std::move(issues)) {}

RealVector QuantumConfig::closed_times() const { return uniform_times(closed_window_s, closed_samples); }
RealVector QuantumConfig::open_times() const { return uniform_times(open_window_s, open_samples); }

std::size_t levenshtein(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<std::string> known_keys() {
  std::vector<std::string> out;
  for (const auto& f : schema()) out.push_back(std::string(f.section) + "." + f.key);
  return out;
}

ExperimentConfig validate_config(const std::string& raw_text) {
  std::vector<std::string> issues;
  Json user = Json::object();
  if (raw_text.find_first_not_of(" \t\r\n") != std::string::npos) {
    try {
      user = Json::parse(raw_text, nullptr, true, true);
    } catch (const Json::parse_error& e) {
      throw ConfigError({std::string("malformed JSON: ") + e.what()});
    }
    if (!user.is_object()) throw ConfigError({"top level must be an object"});
  }
  Json m = normalize(user, issues);
  if (!issues.empty()) throw ConfigError(std::move(issues));

  ExperimentConfig c;
  const auto& s = m["soliton"];
  c.soliton.dispersion_d2_mhz = s["dispersion_d2_mhz"].get<double>();
  c.soliton.lle.pump_strength_sq = s["pump_strength_sq"].get<double>();
  c.soliton.lle.detuning = s["detuning"].get<double>();
  c.soliton.lle.grid_points = s["grid_points"].get<int>();
  c.soliton.lle.step = s["step_normalized"].get<double>();
  c.soliton.lle.dispersion = lle::normalized_dispersion(c.soliton.dispersion_d2_mhz * 1e6, s["loaded_q"].get<double>(),
                                                        s["pump_wavelength_nm"].get<double>() * 1e-9);
  c.soliton.steady.tolerance = s["steady_tolerance"].get<double>();
  c.soliton.steady.max_time = s["max_time_normalized"].get<double>();

  const auto& d = m["device"];
  auto& p = c.device.physical;
  p.ring_radius_m = d["ring_radius_um"].get<double>() * 1e-6;
  p.base_index = d["base_index"].get<double>();
  p.group_index = d["group_index"].get<double>();
  p.pump_wavelength_m = s["pump_wavelength_nm"].get<double>() * 1e-9;
  p.nonlinear_index_m2_per_w = d["kerr_n2_m2_per_w"].get<double>();
  p.loaded_q = s["loaded_q"].get<double>();
  p.overlap = d["mode_overlap"].get<double>();
  p.coupling_boost = d["coupling_boost"].get<double>();
  c.device.mask_start_deg = d["mask_start_deg"].get<double>();
  c.device.mask_end_deg = d["mask_end_deg"].get<double>();
  if (!(c.device.mask_start_deg == 0.0 && c.device.mask_end_deg == 360.0))
    p.mask = lle::arc_mask(c.soliton.lle.grid_points, c.device.mask_start_deg * kPi / 180.0,
                           c.device.mask_end_deg * kPi / 180.0);

  const auto& w = m["mw"];
  c.mw.n_modes = w["n_modes"].get<int>();
  c.mw.time_samples = w["time_samples"].get<int>();
  c.mw.effective_index = w["effective_index"].is_null() ? p.group_index : w["effective_index"].get<double>();
  c.mw.solver.galerkin_harmonics = w["galerkin_harmonics"].get<int>();
  c.mw.doublet_policy =
      w["doublet_policy"].get<std::string>() == "symmetric" ? mw::DoubletPolicy::symmetric
                                                            : mw::DoubletPolicy::strongest_drive;

  const auto& q = m["quantum"];
  c.quantum.levels = q["levels"].get<int>();
  c.quantum.capacity_dim = q["capacity_dim"].get<long>();
  c.quantum.decay_rate_per_s = q["decay_rate_per_s"].get<double>();
  c.quantum.closed_window_s = q["closed_window_us"].get<double>() * 1e-6;
  c.quantum.closed_samples = q["closed_samples"].get<int>();
  c.quantum.open_window_s = q["open_window_us"].get<double>() * 1e-6;
  c.quantum.open_samples = q["open_samples"].get<int>();
  c.quantum.rtol = q["rtol"].get<double>();
  c.quantum.atol = q["atol"].get<double>();
  c.quantum.truncation_threshold = q["truncation_threshold"].get<double>();

  const auto& a = m["analysis"];
  c.analysis.snapshot_times_s.clear();
  for (const auto& t : a["snapshot_times_us"]) c.analysis.snapshot_times_s.push_back(t.get<double>() * 1e-6);
  c.analysis.display_levels = a["display_levels"].get<int>();
  c.analysis.measured_modes = a["measured_modes"].get<std::vector<int>>();
  c.analysis.max_fock = a["max_fock"].get<int>();

  const auto& o = m["io"];
  c.io.output_dir = o["output_dir"].get<std::string>();
  c.io.cache_dir = o["cache_dir"].get<std::string>();
  c.io.table_format = io::parse_table_format(o["table_format"].get<std::string>());
  c.io.matrix_encoding = io::parse_matrix_encoding(o["matrix_encoding"].get<std::string>());
  c.io.use_cache = o["use_cache"].get<bool>();
  c.io.abort_on_invariant_failure = o["abort_on_invariant_failure"].get<bool>();

  // Cross-field constraints.
  const auto check = [&](bool ok, const std::string& what) {
    if (!ok) issues.push_back(what);
  };
  const int n_grid = c.soliton.lle.grid_points;
  check(n_grid % 2 == 0, "'soliton.grid_points' must be even");
  check(c.mw.time_samples % 2 == 0, "'mw.time_samples' must be even");
  check(c.mw.solver.galerkin_harmonics > c.mw.n_modes + 1,
        "'mw.galerkin_harmonics' must exceed 'mw.n_modes' + 1");
  check(4 * c.mw.solver.galerkin_harmonics <= n_grid,
        "'mw.galerkin_harmonics' must satisfy 4 * galerkin_harmonics <= 'soliton.grid_points'");
  check(c.mw.n_modes <= 8, "'mw.n_modes' must be <= 8");
  {
    double dim = 1.0;
    for (int k = 0; k < c.mw.n_modes; ++k) dim *= c.quantum.levels;
    check(dim <= static_cast<double>(c.quantum.capacity_dim),
          "'quantum.levels'^'mw.n_modes' exceeds 'quantum.capacity_dim'");
  }
  check(c.analysis.display_levels <= c.quantum.levels, "'analysis.display_levels' must be <= 'quantum.levels'");
  check(c.analysis.max_fock < c.quantum.levels, "'analysis.max_fock' must be < 'quantum.levels'");
  for (int mode : c.analysis.measured_modes)
    check(mode < c.mw.n_modes, "'analysis.measured_modes' entry " + std::to_string(mode) + " is not below 'mw.n_modes'");
  for (double t : c.analysis.snapshot_times_s)
    check(t <= c.quantum.closed_window_s * (1.0 + 1e-12),
          "'analysis.snapshot_times_us' entries must lie inside 'quantum.closed_window_us'");
  try {
    c.soliton.lle.validate();
  } catch (const InvalidArgument& e) {
    issues.push_back(std::string("soliton: ") + e.what());
  }
  try {
    p.validate(n_grid);
  } catch (const InvalidArgument& e) {
    issues.push_back(std::string("device: ") + e.what());
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));

  c.canonical = m.dump();
  c.hash = sha256_hex(c.canonical);
  return c;
}

ExperimentConfig default_config() { return validate_config(""); }

std::string with_overrides(const std::string& raw_text,
                           const std::vector<std::pair<std::string, std::string>>& overrides) {
  Json doc = Json::object();
  if (raw_text.find_first_not_of(" \t\r\n") != std::string::npos) {
    try {
      doc = Json::parse(raw_text, nullptr, true, true);
    } catch (const Json::parse_error&) {
      return raw_text;
    }
    if (!doc.is_object()) return raw_text;
  }
  for (const auto& [path, value] : overrides) {
    const auto dot = path.find('.');
    if (dot == std::string::npos) throw InvalidArgument("override key must be section.key: " + path);
    Json& section = doc[path.substr(0, dot)];
    if (!section.is_object()) section = Json::object();
    section[path.substr(dot + 1)] = value;
  }
  return doc.dump();
}

ExperimentConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = io::read_text(path);
  } catch (const Error& e) {
    throw ConfigError({std::string("cannot read config: ") + e.what()});
  }
  return validate_config(text);
}

std::string stage_inputs(const ExperimentConfig& config, const std::string& stage) {
  const Json m = Json::parse(config.canonical);
  Json out = Json::object();
  out["stage"] = stage;
  if (stage == "soliton") {
    out["soliton"] = m["soliton"];
  } else if (stage == "modulation") {
    out["device"] = m["device"];
    out["time_samples"] = m["mw"]["time_samples"];
    out["effective_index"] = config.mw.effective_index;
  } else if (stage == "hamiltonian") {
    out["mw"] = m["mw"];
  } else if (stage == "evolution") {
    out["quantum"] = m["quantum"];
  } else if (stage == "analysis") {
    out["analysis"] = m["analysis"];
  } else {
    throw InvalidArgument("unknown stage '" + stage + "'");
  }
  // File formats change the artifact bytes, so they take part in every key.
  out["table_format"] = m["io"]["table_format"];
  out["matrix_encoding"] = m["io"]["matrix_encoding"];
  return out.dump();
}

}  // namespace dcesim::pipeline
