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

#include "dcesim/pipeline/artifacts.hpp"

#include <algorithm>
#include <atomic>
#include <random>

#include <unistd.h>

#include "../util/json_support.hpp"
#include "dcesim/util/digest.hpp"
#include "dcesim/util/io.hpp"

namespace dcesim::pipeline {

std::string stage_key(const std::string& upstream_key, const std::string& inputs) {
  return sha256_hex(upstream_key + "\n" + inputs);
}

ArtifactStore::ArtifactStore(fs::path root) : root_(std::move(root)) {}

fs::path ArtifactStore::directory(const std::string& stage, const std::string& key) const {
  return root_ / (stage + "-" + key.substr(0, 16));
}

std::optional<fs::path> ArtifactStore::find(const std::string& stage, const std::string& key) const {
  const fs::path dir = directory(stage, key);
  std::error_code ec;
  if (!fs::is_regular_file(dir / kArtifactMarker, ec)) return std::nullopt;
  try {
    const auto marker = io::Json::parse(io::read_text(dir / kArtifactMarker));
    if (marker.value("key", std::string()) != key) return std::nullopt;
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return dir;
}

fs::path ArtifactStore::require(const std::string& stage, const std::string& key) const {
  if (auto dir = find(stage, key)) return *dir;
  throw DependencyError(stage, "missing '" + stage + "' artifact for the current configuration; run `dcesim " +
                                   stage + "` (or `dcesim pipeline`) first");
}

fs::path ArtifactStore::begin(const std::string& stage, const std::string& key) const {
  static std::atomic<unsigned> counter{0};
  fs::create_directories(root_);
  const fs::path scratch = root_ / (".scratch-" + stage + "-" + key.substr(0, 16) + "-" +
                                    std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  return scratch;
}

fs::path ArtifactStore::commit(const fs::path& scratch, const std::string& stage, const std::string& key,
                               const std::string& inputs) const {
  io::Json marker;
  marker["stage"] = stage;
  marker["key"] = key;
  marker["inputs"] = io::Json::parse(inputs);
  io::write_text(scratch / kArtifactMarker, marker.dump(2) + "\n");
  const fs::path target = directory(stage, key);
  std::error_code ec;
  if (fs::exists(target, ec)) {
    // Move the stale copy aside first so the final rename stays atomic.
    const fs::path stale = scratch.string() + ".old";
    fs::rename(target, stale);
    fs::rename(scratch, target);
    fs::remove_all(stale, ec);
  } else {
    fs::rename(scratch, target);
  }
  return target;
}

std::vector<std::string> artifact_files(const fs::path& dir) {
  std::vector<std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel = fs::relative(entry.path(), dir).generic_string();
    if (rel != kArtifactMarker) out.push_back(rel);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dcesim::pipeline
