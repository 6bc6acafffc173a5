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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dcesim/common.hpp"

namespace dcesim::pipeline {

namespace fs = std::filesystem;

/// A stage needs an artifact that has not been produced yet.
class DependencyError : public Error {
 public:
  DependencyError(std::string stage, const std::string& what) : Error(what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// sha256(upstream_key + "\n" + inputs): changes whenever any upstream input changes.
std::string stage_key(const std::string& upstream_key, const std::string& inputs);

/// Content-addressed stage directories `<root>/<stage>-<key prefix>`.
/// A directory only appears once complete: stages write into a scratch
/// directory that is renamed into place on commit.
class ArtifactStore {
 public:
  explicit ArtifactStore(fs::path root);

  const fs::path& root() const { return root_; }
  fs::path directory(const std::string& stage, const std::string& key) const;
  std::optional<fs::path> find(const std::string& stage, const std::string& key) const;
  fs::path require(const std::string& stage, const std::string& key) const;

  /// Fresh scratch directory for building an artifact.
  fs::path begin(const std::string& stage, const std::string& key) const;
  /// Writes the marker file and moves the scratch directory into place,
  /// replacing any previous artifact with the same key.
  fs::path commit(const fs::path& scratch, const std::string& stage, const std::string& key,
                  const std::string& inputs) const;

 private:
  fs::path root_;
};

inline constexpr const char* kArtifactMarker = "artifact.json";

/// Regular files below `dir`, relative, sorted, excluding the marker.
std::vector<std::string> artifact_files(const fs::path& dir);

}  // namespace dcesim::pipeline
