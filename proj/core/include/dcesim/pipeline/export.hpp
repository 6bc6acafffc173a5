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
#include <string>
#include <vector>

#include "dcesim/pipeline/config.hpp"

namespace dcesim::pipeline {

enum class Figure { fig3, fig4, fig5, table1 };

Figure parse_figure(const std::string& name);
const char* figure_name(Figure figure);

/// Writes plot-ready data for `figure` under `<out>/figures/` from the cached
/// artifacts of `config`. Throws DependencyError naming the stage to run when
/// an artifact is missing. Returns the files written, relative to `out`.
std::vector<std::string> export_figure(const ExperimentConfig& config, Figure figure);

}  // namespace dcesim::pipeline
