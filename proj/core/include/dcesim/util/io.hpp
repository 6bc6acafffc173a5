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

#include "dcesim/common.hpp"

namespace dcesim::io {

enum class TableFormat { csv, json };
enum class MatrixEncoding { binary, text };

TableFormat parse_table_format(const std::string& name);
MatrixEncoding parse_matrix_encoding(const std::string& name);
const char* extension(TableFormat format);
const char* extension(MatrixEncoding encoding);

/// Named numeric columns of equal length.
struct Table {
  std::vector<std::string> names;
  std::vector<RealVector> columns;

  long rows() const { return columns.empty() ? 0 : columns.front().size(); }
  const RealVector& column(const std::string& name) const;
};

/// CSV: header line then one row per sample, values printed round-trip exact.
/// JSON: {"columns": [...], "data": {name: [...]}}.
void write_table(const std::filesystem::path& path, const Table& table, TableFormat format);
Table read_table(const std::filesystem::path& path, TableFormat format);

/// Dense row-major matrix. Binary is raw little-endian float64 with no header;
/// text is one whitespace-separated row per line.
void write_matrix(const std::filesystem::path& path, const RealMatrix& matrix, MatrixEncoding encoding);
RealMatrix read_matrix(const std::filesystem::path& path, MatrixEncoding encoding, long rows);

/// Interleaved (re, im) little-endian float64, row-major.
void write_complex_binary(const std::filesystem::path& path, const ComplexMatrix& matrix);
ComplexMatrix read_complex_binary(const std::filesystem::path& path, long rows, long cols);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace dcesim::io
