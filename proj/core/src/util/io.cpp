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

#include "dcesim/util/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json_support.hpp"

namespace dcesim::io {
namespace {

std::uint64_t to_little_endian(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= ((bits >> (8 * i)) & 0xFFu) << (8 * (7 - i));
    return out;
  }
  return bits;
}

void put_double(std::ostream& out, double value) {
  const auto bits = to_little_endian(std::bit_cast<std::uint64_t>(value));
  char bytes[8];
  std::memcpy(bytes, &bits, 8);
  out.write(bytes, 8);
}

std::vector<double> read_doubles(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (raw.size() % 8 != 0) throw InvalidArgument(path.string() + ": size is not a multiple of 8 bytes");
  std::vector<double> values(raw.size() / 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, raw.data() + 8 * i, 8);
    values[i] = std::bit_cast<double>(to_little_endian(bits));
  }
  return values;
}

std::ofstream open_for_write(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

double parse_double(std::string_view token, const std::filesystem::path& path) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw InvalidArgument(path.string() + ": bad number '" + std::string(token) + "'");
  return value;
}

}  // namespace

TableFormat parse_table_format(const std::string& name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "json") return TableFormat::json;
  throw InvalidArgument("unknown table format '" + name + "' (expected csv or json)");
}

MatrixEncoding parse_matrix_encoding(const std::string& name) {
  if (name == "binary") return MatrixEncoding::binary;
  if (name == "text") return MatrixEncoding::text;
  throw InvalidArgument("unknown matrix encoding '" + name + "' (expected binary or text)");
}

const char* extension(TableFormat format) { return format == TableFormat::csv ? ".csv" : ".json"; }
const char* extension(MatrixEncoding encoding) { return encoding == MatrixEncoding::binary ? ".f64" : ".txt"; }

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) throw Error("format_double failed");
  return std::string(buffer, ptr);
}

const RealVector& Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return columns[i];
  throw InvalidArgument("table has no column '" + name + "'");
}

void write_table(const std::filesystem::path& path, const Table& table, TableFormat format) {
  if (table.names.size() != table.columns.size()) throw InvalidArgument("table: names/columns mismatch");
  for (const auto& c : table.columns)
    if (c.size() != table.rows()) throw InvalidArgument("table: ragged columns");
  auto out = open_for_write(path);
  if (format == TableFormat::csv) {
    for (std::size_t i = 0; i < table.names.size(); ++i) out << (i ? "," : "") << table.names[i];
    out << '\n';
    for (long r = 0; r < table.rows(); ++r) {
      for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << format_double(table.columns[i][r]);
      out << '\n';
    }
    return;
  }
  Json data = Json::object();
  for (std::size_t i = 0; i < table.names.size(); ++i) data[table.names[i]] = real_vector_to_json(table.columns[i]);
  out << Json{{"columns", table.names}, {"data", data}}.dump(1) << '\n';
}

Table read_table(const std::filesystem::path& path, TableFormat format) {
  const std::string text = read_text(path);
  Table table;
  if (format == TableFormat::json) {
    const auto doc = Json::parse(text);
    table.names = doc.at("columns").get<std::vector<std::string>>();
    for (const auto& name : table.names) table.columns.push_back(real_vector_from_json(doc.at("data").at(name)));
    return table;
  }
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument(path.string() + ": empty table");
  std::stringstream header(line);
  for (std::string name; std::getline(header, name, ',');) table.names.push_back(name);
  std::vector<std::vector<double>> values(table.names.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::size_t i = 0;
    for (std::string token; std::getline(row, token, ','); ++i) {
      if (i >= values.size()) throw InvalidArgument(path.string() + ": too many fields");
      values[i].push_back(parse_double(token, path));
    }
    if (i != values.size()) throw InvalidArgument(path.string() + ": too few fields");
  }
  for (const auto& v : values)
    table.columns.push_back(Eigen::Map<const RealVector>(v.data(), static_cast<Eigen::Index>(v.size())));
  return table;
}

void write_matrix(const std::filesystem::path& path, const RealMatrix& matrix, MatrixEncoding encoding) {
  if (encoding == MatrixEncoding::binary) {
    auto out = open_for_write(path, std::ios::binary);
    for (Eigen::Index r = 0; r < matrix.rows(); ++r)
      for (Eigen::Index c = 0; c < matrix.cols(); ++c) put_double(out, matrix(r, c));
    return;
  }
  auto out = open_for_write(path);
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) out << (c ? " " : "") << format_double(matrix(r, c));
    out << '\n';
  }
}

RealMatrix read_matrix(const std::filesystem::path& path, MatrixEncoding encoding, long rows) {
  std::vector<double> values;
  if (encoding == MatrixEncoding::binary) {
    values = read_doubles(path);
  } else {
    std::istringstream in(read_text(path));
    for (std::string token; in >> token;) values.push_back(parse_double(token, path));
  }
  if (rows <= 0 || values.size() % static_cast<std::size_t>(rows) != 0)
    throw InvalidArgument(path.string() + ": element count not divisible by row count");
  const long cols = static_cast<long>(values.size()) / rows;
  return Eigen::Map<const RealMatrix>(values.data(), rows, cols);
}

void write_complex_binary(const std::filesystem::path& path, const ComplexMatrix& matrix) {
  auto out = open_for_write(path, std::ios::binary);
  for (Eigen::Index r = 0; r < matrix.rows(); ++r)
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      put_double(out, matrix(r, c).real());
      put_double(out, matrix(r, c).imag());
    }
}

ComplexMatrix read_complex_binary(const std::filesystem::path& path, long rows, long cols) {
  const auto values = read_doubles(path);
  if (values.size() != static_cast<std::size_t>(2 * rows * cols))
    throw InvalidArgument(path.string() + ": unexpected size for complex matrix");
  ComplexMatrix m(rows, cols);
  std::size_t k = 0;
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c, k += 2) m(r, c) = Complex(values[k], values[k + 1]);
  return m;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_for_write(path, std::ios::binary);
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace dcesim::io
