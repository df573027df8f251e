/*
 * Copyright 2026 The MAPDA-MIR Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mapda/array_io.hpp"

#include "mapda/errors.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

namespace mapda {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

bool is_ignorable(const std::string& line) {
  auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

long long parse_count(std::string_view token, const char* what) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value < 0)
    throw ParseError(std::string("malformed ") + what + " '" + std::string(token) + "'");
  return value;
}

std::optional<int> parse_optional_count(std::string_view token, const char* what) {
  if (token == "-") return std::nullopt;
  return static_cast<int>(parse_count(token, what));
}

}  // namespace

Entry parse_entry(std::string_view token) {
  if (token == "*") return Entry::star();
  if (token.empty() || token.front() == '-' || token.front() == '+')
    throw ParseError("malformed token '" + std::string(token) + "'");
  long long id = parse_count(token, "token");
  if (id < 1) throw ParseError("slot ids start at 1 (got '" + std::string(token) + "')");
  try {
    return Entry::slot(id);
  } catch (const NonPositiveSlotId& e) {
    throw ParseError(e.what());
  }
}

MapdaFile parse_mapda(std::istream& in) {
  std::vector<std::vector<std::string>> lines;
  std::vector<int> line_numbers;
  int number = 0;
  for (std::string line; std::getline(in, line);) {
    ++number;
    if (is_ignorable(line)) continue;
    lines.push_back(tokens_of(line));
    line_numbers.push_back(number);
  }
  if (lines.empty()) throw ParseError("missing header line 'L K F Z S'");
  const auto& header = lines.front();
  if (header.size() != 5) throw ParseError("header must have 5 fields 'L K F Z S'");

  MapdaFile out;
  out.antennas = static_cast<int>(parse_count(header[0], "L"));
  const long long K = parse_count(header[1], "K");
  const long long F = parse_count(header[2], "F");
  out.stars = parse_optional_count(header[3], "Z");
  out.slots = parse_optional_count(header[4], "S");
  if (out.antennas < 1 || K < 1 || F < 1) throw ParseError("L, K and F must be positive");

  if (static_cast<long long>(lines.size()) - 1 != F)
    throw ParseError("expected " + std::to_string(F) + " grid rows, found " +
                     std::to_string(lines.size() - 1));

  Grid g(static_cast<std::size_t>(F), static_cast<std::size_t>(K));
  for (std::size_t f = 0; f < static_cast<std::size_t>(F); ++f) {
    const auto& row = lines[f + 1];
    if (static_cast<long long>(row.size()) != K)
      throw ParseError("line " + std::to_string(line_numbers[f + 1]) + ": expected " +
                       std::to_string(K) + " tokens, found " + std::to_string(row.size()));
    for (std::size_t k = 0; k < row.size(); ++k) g(f, k) = parse_entry(row[k]);
  }
  out.grid = std::move(g);
  return out;
}

Mapda read_mapda(std::istream& in) {
  MapdaFile file = parse_mapda(in);
  Mapda m = Mapda::create(file.grid, file.antennas);
  if (file.stars && *file.stars != m.stars_per_col())
    throw ValidationFailure("declared Z=" + std::to_string(*file.stars) + " but columns hold " +
                            std::to_string(m.stars_per_col()) + " stars");
  if (file.slots && *file.slots != m.slots())
    throw ValidationFailure("declared S=" + std::to_string(*file.slots) + " but the largest id is " +
                            std::to_string(m.slots()));
  return m;
}

Mapda read_mapda(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_mapda(in);
}

void write_mapda(std::ostream& out, const Mapda& m) {
  out << m.antennas() << ' ' << m.users() << ' ' << m.rows() << ' ' << m.stars_per_col() << ' '
      << m.slots() << '\n';
  const auto& g = m.grid();
  for (std::size_t f = 0; f < g.rows(); ++f) {
    for (std::size_t k = 0; k < g.cols(); ++k) {
      if (k) out << ' ';
      if (g(f, k).is_star())
        out << '*';
      else
        out << g(f, k).slot_id();
    }
    out << '\n';
  }
}

void write_mapda(const std::filesystem::path& path, const Mapda& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_mapda(out, m);
  if (!out) throw IoError("write failed: " + path.string());
}

std::string to_text(const Mapda& m) {
  std::ostringstream os;
  write_mapda(os, m);
  return os.str();
}

Grid parse_grid(const std::vector<std::string>& rows) {
  std::vector<std::vector<Entry>> cells;
  for (const auto& row : rows) {
    std::vector<Entry> line;
    for (const auto& tok : tokens_of(row)) line.push_back(parse_entry(tok));
    cells.push_back(std::move(line));
  }
  return Grid::from_rows(cells);
}

}  // namespace mapda
