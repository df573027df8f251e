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

/**
 * @file array_io.hpp
 * @brief Text format for MAPDA files.
 *
 *     # comment lines start with '#'
 *     L K F Z S        Z and S may be '-' (derive)
 *     * 1 2 * 1 2      F lines of K tokens, '*' or a positive integer
 *     ...
 *
 * Writers always emit explicit Z and S.
 */

#pragma once

#include "mapda/array.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace mapda {

/// A syntactically well-formed file, before validation.
struct MapdaFile {
  int antennas = 0;
  std::optional<int> stars;  // declared Z
  std::optional<int> slots;  // declared S
  Grid grid{1, 1};
};

/// '*' or a positive decimal integer; ParseError otherwise.
Entry parse_entry(std::string_view token);

/// Syntax only. Throws ParseError.
MapdaFile parse_mapda(std::istream& in);

/// Parses, then validates at the declared L. Declared Z and S must match the
/// derived ones. Throws ParseError or ValidationFailure.
Mapda read_mapda(std::istream& in);
Mapda read_mapda(const std::filesystem::path& path);

void write_mapda(std::ostream& out, const Mapda& m);
void write_mapda(const std::filesystem::path& path, const Mapda& m);
std::string to_text(const Mapda& m);

/// Grid rows as text, one row per string, tokens separated by spaces.
Grid parse_grid(const std::vector<std::string>& rows);

}  // namespace mapda
