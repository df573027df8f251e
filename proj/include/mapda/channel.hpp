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
 * @file channel.hpp
 * @brief Channel matrices and packet libraries.
 *
 * Channel fixture file:
 *
 *     L K
 *     h11 h12 ... h1K
 *     ...
 *     hL1 hL2 ... hLK
 *
 * Library fixture file: an "N F" header, then N lines of F values. Entries
 * are integers, rationals "p/q", decimals, or complex literals "a+bi" (float
 * backend only). Lines starting with '#' are ignored.
 */

#pragma once

#include "mapda/linalg.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mapda {

/// L x K matrix; column k is the channel vector of user k.
template <Field S>
struct ChannelMatrix {
  Matrix<S> h;
  std::string provenance;  // "fixture", "seeded-random" or "cauchy"
  std::optional<std::uint64_t> seed;

  int antennas() const { return static_cast<int>(h.rows()); }
  int users() const { return static_cast<int>(h.cols()); }
};

/// i.i.d. entries with independent standard-normal real and imaginary parts.
/// Same seed, same matrix.
ChannelMatrix<Complex> random_channel(int antennas, int users, std::uint64_t seed);

/// Exact channel h(l,k) = 1 / (l + k) with 1-based l and k. This is a Cauchy
/// matrix with disjoint nodes, so every square submatrix is nonsingular.
ChannelMatrix<Rational> cauchy_channel(int antennas, int users);

/// Channel from explicit rows, e.g. {{1,1,1,1},{2,3,4,5}}.
template <Field S>
ChannelMatrix<S> fixture_channel(const std::vector<std::vector<S>>& rows);

template <Field S>
ChannelMatrix<S> parse_channel(std::istream& in);

template <Field S>
ChannelMatrix<S> read_channel(const std::filesystem::path& path);

/// True when every token of the channel file parses as a rational.
bool channel_file_is_rational(const std::filesystem::path& path);

/// Columns `users` (0-based) of the channel.
template <Field S>
ChannelMatrix<S> restrict_users(const ChannelMatrix<S>& ch, const std::vector<int>& users);

/// N x F matrix of packet values; entry (n, f) is part f of file n.
template <Field S>
Matrix<S> parse_library(std::istream& in);

template <Field S>
Matrix<S> read_library(const std::filesystem::path& path);

/// Seeded library. Exact: p/q with p in [-50, 50], q in [1, 20]. Float:
/// complex standard normals.
template <Field S>
Matrix<S> random_library(int files, int parts, std::uint64_t seed);

}  // namespace mapda
