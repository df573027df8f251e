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

#include "mapda/channel.hpp"

#include <fstream>
#include <istream>
#include <random>
#include <sstream>

namespace mapda {

namespace {

// Non-comment, non-blank lines split into tokens.
std::vector<std::vector<std::string>> token_lines(std::istream& in) {
  std::vector<std::vector<std::string>> out;
  for (std::string line; std::getline(in, line);) {
    auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream is(line);
    std::vector<std::string> toks;
    for (std::string t; is >> t;) toks.push_back(t);
    out.push_back(std::move(toks));
  }
  return out;
}

int parse_dim(const std::string& tok, const char* what) {
  Rational r = Rational::parse(tok);
  if (!r.is_integer() || r < Rational(1) || r > Rational(1 << 20))
    throw ParseError(std::string("malformed ") + what + " '" + tok + "'");
  return r.numerator().convert_to<int>();
}

template <Field S>
Matrix<S> parse_table(std::istream& in, const char* what) {
  auto lines = token_lines(in);
  if (lines.empty() || lines.front().size() != 2)
    throw ParseError(std::string(what) + ": missing two-field header");
  const int rows = parse_dim(lines[0][0], "row count");
  const int cols = parse_dim(lines[0][1], "column count");
  if (static_cast<int>(lines.size()) - 1 != rows)
    throw ParseError(std::string(what) + ": expected " + std::to_string(rows) + " rows, found " +
                     std::to_string(lines.size() - 1));
  Matrix<S> m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const auto& toks = lines[static_cast<std::size_t>(i) + 1];
    if (static_cast<int>(toks.size()) != cols)
      throw ParseError(std::string(what) + ": row " + std::to_string(i + 1) + " has " +
                       std::to_string(toks.size()) + " entries, expected " + std::to_string(cols));
    for (int j = 0; j < cols; ++j) m(i, j) = ScalarTraits<S>::parse(toks[static_cast<std::size_t>(j)]);
  }
  return m;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

ChannelMatrix<Complex> random_channel(int antennas, int users, std::uint64_t seed) {
  if (antennas < 1 || users < 1) throw DomainError("channel dimensions must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ChannelMatrix<Complex> ch;
  ch.h.resize(antennas, users);
  for (Index k = 0; k < users; ++k)
    for (Index l = 0; l < antennas; ++l) {
      const double re = normal(rng);
      const double im = normal(rng);
      ch.h(l, k) = Complex(re, im);
    }
  ch.provenance = "seeded-random";
  ch.seed = seed;
  return ch;
}

ChannelMatrix<Rational> cauchy_channel(int antennas, int users) {
  if (antennas < 1 || users < 1) throw DomainError("channel dimensions must be positive");
  ChannelMatrix<Rational> ch;
  ch.h.resize(antennas, users);
  // 1-based nodes x_l = l and y_k = -k, so x_l - y_k = l + k never vanishes.
  for (Index l = 0; l < antennas; ++l)
    for (Index k = 0; k < users; ++k) ch.h(l, k) = Rational(1) / Rational(l + k + 2);
  ch.provenance = "cauchy";
  return ch;
}

template <Field S>
ChannelMatrix<S> fixture_channel(const std::vector<std::vector<S>>& rows) {
  if (rows.empty() || rows.front().empty()) throw ParseError("empty channel fixture");
  ChannelMatrix<S> ch;
  ch.h.resize(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t l = 0; l < rows.size(); ++l) {
    if (rows[l].size() != rows.front().size()) throw ParseError("ragged channel fixture");
    for (std::size_t k = 0; k < rows[l].size(); ++k)
      ch.h(static_cast<Index>(l), static_cast<Index>(k)) = rows[l][k];
  }
  ch.provenance = "fixture";
  return ch;
}

template <Field S>
ChannelMatrix<S> parse_channel(std::istream& in) {
  ChannelMatrix<S> ch;
  ch.h = parse_table<S>(in, "channel");
  ch.provenance = "fixture";
  return ch;
}

template <Field S>
ChannelMatrix<S> read_channel(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_channel<S>(in);
}

bool channel_file_is_rational(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  try {
    parse_table<Rational>(in, "channel");
    return true;
  } catch (const ParseError&) {
    return false;
  }
}

template <Field S>
ChannelMatrix<S> restrict_users(const ChannelMatrix<S>& ch, const std::vector<int>& users) {
  std::vector<Index> cols(users.begin(), users.end());
  ChannelMatrix<S> out = ch;
  out.h = select_columns(ch.h, cols);
  return out;
}

template <Field S>
Matrix<S> parse_library(std::istream& in) {
  return parse_table<S>(in, "library");
}

template <Field S>
Matrix<S> read_library(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_library<S>(in);
}

template <Field S>
Matrix<S> random_library(int files, int parts, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix<S> lib(files, parts);
  if constexpr (ScalarTraits<S>::exact) {
    std::uniform_int_distribution<int> num(-50, 50);
    std::uniform_int_distribution<int> den(1, 20);
    for (Index n = 0; n < files; ++n)
      for (Index f = 0; f < parts; ++f) {
        const int p = num(rng);
        const int q = den(rng);
        lib(n, f) = Rational(p) / Rational(q);
      }
  } else {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Index n = 0; n < files; ++n)
      for (Index f = 0; f < parts; ++f) {
        const double re = normal(rng);
        const double im = normal(rng);
        lib(n, f) = Complex(re, im);
      }
  }
  return lib;
}

#define MAPDA_INSTANTIATE(S)                                                          \
  template ChannelMatrix<S> fixture_channel<S>(const std::vector<std::vector<S>>&);  \
  template ChannelMatrix<S> parse_channel<S>(std::istream&);                         \
  template ChannelMatrix<S> read_channel<S>(const std::filesystem::path&);           \
  template ChannelMatrix<S> restrict_users<S>(const ChannelMatrix<S>&,               \
                                              const std::vector<int>&);              \
  template Matrix<S> parse_library<S>(std::istream&);                                \
  template Matrix<S> read_library<S>(const std::filesystem::path&);                  \
  template Matrix<S> random_library<S>(int, int, std::uint64_t);

MAPDA_INSTANTIATE(Rational)
MAPDA_INSTANTIATE(Complex)

#undef MAPDA_INSTANTIATE

}  // namespace mapda
