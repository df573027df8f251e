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
#include "mapda/channel.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <sstream>

using namespace mapda;

namespace {

Mapda read(const std::string& text) {
  std::istringstream in(text);
  return read_mapda(in);
}

}  // namespace

TEST_CASE("the shipped worked-example file reads back as the literal array") {
  Mapda m = read_mapda(mapda::testing::data_path("example1.mapda"));
  CHECK(m == mapda::testing::example1());
}

TEST_CASE("round trip through text") {
  for (const Mapda& m : {mapda::testing::example1(), generate_mn_pda(5, 2), generate_cyclic(7, 3),
                         replicate(generate_mn_pda(4, 1), 2)}) {
    const std::string text = to_text(m);
    CHECK(read(text) == m);
    CHECK(to_text(read(text)) == text);
  }
}

TEST_CASE("header may leave Z and S to be derived") {
  Mapda m = read("# derived\n2 6 3 - -\n* 1 2 * 1 2\n1 * 3 1 * 3\n\n2 3 * 2 3 *\n");
  CHECK(m.stars_per_col() == 1);
  CHECK(m.slots() == 3);
}

TEST_CASE("syntax errors are ParseError") {
  CHECK_THROWS_AS(read(""), ParseError);
  CHECK_THROWS_AS(read("2 6 3 1\n"), ParseError);
  CHECK_THROWS_AS(read("2 2 2 1 2\n* 1\n"), ParseError);             // missing row
  CHECK_THROWS_AS(read("2 2 2 1 2\n* 1\n2\n"), ParseError);          // short row
  CHECK_THROWS_AS(read("2 2 2 1 2\n* 1\n0 *\n"), ParseError);        // ids start at 1
  CHECK_THROWS_AS(read("2 2 2 1 2\n* 1\n-2 *\n"), ParseError);
  CHECK_THROWS_AS(read("2 2 2 1 2\n* 1\nx *\n"), ParseError);
  CHECK_THROWS_AS(read("0 2 2 1 2\n* 1\n2 *\n"), ParseError);
  CHECK_THROWS_AS(parse_entry("1.5"), ParseError);
  try {
    read("1 2 2 1 2\n* 1\n0 *\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("slot ids start at 1") != std::string::npos);
  }
}

TEST_CASE("semantic errors are ValidationFailure") {
  CHECK_THROWS_AS(read("1 6 3 1 3\n* 1 2 * 1 2\n1 * 3 1 * 3\n2 3 * 2 3 *\n"), ValidationFailure);  // C4 at L=1
  CHECK_THROWS_AS(read("2 6 3 2 3\n* 1 2 * 1 2\n1 * 3 1 * 3\n2 3 * 2 3 *\n"), ValidationFailure);  // Z
  CHECK_THROWS_AS(read("2 6 3 1 4\n* 1 2 * 1 2\n1 * 3 1 * 3\n2 3 * 2 3 *\n"), ValidationFailure);  // S
}

TEST_CASE("missing files are IoError") {
  CHECK_THROWS_AS(read_mapda(std::filesystem::path("/nonexistent/x.mapda")), IoError);
  CHECK_THROWS_AS(read_channel<Rational>("/nonexistent/h.txt"), IoError);
}

TEST_CASE("channel and library fixtures") {
  auto h = read_channel<Rational>(mapda::testing::data_path("example1_channel.txt"));
  CHECK(h.antennas() == 2);
  CHECK(h.users() == 6);
  auto sub = restrict_users(h, {0, 1, 3, 4});
  Matrix<Rational> want(2, 4);
  want << Rational(1), Rational(1), Rational(1), Rational(1), Rational(2), Rational(3), Rational(4), Rational(5);
  CHECK(sub.h == want);
  CHECK(channel_file_is_rational(mapda::testing::data_path("example1_channel.txt")));

  std::istringstream cplx("2 2\n1+i 0\n-i 1/2\n");
  auto hc = parse_channel<Complex>(cplx);
  CHECK(hc.h(0, 0) == Complex(1, 1));
  CHECK(hc.h(1, 1) == Complex(0.5, 0));
  std::istringstream cplx2("2 2\n1+i 0\n-i 1/2\n");
  CHECK_THROWS_AS(parse_channel<Rational>(cplx2), ParseError);
  std::istringstream ragged("2 2\n1 2\n3\n");
  CHECK_THROWS_AS(parse_channel<Rational>(ragged), ParseError);

  std::istringstream lib("2 3\n1 2 3\n4 5 6\n");
  auto w = parse_library<Rational>(lib);
  CHECK(w(1, 2) == Rational(6));
}

TEST_CASE("seeded channels are deterministic") {
  auto a = random_channel(2, 6, 42);
  auto b = random_channel(2, 6, 42);
  auto c = random_channel(2, 6, 43);
  CHECK(a.h == b.h);
  CHECK(a.h != c.h);
  CHECK(a.provenance == "seeded-random");
  CHECK(a.seed == std::uint64_t{42});
  CHECK(random_library<Rational>(3, 4, 9) == random_library<Rational>(3, 4, 9));
}

TEST_CASE("the exact default channel has nonsingular square submatrices") {
  auto h = cauchy_channel(3, 5);
  for (Index a = 0; a < 5; ++a)
    for (Index b = a + 1; b < 5; ++b)
      for (Index c = b + 1; c < 5; ++c) CHECK(rank(select_columns(h.h, {a, b, c})) == 3);
  for (Index a = 0; a < 5; ++a)
    for (Index b = a + 1; b < 5; ++b) {
      Matrix<Rational> two = select_columns(h.h, {a, b}).topRows(2);
      CHECK(rank(two) == 2);
    }
}
