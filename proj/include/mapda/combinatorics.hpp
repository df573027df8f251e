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

#pragma once

#include "mapda/scalar.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mapda {

/// C(n, k), computed multiplicatively; zero when k < 0 or k > n.
BigInt binomial(long long n, long long k);

/// C(n, k) as a machine integer; throws DomainError on overflow.
std::int64_t binomial_small(int n, int k);

/// All k-subsets of {1..n} in lexicographic order, each sorted ascending.
std::vector<std::vector<int>> subsets(int n, int k);

/// 1-based lexicographic rank of a sorted k-subset of {1..n}.
std::int64_t lex_rank(std::span<const int> subset, int n);

}  // namespace mapda
