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

#include "mapda/combinatorics.hpp"

#include "mapda/errors.hpp"

#include <limits>
#include <string>

namespace mapda {

BigInt binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (long long i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;  // exact: result is C(n-k+i, i) here
  }
  return result;
}

std::int64_t binomial_small(int n, int k) {
  BigInt b = binomial(n, k);
  if (b > std::numeric_limits<std::int64_t>::max())
    throw DomainError("C(" + std::to_string(n) + "," + std::to_string(k) + ") overflows");
  return b.convert_to<std::int64_t>();
}

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> cur(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i + 1;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::int64_t lex_rank(std::span<const int> subset, int n) {
  const int k = static_cast<int>(subset.size());
  std::int64_t rank = 0;
  int prev = 0;
  for (int i = 0; i < k; ++i) {
    // Every subset that agrees on the first i elements and has a smaller
    // (i+1)-th element comes first.
    for (int v = prev + 1; v < subset[static_cast<std::size_t>(i)]; ++v)
      rank += binomial_small(n - v, k - i - 1);
    prev = subset[static_cast<std::size_t>(i)];
  }
  return rank + 1;
}

}  // namespace mapda
