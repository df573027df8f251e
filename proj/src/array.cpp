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

#include "mapda/array.hpp"

#include "mapda/combinatorics.hpp"
#include "mapda/errors.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace mapda {

Entry Entry::slot(long long id) {
  if (id < 1) throw NonPositiveSlotId("slot id " + std::to_string(id) + " is not positive");
  if (id > std::numeric_limits<int>::max())
    throw NonPositiveSlotId("slot id " + std::to_string(id) + " is out of range");
  return Entry(static_cast<int>(id));
}

Grid::Grid(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols) {
  if (rows == 0 || cols == 0) throw RaggedGrid("grid must have at least one row and one column");
}

Grid Grid::from_rows(const std::vector<std::vector<Entry>>& rows) {
  if (rows.empty() || rows.front().empty()) throw RaggedGrid("empty grid");
  const std::size_t width = rows.front().size();
  Grid g(rows.size(), width);
  for (std::size_t f = 0; f < rows.size(); ++f) {
    if (rows[f].size() != width)
      throw RaggedGrid("row " + std::to_string(f + 1) + " has " + std::to_string(rows[f].size()) +
                       " entries, expected " + std::to_string(width));
    for (std::size_t k = 0; k < width; ++k) g(f, k) = rows[f][k];
  }
  return g;
}

std::string ValidationReport::parameters() const {
  std::ostringstream os;
  os << '(' << antennas << ',' << cols << ',' << rows << ',';
  if (stars_per_col)
    os << *stars_per_col;
  else
    os << '?';
  os << ',' << slots << ')';
  return os.str();
}

ValidationReport validate(const Grid& g, int claimed_antennas) {
  if (claimed_antennas < 1) throw DomainError("antenna count must be positive");
  const std::size_t F = g.rows();
  const std::size_t K = g.cols();

  ValidationReport rep;
  rep.rows = F;
  rep.cols = K;
  rep.antennas = claimed_antennas;

  int max_id = 0;
  for (std::size_t f = 0; f < F; ++f)
    for (std::size_t k = 0; k < K; ++k) max_id = std::max(max_id, g(f, k).slot_id());
  rep.slots = max_id;
  rep.occurrences.assign(static_cast<std::size_t>(max_id), 0);

  // cells[s-1] lists the (row, col) positions holding s.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> cells(
      static_cast<std::size_t>(max_id));
  for (std::size_t f = 0; f < F; ++f)
    for (std::size_t k = 0; k < K; ++k)
      if (g(f, k).is_slot()) {
        auto s = static_cast<std::size_t>(g(f, k).slot_id() - 1);
        ++rep.occurrences[s];
        cells[s].emplace_back(f, k);
      }

  // C1
  std::vector<int> stars(K, 0);
  for (std::size_t f = 0; f < F; ++f)
    for (std::size_t k = 0; k < K; ++k)
      if (g(f, k).is_star()) ++stars[k];
  for (std::size_t k = 1; k < K && rep.c1.ok; ++k)
    if (stars[k] != stars[0]) {
      rep.c1.ok = false;
      rep.c1.detail = "column " + std::to_string(k + 1) + " has " + std::to_string(stars[k]) +
                      " stars, column 1 has " + std::to_string(stars[0]);
    }
  if (rep.c1.ok) rep.stars_per_col = stars[0];

  // C2
  if (max_id == 0) {
    rep.c2.ok = false;
    rep.c2.detail = "no slot ids";
  }
  for (int s = 1; s <= max_id && rep.c2.ok; ++s)
    if (rep.occurrences[static_cast<std::size_t>(s - 1)] == 0) {
      rep.c2.ok = false;
      rep.c2.detail = "slot " + std::to_string(s) + " never occurs";
    }

  // C3
  for (std::size_t k = 0; k < K && rep.c3.ok; ++k) {
    std::vector<char> seen(static_cast<std::size_t>(max_id), 0);
    for (std::size_t f = 0; f < F; ++f) {
      if (g(f, k).is_star()) continue;
      auto s = static_cast<std::size_t>(g(f, k).slot_id() - 1);
      if (seen[s]) {
        rep.c3.ok = false;
        rep.c3.detail = "slot " + std::to_string(s + 1) + " occurs twice in column " +
                        std::to_string(k + 1);
        break;
      }
      seen[s] = 1;
    }
  }

  // C4
  std::vector<char> in_cols(K);
  std::vector<char> in_rows(F);
  for (int s = 1; s <= max_id; ++s) {
    const auto& here = cells[static_cast<std::size_t>(s - 1)];
    std::fill(in_cols.begin(), in_cols.end(), 0);
    std::fill(in_rows.begin(), in_rows.end(), 0);
    for (auto [f, k] : here) {
      in_rows[f] = 1;
      in_cols[k] = 1;
    }
    int worst = 0;
    std::size_t worst_row = 0;
    for (std::size_t f = 0; f < F; ++f) {
      if (!in_rows[f]) continue;
      int count = 0;
      for (std::size_t k = 0; k < K; ++k)
        if (in_cols[k] && g(f, k).is_slot()) ++count;
      if (count > worst) {
        worst = count;
        worst_row = f;
      }
    }
    rep.min_antennas = std::max(rep.min_antennas, worst);
    if (worst > claimed_antennas && !rep.c4_violation_slot) {
      rep.c4_violation_slot = s;
      rep.c4.ok = false;
      rep.c4.detail = "violated at s=" + std::to_string(s) + ": row " + std::to_string(worst_row + 1) +
                      " of the subarray holds " + std::to_string(worst) + " integers > L=" +
                      std::to_string(claimed_antennas);
    }
  }

  if (rep.stars_per_col && max_id >= 1) {
    const int Z = *rep.stars_per_col;
    MapdaProfile p;
    p.t = Rational(static_cast<long long>(K) * Z) / Rational(static_cast<long long>(F));
    p.sum_dof = Rational(static_cast<long long>(K) * (static_cast<long long>(F) - Z)) /
                Rational(max_id);
    p.min_antennas = rep.min_antennas;
    p.star_density_ok = static_cast<long long>(K) * Z >= static_cast<long long>(claimed_antennas) *
                                                             static_cast<long long>(F);
    p.regular = false;
    if (p.t.is_integer()) {
      const Rational target = p.t + Rational(claimed_antennas);
      p.regular = std::all_of(rep.occurrences.begin(), rep.occurrences.end(),
                              [&](int c) { return Rational(c) == target; });
    }
    rep.profile = p;
  }
  return rep;
}

ValidationReport validate(const std::vector<std::vector<Entry>>& rows, int claimed_antennas) {
  return validate(Grid::from_rows(rows), claimed_antennas);
}

Mapda::Mapda(Grid grid, int antennas, const ValidationReport& report)
    : grid_(std::move(grid)),
      antennas_(antennas),
      stars_(*report.stars_per_col),
      slots_(report.slots),
      profile_(*report.profile),
      occurrences_(report.occurrences) {}

Mapda Mapda::create(Grid grid, int antennas) {
  ValidationReport rep = validate(grid, antennas);
  if (!rep.passed()) {
    std::string msg = "not an MAPDA at L=" + std::to_string(antennas) + ":";
    for (auto [name, check] : {std::pair{"C1", &rep.c1}, std::pair{"C2", &rep.c2},
                               std::pair{"C3", &rep.c3}, std::pair{"C4", &rep.c4}})
      if (!check->ok) msg += std::string(" ") + name + " " + check->detail + ";";
    msg.pop_back();
    throw ValidationFailure(msg);
  }
  return Mapda(std::move(grid), antennas, rep);
}

std::string Mapda::parameters() const {
  std::ostringstream os;
  os << '(' << antennas_ << ',' << users() << ',' << rows() << ',' << stars_ << ',' << slots_ << ')';
  return os.str();
}

Mapda generate_mn_pda(int users, int cached) {
  if (cached < 1 || cached >= users)
    throw DomainError("MN array needs 1 <= t < K (got K=" + std::to_string(users) +
                      ", t=" + std::to_string(cached) + ")");
  const auto rows = subsets(users, cached);
  Grid g(rows.size(), static_cast<std::size_t>(users));
  std::vector<int> joined(static_cast<std::size_t>(cached) + 1);
  for (std::size_t f = 0; f < rows.size(); ++f) {
    const auto& T = rows[f];
    for (int k = 1; k <= users; ++k) {
      if (std::binary_search(T.begin(), T.end(), k)) continue;
      std::merge(T.begin(), T.end(), &k, &k + 1, joined.begin());
      g(f, static_cast<std::size_t>(k - 1)) = Entry::slot(lex_rank(joined, users));
    }
  }
  return Mapda::create(std::move(g), 1);
}

Mapda replicate(const Mapda& base, int copies) {
  if (copies < 1) throw DomainError("copies must be at least 1");
  const auto& src = base.grid();
  Grid g(src.rows(), src.cols() * static_cast<std::size_t>(copies));
  for (std::size_t c = 0; c < static_cast<std::size_t>(copies); ++c)
    for (std::size_t f = 0; f < src.rows(); ++f)
      for (std::size_t k = 0; k < src.cols(); ++k) g(f, c * src.cols() + k) = src(f, k);
  return Mapda::create(std::move(g), base.antennas() * copies);
}

Mapda generate_cyclic(int users, int cached) {
  if (cached < 1 || cached >= users)
    throw DomainError("cyclic array needs 1 <= t < K (got K=" + std::to_string(users) +
                      ", t=" + std::to_string(cached) + ")");
  const int K = users;
  Grid g(static_cast<std::size_t>(K), static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k)
    for (int f = 1; f <= K; ++f) {
      const int offset = ((f - k) % K + K) % K;  // row f is offset rows below k
      if (offset < cached) continue;            // star
      const int id = ((f - k - cached) % K + K) % K + 1;
      g(static_cast<std::size_t>(f - 1), static_cast<std::size_t>(k - 1)) = Entry::slot(id);
    }
  Mapda m = Mapda::create(std::move(g), K - cached);
  if (m.profile().sum_dof != Rational(K))
    throw ValidationFailure("cyclic array has sum-DoF " + m.profile().sum_dof.str() + ", expected " +
                            std::to_string(K));
  return m;
}

}  // namespace mapda
