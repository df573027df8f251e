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
 * @file array.hpp
 * @brief Multiple-antenna placement delivery arrays.
 *
 * An (L,K,F,Z,S) MAPDA is an F x K grid of stars and slot ids 1..S with
 *
 *  - C1: every column holds exactly Z stars;
 *  - C2: every id in 1..S occurs;
 *  - C3: no id occurs twice in a column;
 *  - C4: for every id s, restricted to the rows and columns that contain s,
 *        each row holds at most L integer entries.
 *
 * Rows index file parts, columns index users. A star at (f,k) means user k
 * caches part f of every file; an id s at (f,k) means user k receives part f
 * of its demanded file in slot s.
 *
 * Indices in this API are 0-based; slot ids are 1-based as in the array.
 */

#pragma once

#include "mapda/scalar.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace mapda {

class Entry {
 public:
  constexpr Entry() = default;
  static constexpr Entry star() { return Entry(); }
  /// Throws NonPositiveSlotId when id < 1.
  static Entry slot(long long id);

  constexpr bool is_star() const { return id_ == 0; }
  constexpr bool is_slot() const { return id_ != 0; }
  /// Slot id, or 0 for a star.
  constexpr int slot_id() const { return id_; }

  friend constexpr bool operator==(Entry, Entry) = default;

 private:
  explicit constexpr Entry(int id) : id_(id) {}
  int id_ = 0;
};

/// Rectangular F x K grid of entries, row-major.
class Grid {
 public:
  /// All-star grid; both dimensions must be positive.
  Grid(std::size_t rows, std::size_t cols);

  /// Throws RaggedGrid when `rows` is empty or not rectangular.
  static Grid from_rows(const std::vector<std::vector<Entry>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Entry operator()(std::size_t f, std::size_t k) const { return cells_[f * cols_ + k]; }
  Entry& operator()(std::size_t f, std::size_t k) { return cells_[f * cols_ + k]; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Entry> cells_;
};

struct MapdaProfile {
  Rational t;        // K*Z/F
  Rational sum_dof;  // K*(F-Z)/S
  bool regular = false;  // every slot occurs exactly t+L times
  int min_antennas = 0;  // smallest L for which C4 holds
  bool star_density_ok = false;  // K*Z >= L*F, i.e. t >= L
};

struct ConditionCheck {
  bool ok = true;
  std::string detail;
};

struct ValidationReport {
  std::size_t rows = 0;  // F
  std::size_t cols = 0;  // K
  int antennas = 0;      // claimed L
  ConditionCheck c1, c2, c3, c4;

  std::optional<int> stars_per_col;  // Z, when C1 holds
  int slots = 0;                     // S, the largest slot id
  std::vector<int> occurrences;      // occurrences[s-1]
  int min_antennas = 0;
  std::optional<int> c4_violation_slot;
  std::optional<MapdaProfile> profile;  // when C1 holds and S >= 1

  bool passed() const { return c1.ok && c2.ok && c3.ok && c4.ok; }
  /// "(L,K,F,Z,S)" using the derived Z and S.
  std::string parameters() const;
};

/// Checks C1-C4 at `claimed_antennas`. Never throws on a well-formed grid.
ValidationReport validate(const Grid& grid, int claimed_antennas);
ValidationReport validate(const std::vector<std::vector<Entry>>& rows, int claimed_antennas);

/// A grid that has passed validation, together with its antenna count.
/// Immutable.
class Mapda {
 public:
  /// Throws ValidationFailure unless the grid is an MAPDA at `antennas`.
  static Mapda create(Grid grid, int antennas);

  const Grid& grid() const noexcept { return grid_; }
  Entry operator()(std::size_t f, std::size_t k) const { return grid_(f, k); }

  int antennas() const noexcept { return antennas_; }
  int users() const noexcept { return static_cast<int>(grid_.cols()); }
  int rows() const noexcept { return static_cast<int>(grid_.rows()); }
  int stars_per_col() const noexcept { return stars_; }
  int slots() const noexcept { return slots_; }
  const MapdaProfile& profile() const noexcept { return profile_; }
  const std::vector<int>& occurrences() const noexcept { return occurrences_; }
  std::string parameters() const;

  friend bool operator==(const Mapda& a, const Mapda& b) {
    return a.antennas_ == b.antennas_ && a.grid_ == b.grid_;
  }

 private:
  Mapda(Grid grid, int antennas, const ValidationReport& report);

  Grid grid_;
  int antennas_;
  int stars_;
  int slots_;
  MapdaProfile profile_;
  std::vector<int> occurrences_;
};

/// The classical t-subset PDA: rows are the t-subsets of users in
/// lexicographic order, entry (T,k) is a star iff k is in T, otherwise the
/// 1-based lexicographic rank of T+{k} among (t+1)-subsets. Valid at L = 1.
Mapda generate_mn_pda(int users, int cached);

/// `copies` side-by-side copies of `base`, declared at copies*L antennas.
/// The result is re-validated; ValidationFailure if it does not pass.
Mapda replicate(const Mapda& base, int copies);

/// Circulant (K-t, K, K, t, K-t) array: column k has stars in rows
/// k..k+t-1 (mod K) and entry ((f - k - t) mod K) + 1 elsewhere.
Mapda generate_cyclic(int users, int cached);

}  // namespace mapda
