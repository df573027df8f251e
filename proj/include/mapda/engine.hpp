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
 * @file engine.hpp
 * @brief Placement and one-shot delivery through a multi-antenna relay.
 *
 * In slot s the users holding s each send a linear combination of packets
 * from their caches (uplink precoder V), the base station forwards what it
 * receives unchanged, and each served user removes the packets it already
 * caches and reads off its own packet. With H_s the channel columns of the
 * served users, the effective coefficient matrix is B = H_s^* H_s V, and
 * V is chosen so that B(l,l) = 1 and B(l,j) = 0 for every packet j that
 * user l neither caches nor wants.
 *
 * Indices here are 0-based unless noted; slot ids, files and parts in
 * reports are 1-based.
 */

#pragma once

#include "mapda/array.hpp"
#include "mapda/channel.hpp"
#include "mapda/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mapda {

/// Part `part` of file `file`, both 1-based.
struct PacketId {
  int file = 1;
  int part = 1;
  friend auto operator<=>(const PacketId&, const PacketId&) = default;
};

/// User k caches part f of every file exactly when grid(f,k) is a star.
class PlacementMap {
 public:
  PlacementMap(const Mapda& m, int files);

  int files() const noexcept { return files_; }
  int users() const noexcept { return static_cast<int>(parts_.size()); }
  bool caches(int user, PacketId p) const;
  /// Cached parts of `user`, 1-based and ascending.
  const std::vector<int>& cached_parts(int user) const { return parts_.at(static_cast<std::size_t>(user)); }
  std::vector<PacketId> cache_of(int user) const;
  std::size_t cache_size(int user) const { return cached_parts(user).size() * static_cast<std::size_t>(files_); }

 private:
  int files_;
  int rows_;
  std::vector<std::vector<int>> parts_;
};

/// d_k in 1..N for each of the K users.
class DemandVector {
 public:
  /// Throws DomainError on a value outside 1..files.
  DemandVector(std::vector<int> demands, int files);
  /// d_k = (k mod N) + 1 with 0-based k.
  static DemandVector round_robin(int users, int files);

  int operator[](std::size_t k) const { return d_.at(k); }
  std::size_t size() const noexcept { return d_.size(); }
  int files() const noexcept { return files_; }
  const std::vector<int>& values() const noexcept { return d_; }

 private:
  std::vector<int> d_;
  int files_;
};

/// The users served in one slot and the rows they receive.
struct SlotGroup {
  int slot = 0;                // 1-based
  std::vector<int> users;      // ascending column indices k_1 < ... < k_r
  std::vector<int> rows;       // rows[i]: row whose packet users[i] receives
  /// zero_sets[l]: indices j != l such that users[l] does not cache rows[j].
  std::vector<std::vector<int>> zero_sets;
  /// caches[i][j]: users[i] caches rows[j].
  std::vector<std::vector<char>> caches;

  std::size_t size() const noexcept { return users.size(); }
};

SlotGroup make_slot_group(const Mapda& m, int slot);

struct SchemeInstance {
  Mapda mapda;
  PlacementMap placement;
  std::vector<SlotGroup> groups;  // groups[s-1]
  Rational memory_ratio;          // M/N = Z/F

  int files() const noexcept { return placement.files(); }
};

/// Throws DomainError if files < 1.
SchemeInstance build_instance(const Mapda& m, int files);

template <Field S>
struct PrecodingMatrix {
  int slot = 0;
  Matrix<S> v;  // r x r; column j carries packet j
  Matrix<S> b;  // H_s^* H_s V
  double residual = 0.0;  // largest deviation of B from its targets
};

/// Per-column solve of the reduced system. Returns nullopt when some column
/// system is inconsistent. Throws DegenerateChannel when a channel submatrix
/// the solve depends on is rank deficient, DimensionMismatch when the channel
/// does not cover the group's users.
template <Field S>
std::optional<PrecodingMatrix<S>> synthesize_precoder(const SlotGroup& group, const ChannelMatrix<S>& h,
                                                      std::uint64_t* mult_adds = nullptr);

/// Largest deviation of `b` from its targets on `group`. Zero means exact.
template <Field S>
double precoder_residual(const SlotGroup& group, const Matrix<S>& b);

struct OpCounts {
  std::uint64_t precoding = 0;
  std::uint64_t uplink = 0;
  std::uint64_t downlink = 0;
  std::uint64_t decoding = 0;

  std::uint64_t total() const noexcept { return precoding + uplink + downlink + decoding; }
  OpCounts& operator+=(const OpCounts& o);
};

template <Field S>
struct DecodedPacket {
  int user = 0;  // 0-based
  PacketId packet;
  S value{};
};

/// One slot end to end. `library` is N x F. Throws Infeasible, DegenerateChannel
/// or DecodeMismatch tagged with the slot id.
template <Field S>
std::vector<DecodedPacket<S>> run_slot(const SlotGroup& group, const ChannelMatrix<S>& h,
                                       const DemandVector& demands, const Matrix<S>& library,
                                       OpCounts* ops = nullptr, double* residual = nullptr);

struct SlotReport {
  int slot = 0;
  std::vector<int> served;  // 1-based users
  bool feasible = true;
  double residual_max = 0.0;
};

struct DeliveryOptions {
  /// Run even when t < L, and keep going past infeasible slots.
  bool force = false;
};

struct DeliveryReport {
  std::string backend;
  Rational ndt_ul;
  Rational ndt_dl;
  std::vector<SlotReport> slots;
  OpCounts ops_measured;
  Rational ops_model;
  /// recovered[k]: packets user k decoded, ascending.
  std::vector<std::vector<PacketId>> recovered;
  bool complete = false;  // every user recovered exactly its missing parts

  bool all_feasible() const;
  /// The report as a JSON document.
  std::string to_json(int indent = 2) const;
};

/// (g^3 + g^2 + t g) S with g = t + L: the per-delivery multiply count model.
Rational delivery_ops_model(const Mapda& m);

template <Field S>
DeliveryReport run_delivery(const SchemeInstance& inst, const ChannelMatrix<S>& h,
                            const DemandVector& demands, const Matrix<S>& library,
                            const DeliveryOptions& options = {});

}  // namespace mapda
