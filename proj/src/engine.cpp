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

#include "mapda/engine.hpp"

#include "mapda/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace mapda {

// ---------------------------------------------------------------- placement

PlacementMap::PlacementMap(const Mapda& m, int files) : files_(files), rows_(m.rows()) {
  if (files < 1) throw DomainError("the library needs at least one file");
  parts_.resize(static_cast<std::size_t>(m.users()));
  for (int k = 0; k < m.users(); ++k)
    for (int f = 0; f < m.rows(); ++f)
      if (m(static_cast<std::size_t>(f), static_cast<std::size_t>(k)).is_star())
        parts_[static_cast<std::size_t>(k)].push_back(f + 1);
}

bool PlacementMap::caches(int user, PacketId p) const {
  if (p.file < 1 || p.file > files_ || p.part < 1 || p.part > rows_) return false;
  const auto& parts = cached_parts(user);
  return std::binary_search(parts.begin(), parts.end(), p.part);
}

std::vector<PacketId> PlacementMap::cache_of(int user) const {
  std::vector<PacketId> out;
  for (int n = 1; n <= files_; ++n)
    for (int f : cached_parts(user)) out.push_back({n, f});
  return out;
}

DemandVector::DemandVector(std::vector<int> demands, int files) : d_(std::move(demands)), files_(files) {
  if (files < 1) throw DomainError("the library needs at least one file");
  for (std::size_t k = 0; k < d_.size(); ++k)
    if (d_[k] < 1 || d_[k] > files)
      throw DomainError("demand of user " + std::to_string(k + 1) + " is " + std::to_string(d_[k]) +
                        ", outside 1.." + std::to_string(files));
}

DemandVector DemandVector::round_robin(int users, int files) {
  std::vector<int> d(static_cast<std::size_t>(users));
  for (int k = 0; k < users; ++k) d[static_cast<std::size_t>(k)] = k % files + 1;
  return DemandVector(std::move(d), files);
}

SlotGroup make_slot_group(const Mapda& m, int slot) {
  SlotGroup g;
  g.slot = slot;
  for (int k = 0; k < m.users(); ++k)
    for (int f = 0; f < m.rows(); ++f)
      if (m(static_cast<std::size_t>(f), static_cast<std::size_t>(k)).slot_id() == slot) {
        g.users.push_back(k);
        g.rows.push_back(f);
        break;  // C3: at most one occurrence per column
      }
  const std::size_t r = g.size();
  g.caches.assign(r, std::vector<char>(r, 0));
  g.zero_sets.resize(r);
  for (std::size_t l = 0; l < r; ++l)
    for (std::size_t j = 0; j < r; ++j) {
      const bool star = m(static_cast<std::size_t>(g.rows[j]), static_cast<std::size_t>(g.users[l])).is_star();
      g.caches[l][j] = star ? 1 : 0;
      if (j != l && !star) g.zero_sets[l].push_back(static_cast<int>(j));
    }
  return g;
}

SchemeInstance build_instance(const Mapda& m, int files) {
  SchemeInstance inst{m, PlacementMap(m, files), {}, Rational(m.stars_per_col(), m.rows())};
  inst.groups.reserve(static_cast<std::size_t>(m.slots()));
  for (int s = 1; s <= m.slots(); ++s) inst.groups.push_back(make_slot_group(m, s));
  return inst;
}

// ---------------------------------------------------------------- precoder

namespace {

template <Field S>
Matrix<S> submatrix(const Matrix<S>& a, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  Matrix<S> out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Index>(i), static_cast<Index>(j)) = a(rows[i], cols[j]);
  return out;
}

template <Field S>
void require_generic(const Matrix<S>& hs, const std::vector<Index>& cols, int slot, const char* what) {
  if (cols.empty()) return;
  const auto want = std::min<std::size_t>(static_cast<std::size_t>(hs.rows()), cols.size());
  if (rank(select_columns(hs, cols)) < want)
    throw DegenerateChannel(slot, "slot " + std::to_string(slot) + ": channel columns of the " + what +
                                      " set are rank deficient");
}

template <Field S>
double deviation(const S& value, const S& target) {
  if constexpr (ScalarTraits<S>::exact)
    return value == target ? 0.0 : std::max(ScalarTraits<S>::magnitude(value - target), 1e-300);
  else
    return ScalarTraits<S>::magnitude(value - target);
}

}  // namespace

template <Field S>
double precoder_residual(const SlotGroup& group, const Matrix<S>& b) {
  double worst = 0.0;
  for (std::size_t l = 0; l < group.size(); ++l) {
    const auto li = static_cast<Index>(l);
    worst = std::max(worst, deviation(b(li, li), S(1)));
    for (int j : group.zero_sets[l]) worst = std::max(worst, deviation(b(li, j), S(0)));
  }
  return worst;
}

template <Field S>
std::optional<PrecodingMatrix<S>> synthesize_precoder(const SlotGroup& group, const ChannelMatrix<S>& h,
                                                      std::uint64_t* mult_adds) {
  const Index r = static_cast<Index>(group.size());
  for (int k : group.users)
    if (k >= h.users())
      throw DimensionMismatch("channel has " + std::to_string(h.users()) + " users, slot " +
                              std::to_string(group.slot) + " serves user " + std::to_string(k + 1));

  const Matrix<S> hs = select_columns(h.h, std::vector<Index>(group.users.begin(), group.users.end()));
  const Matrix<S> gram = matmul(conj_transpose(hs), hs, mult_adds);

  PrecodingMatrix<S> out;
  out.slot = group.slot;
  out.v = Matrix<S>::Constant(r, r, S(0));
  for (Index n = 0; n < r; ++n) {
    // Unknowns: users that cache packet n. Equations: B(n,n) = 1 and
    // B(l,n) = 0 for every other user l that does not cache it.
    std::vector<Index> unknowns;
    std::vector<Index> equations{n};
    for (Index i = 0; i < r; ++i) {
      if (group.caches[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)])
        unknowns.push_back(i);
      else if (i != n)
        equations.push_back(i);
    }
    require_generic(hs, unknowns, group.slot, "caching");
    require_generic(hs, equations, group.slot, "constraint");
    if (unknowns.empty()) return std::nullopt;

    const Matrix<S> a = submatrix(gram, equations, unknowns);
    Matrix<S> rhs = Matrix<S>::Constant(static_cast<Index>(equations.size()), 1, S(0));
    rhs(0, 0) = S(1);
    auto x = solve(a, rhs, mult_adds);
    if (!x) return std::nullopt;
    for (std::size_t i = 0; i < unknowns.size(); ++i) out.v(unknowns[i], n) = (*x)(static_cast<Index>(i), 0);
  }
  out.b = matmul(gram, out.v, mult_adds);
  out.residual = precoder_residual(group, out.b);
  return out;
}

// ---------------------------------------------------------------- delivery

OpCounts& OpCounts::operator+=(const OpCounts& o) {
  precoding += o.precoding;
  uplink += o.uplink;
  downlink += o.downlink;
  decoding += o.decoding;
  return *this;
}

namespace {

template <Field S>
bool decoded_ok(const S& got, const S& want) {
  if constexpr (ScalarTraits<S>::exact) {
    return got == want;
  } else {
    const double err = ScalarTraits<S>::magnitude(got - want);
    return err <= 1e-6 * ScalarTraits<S>::magnitude(want) + 1e-12;
  }
}

}  // namespace

template <Field S>
std::vector<DecodedPacket<S>> run_slot(const SlotGroup& group, const ChannelMatrix<S>& h,
                                       const DemandVector& demands, const Matrix<S>& library, OpCounts* ops,
                                       double* residual) {
  const Index r = static_cast<Index>(group.size());
  OpCounts local;

  auto tx = synthesize_precoder(group, h, &local.precoding);
  if (!tx)
    throw Infeasible(group.slot, "slot " + std::to_string(group.slot) +
                                     ": precoder system has no solution (needs t >= L)");

  // Packet j of the slot is part rows[j] of the file its user demands.
  Vector<S> w(r);
  for (Index j = 0; j < r; ++j) {
    const int user = group.users[static_cast<std::size_t>(j)];
    w(j) = library(demands[static_cast<std::size_t>(user)] - 1, group.rows[static_cast<std::size_t>(j)]);
  }

  const Matrix<S> hs = select_columns(h.h, std::vector<Index>(group.users.begin(), group.users.end()));
  const Matrix<S> x = matmul<S>(tx->v, w, &local.uplink);
  const Matrix<S> y_bs = matmul<S>(hs, x, &local.uplink);
  // Identity downlink precoding: the base station forwards y_bs unchanged.
  const Matrix<S> y = matmul<S>(conj_transpose(hs), y_bs, &local.downlink);

  // Receivers rebuild B from the shared channel with the same solver.
  auto rx = synthesize_precoder<S>(group, h, nullptr);
  const Matrix<S>& b = rx->b;

  std::vector<DecodedPacket<S>> out;
  out.reserve(static_cast<std::size_t>(r));
  for (Index l = 0; l < r; ++l) {
    S value = y(l, 0);
    for (Index j = 0; j < r; ++j) {
      if (!group.caches[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)]) continue;
      value -= b(l, j) * w(j);
      ++local.decoding;
    }
    value /= b(l, l);
    ++local.decoding;

    const int user = group.users[static_cast<std::size_t>(l)];
    const PacketId id{demands[static_cast<std::size_t>(user)], group.rows[static_cast<std::size_t>(l)] + 1};
    if (!decoded_ok(value, w(l)))
      throw DecodeMismatch(group.slot, "slot " + std::to_string(group.slot) + ": user " +
                                           std::to_string(user + 1) + " decoded " +
                                           ScalarTraits<S>::str(value) + " instead of " +
                                           ScalarTraits<S>::str(w(l)));
    out.push_back({user, id, value});
  }

  if (ops) *ops += local;
  if (residual) *residual = tx->residual;
  return out;
}

bool DeliveryReport::all_feasible() const {
  return std::all_of(slots.begin(), slots.end(), [](const SlotReport& s) { return s.feasible; });
}

std::string DeliveryReport::to_json(int indent) const {
  nlohmann::ordered_json j;
  j["backend"] = backend;
  j["ndt_ul"] = ndt_ul.str();
  j["ndt_dl"] = ndt_dl.str();
  auto& arr = j["slots"] = nlohmann::ordered_json::array();
  for (const auto& s : slots) {
    nlohmann::ordered_json e;
    e["s"] = s.slot;
    e["served"] = s.served;
    e["feasible"] = s.feasible;
    e["residual_max"] = s.residual_max;
    arr.push_back(std::move(e));
  }
  j["ops_measured"] = {{"precoding", ops_measured.precoding},
                       {"uplink", ops_measured.uplink},
                       {"downlink", ops_measured.downlink},
                       {"decoding", ops_measured.decoding},
                       {"total", ops_measured.total()}};
  j["ops_model"] = ops_model.str();
  j["complete"] = complete;
  return j.dump(indent);
}

Rational delivery_ops_model(const Mapda& m) {
  return lambda_mapda(m.profile().t, m.antennas(), Rational(m.slots()));
}

template <Field S>
DeliveryReport run_delivery(const SchemeInstance& inst, const ChannelMatrix<S>& h, const DemandVector& demands,
                            const Matrix<S>& library, const DeliveryOptions& options) {
  const Mapda& m = inst.mapda;
  const auto& prof = m.profile();
  if (!prof.star_density_ok && !options.force)
    throw DomainError("t = " + prof.t.str() + " < L = " + std::to_string(m.antennas()) +
                      ": one-shot delivery needs t >= L");
  if (h.users() != m.users())
    throw DimensionMismatch("channel has " + std::to_string(h.users()) + " users, the array has " +
                            std::to_string(m.users()));
  if (static_cast<int>(demands.size()) != m.users())
    throw DimensionMismatch("demand vector has " + std::to_string(demands.size()) + " entries, expected " +
                            std::to_string(m.users()));
  if (demands.files() != inst.files() || library.rows() != inst.files() || library.cols() != m.rows())
    throw DimensionMismatch("library is " + std::to_string(library.rows()) + "x" +
                            std::to_string(library.cols()) + ", expected " + std::to_string(inst.files()) +
                            "x" + std::to_string(m.rows()));

  DeliveryReport rep;
  rep.backend = ScalarTraits<S>::name;
  rep.ndt_ul = rep.ndt_dl = Rational(m.slots(), m.rows());
  rep.ops_model = delivery_ops_model(m);
  rep.recovered.resize(static_cast<std::size_t>(m.users()));

  for (const auto& g : inst.groups) {
    SlotReport sr;
    sr.slot = g.slot;
    for (int k : g.users) sr.served.push_back(k + 1);
    try {
      auto decoded = run_slot(g, h, demands, library, &rep.ops_measured, &sr.residual_max);
      for (const auto& d : decoded) rep.recovered[static_cast<std::size_t>(d.user)].push_back(d.packet);
    } catch (const Infeasible&) {
      if (!options.force) throw;
      sr.feasible = false;
    }
    rep.slots.push_back(std::move(sr));
  }

  // Every user must end with exactly the parts it does not cache.
  rep.complete = rep.all_feasible();
  for (int k = 0; k < m.users(); ++k) {
    auto& got = rep.recovered[static_cast<std::size_t>(k)];
    std::sort(got.begin(), got.end());
    std::vector<PacketId> want;
    for (int f = 0; f < m.rows(); ++f)
      if (m(static_cast<std::size_t>(f), static_cast<std::size_t>(k)).is_slot())
        want.push_back({demands[static_cast<std::size_t>(k)], f + 1});
    if (got != want) rep.complete = false;
  }
  return rep;
}

#define MAPDA_INSTANTIATE(S)                                                                              \
  template double precoder_residual<S>(const SlotGroup&, const Matrix<S>&);                               \
  template std::optional<PrecodingMatrix<S>> synthesize_precoder<S>(const SlotGroup&,                     \
                                                                    const ChannelMatrix<S>&,              \
                                                                    std::uint64_t*);                      \
  template std::vector<DecodedPacket<S>> run_slot<S>(const SlotGroup&, const ChannelMatrix<S>&,           \
                                                     const DemandVector&, const Matrix<S>&, OpCounts*,    \
                                                     double*);                                            \
  template DeliveryReport run_delivery<S>(const SchemeInstance&, const ChannelMatrix<S>&,                 \
                                          const DemandVector&, const Matrix<S>&, const DeliveryOptions&);

MAPDA_INSTANTIATE(Rational)
MAPDA_INSTANTIATE(Complex)

#undef MAPDA_INSTANTIATE

}  // namespace mapda
