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
 * @file linalg.hpp
 * @brief Dense linear algebra over `Rational` or `Complex`.
 *
 * Matrices are plain Eigen dense types templated on the scalar. The free
 * functions below add what the precoder systems need and Eigen does not give
 * us directly for exact scalars: rank, and a solver that reports
 * inconsistency and fixes free variables to zero.
 *
 * On the float backend a pivot counts as zero when its magnitude is at most
 * 1e-9 times the largest entry magnitude of the input.
 */

#pragma once

#include "mapda/errors.hpp"
#include "mapda/scalar.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mapda {

template <Field S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <Field S>
using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

inline constexpr double kPivotThreshold = 1e-9;

template <Field S>
double max_magnitude(const Matrix<S>& a) {
  double best = 0.0;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) best = std::max(best, ScalarTraits<S>::magnitude(a(i, j)));
  return best;
}

template <Field S>
bool is_negligible(const S& x, double tol) {
  if constexpr (ScalarTraits<S>::exact)
    return x == S(0);
  else
    return ScalarTraits<S>::magnitude(x) <= tol;
}

/// a * b. `mult_adds`, when given, is incremented by the scalar
/// multiply-add count.
template <Field S>
Matrix<S> matmul(const Matrix<S>& a, const Matrix<S>& b, std::uint64_t* mult_adds = nullptr) {
  if (a.cols() != b.rows())
    throw DimensionMismatch("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  if (mult_adds) *mult_adds += static_cast<std::uint64_t>(a.rows() * a.cols() * b.cols());
  return a * b;
}

template <Field S>
Matrix<S> conj_transpose(const Matrix<S>& a) {
  Matrix<S> out(a.cols(), a.rows());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out(j, i) = ScalarTraits<S>::conj(a(i, j));
  return out;
}

namespace detail {

template <Field S>
struct Echelon {
  Matrix<S> m;
  std::vector<Index> pivot_cols;  // pivot column of row i, i < rank
};

// Gauss-Jordan elimination with partial pivoting over the first `cols`
// columns of `m`; the remaining columns ride along as right-hand sides.
template <Field S>
Echelon<S> reduce(Matrix<S> m, Index cols, double tol, std::uint64_t* ops) {
  Echelon<S> out;
  const Index rows = m.rows();
  const Index width = m.cols();
  Index row = 0;
  for (Index col = 0; col < cols && row < rows; ++col) {
    Index pivot = -1;
    if constexpr (ScalarTraits<S>::exact) {
      for (Index r = row; r < rows; ++r)
        if (!(m(r, col) == S(0))) {
          pivot = r;
          break;
        }
    } else {
      double best = tol;
      for (Index r = row; r < rows; ++r) {
        double mag = ScalarTraits<S>::magnitude(m(r, col));
        if (mag > best) {
          best = mag;
          pivot = r;
        }
      }
    }
    if (pivot < 0) continue;
    if (pivot != row) m.row(pivot).swap(m.row(row));

    const S inv = S(1) / m(row, col);
    for (Index j = col; j < width; ++j) m(row, j) *= inv;
    m(row, col) = S(1);
    if (ops) *ops += static_cast<std::uint64_t>(width - col);

    for (Index r = 0; r < rows; ++r) {
      if (r == row || m(r, col) == S(0)) continue;
      const S factor = m(r, col);
      for (Index j = col; j < width; ++j) m(r, j) -= factor * m(row, j);
      m(r, col) = S(0);
      if (ops) *ops += static_cast<std::uint64_t>(width - col);
    }
    out.pivot_cols.push_back(col);
    ++row;
  }
  out.m = std::move(m);
  return out;
}

}  // namespace detail

/// Row rank.
template <Field S>
std::size_t rank(const Matrix<S>& a) {
  const double tol = kPivotThreshold * max_magnitude(a);
  return detail::reduce(a, a.cols(), tol, nullptr).pivot_cols.size();
}

/// Some x with a*x = b, or nullopt when rank(a) < rank(a|b). Free variables
/// are set to zero, so underdetermined systems give a deterministic answer.
template <Field S>
std::optional<Matrix<S>> solve(const Matrix<S>& a, const Matrix<S>& b,
                               std::uint64_t* mult_adds = nullptr) {
  if (a.rows() != b.rows())
    throw DimensionMismatch("solve: a has " + std::to_string(a.rows()) + " rows, b has " +
                            std::to_string(b.rows()));
  Matrix<S> aug(a.rows(), a.cols() + b.cols());
  aug.leftCols(a.cols()) = a;
  aug.rightCols(b.cols()) = b;
  const double tol = kPivotThreshold * max_magnitude(a);
  const double rhs_tol = kPivotThreshold * std::max(max_magnitude(a), max_magnitude(b));

  auto ech = detail::reduce(std::move(aug), a.cols(), tol, mult_adds);
  const Index r = static_cast<Index>(ech.pivot_cols.size());
  for (Index i = r; i < a.rows(); ++i)
    for (Index j = 0; j < b.cols(); ++j)
      if (!is_negligible(ech.m(i, a.cols() + j), rhs_tol)) return std::nullopt;

  Matrix<S> x = Matrix<S>::Constant(a.cols(), b.cols(), S(0));
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < b.cols(); ++j) x(ech.pivot_cols[i], j) = ech.m(i, a.cols() + j);
  return x;
}

/// Column subset of `a`, in the given order.
template <Field S>
Matrix<S> select_columns(const Matrix<S>& a, const std::vector<Index>& cols) {
  Matrix<S> out(a.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = a.col(cols[j]);
  return out;
}

}  // namespace mapda
