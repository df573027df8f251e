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
 * @file metrics.hpp
 * @brief Closed-form subpacketization, NDT, sum-DoF and complexity models.
 *
 * Everything is exact: counts are BigInt, ratios are Rational.
 *
 * Schemes:
 *  - ASMST: the baseline with F = C(K,t) C(K-t-1, L-1).
 *  - Scheme 1: grouping parameter m, needs t+L < K, m <= L, m | K, m | t.
 *  - Scheme 2: built on alpha = gcd(K,t,L), needs t+L <= K.
 *  - Scheme 3: the circulant array, needs L = K-t.
 */

#pragma once

#include "mapda/scalar.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mapda {

/// A (K, M/N, L) operating point with t = K M/N.
class SystemPoint {
 public:
  /// Throws DomainError unless 0 < ratio < 1, K,L >= 1 and K*ratio is an
  /// integer.
  SystemPoint(int users, const Rational& memory_ratio, int antennas, std::optional<int> group = {});
  static SystemPoint from_cached(int users, int cached, int antennas, std::optional<int> group = {});

  int users() const noexcept { return users_; }
  int antennas() const noexcept { return antennas_; }
  int cached() const noexcept { return cached_; }
  const Rational& memory_ratio() const noexcept { return ratio_; }
  std::optional<int> group() const noexcept { return group_; }

  /// gcd(K, t, L).
  int alpha() const;
  SystemPoint with_antennas(int antennas) const;
  SystemPoint with_group(std::optional<int> m) const;
  std::string str() const;

 private:
  int users_;
  int antennas_;
  int cached_;
  Rational ratio_;
  std::optional<int> group_;
};

enum class Scheme { asmst, one, two, three };

std::string scheme_name(Scheme s);

struct SchemeMetrics {
  Scheme scheme = Scheme::asmst;
  BigInt F;
  Rational Z;
  Rational S;
  Rational ndt;
  Rational sum_dof;
  BigInt lambda;
  std::optional<int> group;  // m, Scheme 1 only
};

/// sgn(x, y): 1 when y = 1, x otherwise.
Rational sgn(const Rational& x, const Rational& y);

/// Scheme 1 quantities l = m / gcd(m, L-m) and beta.
BigInt scheme1_l(int m, int antennas);
Rational scheme1_beta(int cached, int m, int antennas);

/// The exact bracketed complexity sum of the baseline.
BigInt lambda_asmst(int users, int cached, int antennas);

/// (g^3 + g^2 + t g) S with g = t + L.
Rational lambda_mapda(const Rational& cached, int antennas, const Rational& slots);

/// Throws DomainError when t + L > K.
SchemeMetrics asmst_metrics(const SystemPoint& p);

/// Throws ConstraintViolation naming the violated limitation. Scheme 1 uses
/// p.group(); it is a ConstraintViolation to leave it unset.
SchemeMetrics scheme_metrics(const SystemPoint& p, Scheme which);

/// Admissible m for Scheme 1 at `p`, ascending.
std::vector<int> scheme1_groups(const SystemPoint& p);

/// Scheme 1 with the admissible m of smallest F (ties go to the smaller m).
/// Throws ConstraintViolation when no m is admissible.
SchemeMetrics best_scheme1(const SystemPoint& p);

/// Runs the point with L = t antennas. Throws DomainError when t >= L.
SystemPoint silence_antennas(const SystemPoint& p);

enum class RatioKind { F1, F2, lambda1, lambda2, lambda3 };

struct AsymptoticReport {
  RatioKind kind;
  /// F ratios: exponent e with ratio ~ 2^(e), e linear in K.
  std::optional<Rational> exponent_per_user;
  std::optional<Rational> exponent;
  /// lambda ratios: the model value of the stated order.
  std::optional<BigInt> model_value;
  std::string expression;
};

/// Model evaluations of the asymptotic ratio expressions. Throws DomainError
/// outside their regime.
AsymptoticReport ratio_asymptotics(const SystemPoint& p, RatioKind which);

/// `digits` significant digits, round half up, "8.4E+14".
std::string sci(const BigInt& value, int digits = 2);

/// A table row request with optional printed reference values. A reference
/// is either a full integer, compared exactly, or a rendering like "8.4E+14",
/// compared against sci() of the computed value.
struct TablePoint {
  SystemPoint point;
  std::optional<std::string> ref_asmst;
  std::optional<std::string> ref_s1;
  std::optional<std::string> ref_s2;
  std::optional<std::string> ref_s3;
};

/// True when `ref` agrees with `value` under the rule above.
bool reference_matches(const std::string& ref, const BigInt& value);

struct TableRow {
  SystemPoint point;
  std::optional<SchemeMetrics> asmst, s1, s2, s3;
  std::string asmst_reason, s1_reason, s2_reason, s3_reason;  // when absent
  std::vector<std::string> flags;
};

TableRow table_row(const TablePoint& tp);

/// CSV header line, no trailing newline. The leading thirteen columns are
/// K,ratio,L,m,F_asmst,F_s1,F_s2,F_s3,ndt,lambda_asmst,lambda_s1,lambda_s2,
/// lambda_s3; scientific renderings of the eight count columns and a
/// ';'-separated flags column follow.
std::string table_header();
std::string table_csv_line(const TableRow& row);
void write_table(std::ostream& out, const std::vector<TablePoint>& points);

/// Points file: one "K ratio L [ref_asmst ref_s1 ref_s2 ref_s3]" per line,
/// '#' comments, '-' for a missing reference. Throws ParseError.
std::vector<TablePoint> parse_points(std::istream& in);

/// Plot data for a fixed K and L over every admissible ratio t/K:
/// "ratio,t,log10_F_asmst,log10_F_s1,log10_F_s2,log10_F_s3", empty cell when
/// a scheme does not apply. With `group` set, Scheme 1 uses that m instead
/// of the best admissible one.
void write_sweep_plot(std::ostream& out, int users, int antennas, std::optional<int> group = {});

/// log10 of a positive BigInt.
double log10_big(const BigInt& value);

}  // namespace mapda
