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
 * @file scalar.hpp
 * @brief The two scalar fields the toolkit computes over.
 *
 * `Rational` is an arbitrary-precision rational kept in lowest terms with a
 * positive denominator. `Complex` is `std::complex<double>`. All matrix code
 * is templated on one of these two; a computation never mixes them.
 */

#pragma once

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <complex>
#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace mapda {

using BigInt = boost::multiprecision::cpp_int;
using Complex = std::complex<double>;

/// Exact rational number. Thin value wrapper around Boost's cpp_rational so
/// it can serve as an Eigen scalar.
class Rational {
 public:
  using Rep = boost::multiprecision::cpp_rational;

  Rational() = default;
  Rational(long long value) : value_(value) {}  // NOLINT: implicit on purpose
  Rational(const BigInt& value) : value_(value) {}  // NOLINT
  Rational(const BigInt& num, const BigInt& den);
  explicit Rational(Rep value) : value_(std::move(value)) {}

  /// Parses "p", "p/q" or a plain decimal such as "-0.25".
  static Rational parse(std::string_view text);

  const Rep& rep() const noexcept { return value_; }
  BigInt numerator() const { return boost::multiprecision::numerator(value_); }
  BigInt denominator() const { return boost::multiprecision::denominator(value_); }
  bool is_integer() const { return denominator() == 1; }
  bool is_zero() const { return value_ == 0; }
  double to_double() const { return value_.convert_to<double>(); }

  /// "p" for integers, "p/q" otherwise.
  std::string str() const;

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { return Rational(Rep(-value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  Rep value_;
};

Rational abs(const Rational& r);

/// Per-field behaviour used by the generic linear algebra.
template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
  static Rational conj(const Rational& x) { return x; }
  static double magnitude(const Rational& x) { return std::abs(x.to_double()); }
  static Rational from_rational(const Rational& x) { return x; }
  static Rational parse(std::string_view text);
  static std::string str(const Rational& x) { return x.str(); }
};

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  static Complex conj(const Complex& x) { return std::conj(x); }
  static double magnitude(const Complex& x) { return std::abs(x); }
  static Complex from_rational(const Rational& x) { return {x.to_double(), 0.0}; }
  /// Accepts rationals, decimals and complex literals "a+bi", "bi", "-i".
  static Complex parse(std::string_view text);
  static std::string str(const Complex& x);
};

template <typename S>
concept Field = requires(const S& s) {
  { ScalarTraits<S>::exact } -> std::convertible_to<bool>;
  { ScalarTraits<S>::conj(s) } -> std::same_as<S>;
  { ScalarTraits<S>::magnitude(s) } -> std::same_as<double>;
};

}  // namespace mapda

namespace Eigen {

template <>
struct NumTraits<mapda::Rational> : GenericNumTraits<mapda::Rational> {
  using Real = mapda::Rational;
  using NonInteger = mapda::Rational;
  using Literal = mapda::Rational;
  using Nested = mapda::Rational;

  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 50,
    MulCost = 50
  };

  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
