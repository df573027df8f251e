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

#include "mapda/scalar.hpp"

#include "mapda/errors.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <ostream>

namespace mapda {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

std::string_view strip_sign(std::string_view s, bool& negative) {
  negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  return s;
}

BigInt parse_digits(std::string_view digits) {
  return BigInt(std::string(digits));
}

double parse_real_double(std::string_view text) {
  // from_chars rejects a leading '+'.
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ParseError("malformed real number '" + std::string(text) + "'");
  return value;
}

double parse_real(std::string_view text) {
  try {
    return Rational::parse(text).to_double();
  } catch (const ParseError&) {
    return parse_real_double(text);
  }
}

}  // namespace

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  value_ = Rep(num, den);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.value_ == 0) throw DomainError("division by zero");
  value_ /= o.value_;
  return *this;
}

Rational Rational::parse(std::string_view text) {
  bool negative = false;
  std::string_view body = strip_sign(text, negative);
  Rational out;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw ParseError("malformed rational '" + std::string(text) + "'");
    BigInt d = parse_digits(den);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    out = Rational(parse_digits(num), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac)))
      throw ParseError("malformed decimal '" + std::string(text) + "'");
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    BigInt num = (whole.empty() ? BigInt(0) : parse_digits(whole)) * scale +
                 (frac.empty() ? BigInt(0) : parse_digits(frac));
    out = Rational(num, scale);
  } else {
    if (!all_digits(body)) throw ParseError("malformed integer '" + std::string(text) + "'");
    out = Rational(parse_digits(body));
  }
  return negative ? -out : out;
}

std::string Rational::str() const {
  if (is_integer()) return numerator().str();
  return numerator().str() + "/" + denominator().str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational abs(const Rational& r) { return r < Rational(0) ? -r : r; }

Rational ScalarTraits<Rational>::parse(std::string_view text) {
  if (!text.empty() && text.back() == 'i')
    throw ParseError("complex literal '" + std::string(text) + "' on the exact backend");
  return Rational::parse(text);
}

Complex ScalarTraits<Complex>::parse(std::string_view text) {
  if (text.empty()) throw ParseError("empty scalar");
  if (text.back() != 'i') return {parse_real(text), 0.0};

  std::string_view body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not leading and not part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_part = [&](std::string_view s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_real(s);
  };
  if (split == std::string_view::npos) return {0.0, imag_part(body)};
  return {parse_real(body.substr(0, split)), imag_part(body.substr(split))};
}

std::string ScalarTraits<Complex>::str(const Complex& x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", x.real(), x.imag());
  return buf;
}

}  // namespace mapda
