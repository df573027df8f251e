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

#include "mapda/metrics.hpp"

#include "mapda/combinatorics.hpp"
#include "mapda/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mapda {

// ---------------------------------------------------------------- points

SystemPoint::SystemPoint(int users, const Rational& memory_ratio, int antennas, std::optional<int> group)
    : users_(users), antennas_(antennas), cached_(0), ratio_(memory_ratio), group_(group) {
  if (users < 1 || antennas < 1) throw DomainError("K and L must be positive");
  if (!(Rational(0) < memory_ratio && memory_ratio < Rational(1)))
    throw DomainError("memory ratio " + memory_ratio.str() + " is outside (0, 1)");
  const Rational t = memory_ratio * Rational(users);
  if (!t.is_integer())
    throw DomainError("t = K*M/N = " + t.str() + " is not an integer");
  cached_ = t.numerator().convert_to<int>();
  if (group && *group < 1) throw DomainError("grouping parameter m must be positive");
}

SystemPoint SystemPoint::from_cached(int users, int cached, int antennas, std::optional<int> group) {
  if (users < 1) throw DomainError("K must be positive");
  return SystemPoint(users, Rational(cached, users), antennas, group);
}

int SystemPoint::alpha() const { return std::gcd(std::gcd(users_, cached_), antennas_); }

SystemPoint SystemPoint::with_antennas(int antennas) const {
  return SystemPoint(users_, ratio_, antennas, group_);
}

SystemPoint SystemPoint::with_group(std::optional<int> m) const {
  return SystemPoint(users_, ratio_, antennas_, m);
}

std::string SystemPoint::str() const {
  std::string s = "(K=" + std::to_string(users_) + " M/N=" + ratio_.str() + " L=" + std::to_string(antennas_);
  if (group_) s += " m=" + std::to_string(*group_);
  return s + ")";
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::asmst: return "asmst";
    case Scheme::one: return "s1";
    case Scheme::two: return "s2";
    case Scheme::three: return "s3";
  }
  return "?";
}

// ---------------------------------------------------------------- formulas

Rational sgn(const Rational& x, const Rational& y) { return y == Rational(1) ? Rational(1) : x; }

BigInt scheme1_l(int m, int antennas) { return BigInt(m / std::gcd(m, antennas - m)); }

Rational scheme1_beta(int cached, int m, int antennas) {
  const Rational s = sgn(Rational(cached, m) + Rational(1), Rational(m, antennas));
  return (s + Rational(antennas - m, m)) * Rational(scheme1_l(m, antennas));
}

BigInt lambda_asmst(int users, int cached, int antennas) {
  const int t = cached;
  const int L = antennas;
  const BigInt a = binomial(t + L - 1, t);
  const BigInt b = binomial(t + L, t + 1);
  const BigInt bracket = a * (t + 1) * (L - 1) + b * L + 2 * L * b + BigInt(t + L) * a * a * a;
  return bracket * binomial(users, t + L);
}

Rational lambda_mapda(const Rational& cached, int antennas, const Rational& slots) {
  const Rational g = cached + Rational(antennas);
  return (g * g * g + g * g + cached * g) * slots;
}

namespace {

Rational ndt_formula(const SystemPoint& p) {
  return Rational(p.users()) * (Rational(1) - p.memory_ratio()) / Rational(p.cached() + p.antennas());
}

BigInt as_integer(const Rational& r, const char* what) {
  if (!r.is_integer()) throw std::logic_error(std::string(what) + " is not an integer: " + r.str());
  return r.numerator();
}

// Fills Z, ndt, sum_dof and lambda from F and S, and checks the NDT identity.
SchemeMetrics finish(const SystemPoint& p, Scheme which, const BigInt& F, const Rational& S) {
  SchemeMetrics out;
  out.scheme = which;
  out.F = F;
  out.Z = Rational(F) * Rational(p.cached(), p.users());
  out.S = S;
  out.ndt = S / Rational(F);
  out.sum_dof = Rational(p.users()) * (Rational(F) - out.Z) / S;
  if (out.ndt != ndt_formula(p))
    throw std::logic_error(scheme_name(which) + " at " + p.str() + ": S/F = " + out.ndt.str() +
                           " disagrees with K(1-M/N)/(t+L) = " + ndt_formula(p).str());
  return out;
}

std::string check_scheme1(const SystemPoint& p, int m) {
  const int K = p.users(), t = p.cached(), L = p.antennas();
  if (!(t + L < K)) return "Scheme 1 needs t+L < K";
  if (m > L) return "Scheme 1 needs m <= L";
  if (K % m != 0) return "Scheme 1 needs m | K";
  if (t % m != 0) return "Scheme 1 needs m | t";
  return {};
}

}  // namespace

SchemeMetrics asmst_metrics(const SystemPoint& p) {
  const int K = p.users(), t = p.cached(), L = p.antennas();
  if (t + L > K) throw DomainError("the baseline needs t+L <= K at " + p.str());
  const BigInt F = binomial(K, t) * binomial(K - t - 1, L - 1);
  const Rational S = Rational(F) * Rational(K - t, t + L);
  SchemeMetrics out = finish(p, Scheme::asmst, F, S);
  out.lambda = lambda_asmst(K, t, L);
  return out;
}

SchemeMetrics scheme_metrics(const SystemPoint& p, Scheme which) {
  const int K = p.users(), t = p.cached(), L = p.antennas();
  switch (which) {
    case Scheme::asmst:
      return asmst_metrics(p);

    case Scheme::one: {
      if (!p.group()) throw ConstraintViolation("Scheme 1 needs a grouping parameter m");
      const int m = *p.group();
      if (auto why = check_scheme1(p, m); !why.empty()) throw ConstraintViolation(why);
      const BigInt c = binomial(K / m, t / m);
      const Rational s = sgn(Rational(t, m) + Rational(1), Rational(m, L));
      const BigInt F = as_integer(scheme1_beta(t, m, L) * Rational(c), "Scheme 1 F");
      const Rational S = s * Rational(scheme1_l(m, L)) * Rational(K - t, t + m) * Rational(c);
      SchemeMetrics out = finish(p, which, F, S);
      out.lambda = as_integer(lambda_mapda(Rational(t), L, S), "Scheme 1 lambda");
      out.group = m;
      return out;
    }

    case Scheme::two: {
      if (t + L > K) throw ConstraintViolation("Scheme 2 needs t+L <= K");
      const int a = p.alpha();
      const BigInt c = binomial(K / a, (t + L) / a);
      const BigInt F = BigInt((t + L) / a) * c;
      const Rational S = Rational(BigInt((K - t) / a) * c);
      SchemeMetrics out = finish(p, which, F, S);
      out.lambda = as_integer(lambda_mapda(Rational(t), L, S), "Scheme 2 lambda");
      return out;
    }

    case Scheme::three: {
      if (L != K - t) throw ConstraintViolation("Scheme 3 needs L = K-t");
      SchemeMetrics out = finish(p, which, BigInt(K), Rational(K - t));
      out.lambda = as_integer(lambda_mapda(Rational(t), L, out.S), "Scheme 3 lambda");
      return out;
    }
  }
  throw std::logic_error("unknown scheme");
}

std::vector<int> scheme1_groups(const SystemPoint& p) {
  std::vector<int> out;
  for (int m = 1; m <= p.antennas(); ++m)
    if (check_scheme1(p, m).empty()) out.push_back(m);
  return out;
}

SchemeMetrics best_scheme1(const SystemPoint& p) {
  const auto groups = scheme1_groups(p);
  if (groups.empty()) {
    // Report the limitation that m = 1 runs into, or the first general one.
    throw ConstraintViolation(check_scheme1(p, 1).empty() ? "Scheme 1 has no admissible m"
                                                          : check_scheme1(p, 1));
  }
  std::optional<SchemeMetrics> best;
  for (int m : groups) {
    SchemeMetrics cur = scheme_metrics(p.with_group(m), Scheme::one);
    if (!best || cur.F < best->F) best = std::move(cur);
  }
  return *best;
}

SystemPoint silence_antennas(const SystemPoint& p) {
  if (p.cached() >= p.antennas())
    throw DomainError("nothing to silence: t = " + std::to_string(p.cached()) +
                      " >= L = " + std::to_string(p.antennas()));
  return p.with_antennas(p.cached());
}

// ---------------------------------------------------------------- asymptotics

AsymptoticReport ratio_asymptotics(const SystemPoint& p, RatioKind which) {
  const int K = p.users(), t = p.cached(), L = p.antennas();
  AsymptoticReport r{which, {}, {}, {}, {}};
  auto pw = [](const BigInt& base, int e) {
    BigInt out = 1;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
  };
  if (t < 1) throw DomainError("asymptotic models need t >= 1");
  const BigInt lead = pw(BigInt(t + L - 1), 3 * t - 2);

  switch (which) {
    case RatioKind::F1: {
      if (!p.group()) throw DomainError("the Scheme 1 ratio needs m");
      const int m = *p.group();
      r.exponent_per_user = Rational(1 - m, m);
      r.exponent = *r.exponent_per_user * Rational(K);
      r.expression = "2^(((1-m)/m)*K)";
      break;
    }
    case RatioKind::F2: {
      const int a = p.alpha();
      r.exponent_per_user = Rational(1 - a, a);
      r.exponent = *r.exponent_per_user * Rational(K);
      r.expression = "2^(K*(1-alpha)/alpha)";
      break;
    }
    case RatioKind::lambda1: {
      const int a = p.alpha();
      r.model_value = lead * pw(BigInt(a), (t + L) / a) * pw(BigInt(K), (t + L) * (a - 1) / a);
      r.expression = "(t+L-1)^(3t-2) * alpha^((t+L)/alpha) * K^((t+L)(alpha-1)/alpha)";
      break;
    }
    case RatioKind::lambda2: {
      if (!p.group()) throw DomainError("the Scheme 2 complexity ratio needs m");
      const int m = *p.group();
      if (t % m != 0) throw DomainError("the Scheme 2 complexity ratio needs m | t");
      r.model_value = lead * pw(BigInt(m), t / m) * pw(BigInt(K), L + t * (m - 1) / m);
      r.expression = "(t+L-1)^(3t-2) * m^(t/m) * K^(L+t(m-1)/m)";
      break;
    }
    case RatioKind::lambda3: {
      r.model_value = lead * pw(BigInt(K), L + t - 1);
      r.expression = "(t+L-1)^(3t-2) * K^(L+t-1)";
      break;
    }
  }
  return r;
}

// ---------------------------------------------------------------- rendering

std::string sci(const BigInt& value, int digits) {
  if (digits < 1) throw DomainError("sci needs at least one digit");
  if (value == 0) return "0." + std::string(static_cast<std::size_t>(std::max(digits - 1, 1)), '0') + "E+00";
  const bool negative = value < 0;
  std::string s = (negative ? BigInt(-value) : value).str();
  int exponent = static_cast<int>(s.size()) - 1;

  std::string mant = s.substr(0, std::min<std::size_t>(s.size(), static_cast<std::size_t>(digits)));
  mant.append(static_cast<std::size_t>(digits) - mant.size(), '0');
  if (s.size() > static_cast<std::size_t>(digits) && s[static_cast<std::size_t>(digits)] >= '5') {
    int i = digits - 1;
    while (i >= 0 && mant[static_cast<std::size_t>(i)] == '9') mant[static_cast<std::size_t>(i--)] = '0';
    if (i < 0) {
      mant.insert(mant.begin(), '1');
      mant.pop_back();
      ++exponent;
    } else {
      ++mant[static_cast<std::size_t>(i)];
    }
  }
  std::string out = negative ? "-" : "";
  out += mant.substr(0, 1);
  out += '.';
  out += digits > 1 ? mant.substr(1) : "0";
  const std::string e = std::to_string(exponent);
  out += "E+";
  out += e.size() < 2 ? "0" + e : e;
  return out;
}

double log10_big(const BigInt& value) {
  if (value <= 0) throw DomainError("log10 of a non-positive value");
  const std::string s = value.str();
  const std::size_t head = std::min<std::size_t>(s.size(), 17);
  return std::log10(std::stod(s.substr(0, head))) + static_cast<double>(s.size() - head);
}

bool reference_matches(const std::string& ref, const BigInt& value) {
  if (ref.find_first_of("eE") != std::string::npos) {
    const auto dot = ref.find('.');
    const auto e = ref.find_first_of("eE");
    const int digits = dot == std::string::npos || dot > e ? 1 : static_cast<int>(e - dot);
    std::string norm = ref;
    std::transform(norm.begin(), norm.end(), norm.begin(), [](unsigned char c) { return std::toupper(c); });
    return sci(value, digits) == norm;
  }
  try {
    return BigInt(ref) == value;
  } catch (const std::exception&) {
    return false;
  }
}

// ---------------------------------------------------------------- table

TableRow table_row(const TablePoint& tp) {
  const SystemPoint& p = tp.point;
  TableRow row{p, {}, {}, {}, {}, {}, {}, {}, {}, {}};

  try {
    row.asmst = asmst_metrics(p);
  } catch (const DomainError& e) {
    row.asmst_reason = "t+L>K";
  }
  try {
    row.s1 = p.group() ? scheme_metrics(p, Scheme::one) : best_scheme1(p);
  } catch (const ConstraintViolation& e) {
    row.s1_reason = e.what();
  }
  try {
    row.s2 = scheme_metrics(p, Scheme::two);
  } catch (const ConstraintViolation& e) {
    row.s2_reason = e.what();
  }
  try {
    row.s3 = scheme_metrics(p, Scheme::three);
  } catch (const ConstraintViolation& e) {
    row.s3_reason = "constraint-unmet";
    row.flags.push_back("s3:constraint-unmet(L!=K-t)");
  }

  auto compare = [&row](const char* tag, const std::optional<std::string>& ref, const BigInt* value) {
    if (!ref) return;
    if (!value) {
      row.flags.push_back(std::string(tag) + ":formula-inconsistent(ref=" + *ref + " formula=n/a)");
    } else if (!reference_matches(*ref, *value)) {
      const std::string shown = ref->find_first_of("eE") != std::string::npos ? sci(*value) : value->str();
      row.flags.push_back(std::string(tag) + ":formula-inconsistent(ref=" + *ref + " formula=" + shown + ")");
    }
  };
  const BigInt K(p.users());
  compare("asmst", tp.ref_asmst, row.asmst ? &row.asmst->F : nullptr);
  compare("s1", tp.ref_s1, row.s1 ? &row.s1->F : nullptr);
  compare("s2", tp.ref_s2, row.s2 ? &row.s2->F : nullptr);
  compare("s3", tp.ref_s3, row.s3 ? &row.s3->F : &K);
  return row;
}

std::string table_header() {
  return "K,ratio,L,m,F_asmst,F_s1,F_s2,F_s3,ndt,lambda_asmst,lambda_s1,lambda_s2,lambda_s3,"
         "F_asmst_sci,F_s1_sci,F_s2_sci,F_s3_sci,lambda_asmst_sci,lambda_s1_sci,lambda_s2_sci,lambda_s3_sci,"
         "flags";
}

namespace {

std::string na(const std::string& reason) {
  std::string r = reason;
  std::replace(r.begin(), r.end(), ',', ';');
  return "n/a(" + r + ")";
}

}  // namespace

std::string table_csv_line(const TableRow& row) {
  const auto& p = row.point;
  const BigInt K(p.users());
  const BigInt* f_s3 = row.s3 ? &row.s3->F : &K;  // listed as K even when L != K-t, and flagged

  auto full = [](const std::optional<SchemeMetrics>& m, const std::string& why, bool lambda) {
    return m ? (lambda ? m->lambda : m->F).str() : na(why);
  };
  auto rendered = [](const std::optional<SchemeMetrics>& m, const std::string& why, bool lambda) {
    return m ? sci(lambda ? m->lambda : m->F) : na(why);
  };

  std::vector<std::string> cells{
      std::to_string(p.users()),
      p.memory_ratio().str(),
      std::to_string(p.antennas()),
      row.s1 && row.s1->group ? std::to_string(*row.s1->group) : "",
      full(row.asmst, row.asmst_reason, false),
      full(row.s1, row.s1_reason, false),
      full(row.s2, row.s2_reason, false),
      f_s3->str(),
      (Rational(p.users()) * (Rational(1) - p.memory_ratio()) / Rational(p.cached() + p.antennas())).str(),
      full(row.asmst, row.asmst_reason, true),
      full(row.s1, row.s1_reason, true),
      full(row.s2, row.s2_reason, true),
      full(row.s3, row.s3_reason, true),
      rendered(row.asmst, row.asmst_reason, false),
      rendered(row.s1, row.s1_reason, false),
      rendered(row.s2, row.s2_reason, false),
      sci(*f_s3),
      rendered(row.asmst, row.asmst_reason, true),
      rendered(row.s1, row.s1_reason, true),
      rendered(row.s2, row.s2_reason, true),
      rendered(row.s3, row.s3_reason, true),
  };
  std::string flags;
  for (const auto& f : row.flags) flags += (flags.empty() ? "" : ";") + f;
  std::replace(flags.begin(), flags.end(), ',', ';');
  cells.push_back(flags);

  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
  return out;
}

void write_table(std::ostream& out, const std::vector<TablePoint>& points) {
  out << table_header() << '\n';
  for (const auto& tp : points) out << table_csv_line(table_row(tp)) << '\n';
}

std::vector<TablePoint> parse_points(std::istream& in) {
  std::vector<TablePoint> out;
  int number = 0;
  for (std::string line; std::getline(in, line);) {
    ++number;
    auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream is(line);
    std::vector<std::string> toks;
    for (std::string t; is >> t;) toks.push_back(t);
    if (toks.size() != 3 && toks.size() != 7)
      throw ParseError("points line " + std::to_string(number) + ": expected 'K ratio L' and optionally 4 references");
    auto integer = [&](const std::string& tok) {
      Rational r = Rational::parse(tok);
      if (!r.is_integer()) throw ParseError("points line " + std::to_string(number) + ": '" + tok + "' is not an integer");
      return r.numerator().convert_to<int>();
    };
    try {
      TablePoint tp{SystemPoint(integer(toks[0]), Rational::parse(toks[1]), integer(toks[2])), {}, {}, {}, {}};
      if (toks.size() == 7) {
        auto ref = [](const std::string& tok) { return tok == "-" ? std::optional<std::string>{} : tok; };
        tp.ref_asmst = ref(toks[3]);
        tp.ref_s1 = ref(toks[4]);
        tp.ref_s2 = ref(toks[5]);
        tp.ref_s3 = ref(toks[6]);
      }
      out.push_back(std::move(tp));
    } catch (const DomainError& e) {
      throw ParseError("points line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

void write_sweep_plot(std::ostream& out, int users, int antennas, std::optional<int> group) {
  out << "ratio,t,log10_F_asmst,log10_F_s1,log10_F_s2,log10_F_s3\n";
  char buf[32];
  auto cell = [&buf](const std::optional<BigInt>& f) -> std::string {
    if (!f) return "";
    std::snprintf(buf, sizeof buf, "%.6f", log10_big(*f));
    return buf;
  };
  for (int t = 1; t < users; ++t) {
    const SystemPoint p = SystemPoint::from_cached(users, t, antennas);
    std::optional<BigInt> fa, f1, f2, f3;
    try { fa = asmst_metrics(p).F; } catch (const DomainError&) {}
    try {
      f1 = (group ? scheme_metrics(p.with_group(group), Scheme::one) : best_scheme1(p)).F;
    } catch (const ConstraintViolation&) {
    }
    try { f2 = scheme_metrics(p, Scheme::two).F; } catch (const ConstraintViolation&) {}
    try { f3 = scheme_metrics(p, Scheme::three).F; } catch (const ConstraintViolation&) {}
    if (!fa && !f1 && !f2 && !f3) continue;
    out << p.memory_ratio().str() << ',' << t << ',' << cell(fa) << ',' << cell(f1) << ',' << cell(f2) << ','
        << cell(f3) << '\n';
  }
}

}  // namespace mapda
