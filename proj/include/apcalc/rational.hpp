// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0

#ifndef APCALC_RATIONAL_HPP
#define APCALC_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace apcalc {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rational(long long num, long long den = 1) {
  if (den == 0) throw std::invalid_argument("rational: zero denominator");
  return Rational(num, den);
}

// Parses "p", "p/q" or a plain integer-valued decimal like "2.5".
inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    BigInt p(s.substr(0, slash));
    BigInt q(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("parse_rational: zero denominator in '" + s + "'");
    return Rational(p, q);
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    BigInt p(digits);
    BigInt q = 1;
    for (size_t i = dot + 1; i < s.size(); ++i) q *= 10;
    return Rational(p, q);
  }
  return Rational(BigInt(s));
}

inline std::string rational_str(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

inline std::optional<long long> as_int64(const Rational& r) {
  if (!is_integer(r)) return std::nullopt;
  const BigInt& n = numerator(r);
  if (n > std::numeric_limits<long long>::max() || n < std::numeric_limits<long long>::min())
    return std::nullopt;
  return n.convert_to<long long>();
}

}  // namespace apcalc

#endif
