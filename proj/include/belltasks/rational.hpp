#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <string>

#include "belltasks/error.hpp"

namespace belltasks {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// "num/den", or just "num" for integers.
inline std::string to_fraction_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace detail {

// Decimal integer text to BigInt. cpp_int would read a leading 0 as an octal prefix.
inline BigInt parse_integer(std::string digits, const std::string& text) {
  const bool negative = !digits.empty() && digits[0] == '-';
  if (negative || (!digits.empty() && digits[0] == '+')) digits.erase(0, 1);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorKind::parse_error, "not a rational: '" + text + "'");
  }
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  BigInt v(digits);
  return negative ? BigInt(-v) : v;
}

}  // namespace detail

/// Parses "a/b", "a" or a plain decimal such as "4.2" exactly.
inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const BigInt den = detail::parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw Error(ErrorKind::parse_error, "zero denominator in '" + text + "'");
    return Rational(detail::parse_integer(text.substr(0, slash), text), den);
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(detail::parse_integer(text, text));
  std::string frac = text.substr(dot + 1);
  std::string whole = text.substr(0, dot);
  if (whole.empty() || whole == "-" || whole == "+") whole += "0";
  if (frac.empty()) frac = "0";
  BigInt den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const BigInt w = detail::parse_integer(whole, text);
  if (frac.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorKind::parse_error, "not a rational: '" + text + "'");
  }
  const BigInt f = detail::parse_integer(frac, text);
  const bool negative = !whole.empty() && whole[0] == '-';
  return Rational(negative ? BigInt(w * den - f) : BigInt(w * den + f), den);
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
  return a / boost::multiprecision::gcd(a, b) * b;
}

inline std::int64_t to_int64_checked(const BigInt& v) {
  if (v > BigInt(INT64_MAX / 4) || v < BigInt(INT64_MIN / 4)) {
    throw Error(ErrorKind::too_large, "integer coefficient overflows 62-bit range");
  }
  return v.convert_to<std::int64_t>();
}

}  // namespace belltasks
