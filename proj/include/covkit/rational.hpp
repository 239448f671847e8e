#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace covkit {

/// Exact rational scalar used by every exact code path (weights, torus
/// coordinates, LP tableaux).
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// Parses "3", "-3/4", "0.125" or "1e-3" into an exact rational. Decimal
/// strings are read digit by digit, so "0.3" becomes 3/10 exactly.
Rational parse_rational(std::string_view text);

/// Shortest decimal rendering of a double, then parsed exactly. Gives
/// 0.3 -> 3/10 rather than the binary expansion.
Rational rational_from_double(double value);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.convert_to<double>(); }

inline Rational floor_rational(const Rational& value) {
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  BigInt q = num / den;
  if (num < 0 && q * den != num) q -= 1;
  return Rational(q);
}

inline bool is_integer(const Rational& value) {
  return boost::multiprecision::denominator(value) == 1;
}

}  // namespace covkit
