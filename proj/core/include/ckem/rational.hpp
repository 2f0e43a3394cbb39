#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace ckem {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Exact value of a finite double as a binary rational. Throws InputError on inf/nan.
Rational to_rational(double x);

double to_double(const Rational& q);

// Accepts "n", "n/d", decimals ("-0.95", "1e-3", "2.5E2"). Exact; no rounding through double.
Rational parse_rational(std::string_view text);

// "n/d" or "n" when the denominator is 1.
std::string to_string(const Rational& q);

// Largest rational g with a/g and b/g both integers (a, b >= 0, not both 0).
Rational rational_gcd(const Rational& a, const Rational& b);

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline int sign(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

}  // namespace ckem
