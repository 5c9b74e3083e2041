#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

namespace varkit {

using Rational = boost::multiprecision::cpp_rational;

/// Accepts integers, ratios "p/q" and decimals with optional exponent
/// ("-0.125", "3e-2"). Throws SpecParseError on anything else.
Rational parse_rational(std::string_view text);

/// The exact binary value of a finite double.
Rational rational_from_double_exact(double x);

/// The decimal that prints as the shortest round-trip representation of x,
/// so 0.1 maps to 1/10 rather than to its binary approximation.
Rational rational_from_double(double x);

/// "p" or "p/q" in lowest terms.
std::string to_string(const Rational& q);

double to_double(const Rational& q);

inline int sign(const Rational& q) { return q.sign(); }

}  // namespace varkit
