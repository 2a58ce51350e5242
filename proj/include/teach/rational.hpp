#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace teach {

// Exact scalar used for every feature value and every geometric quantity.
using Rational = mpq_class;

// A featurized object: one coordinate per feature, in canonical feature order.
using Point = std::vector<Rational>;

// Parses "p/q" or "p" (optional sign). Throws TeachError(InvalidRational)
// on malformed text or a zero denominator. Result is canonical.
Rational parse_rational(std::string_view text);

// "p/q" for non-integers, "p" for integers.
std::string format_rational(const Rational& value);

Rational dot(const Point& a, const Point& b);
Rational squared_norm(const Point& a);
Rational squared_distance(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);

std::string format_point(const Point& p);

}  // namespace teach
