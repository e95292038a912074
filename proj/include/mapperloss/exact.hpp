#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace mapperloss {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// The shortest decimal literal that round-trips to v, as an exact rational.
// 0.1 becomes 1/10, not the nearest binary fraction. Throws on NaN/inf.
Rational exact_decimal(double v);

Integer floor_of(const Rational& q);
bool is_integer(const Rational& q);

}  // namespace mapperloss
