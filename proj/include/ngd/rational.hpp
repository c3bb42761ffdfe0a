#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/float128.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <string>
#include <string_view>

namespace ngd {

/// Exact rational arithmetic for finite structures and transport plans.
/// Expression templates are off so the type composes with Eigen containers.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

/// Quad precision used when certifying scale limits; the rescalings 1/|eps|
/// amplify double rounding past the tolerances we need.
using Quad = boost::multiprecision::float128;

/// Parses "p/q", an integer, or a finite decimal such as "0.125" or "-3.5e-2".
/// Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form, or "p" when the denominator is 1.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

}  // namespace ngd
