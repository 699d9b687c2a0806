#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace lakit {

// Exact arbitrary-precision rational scalar.  Every quantity in the kernel is
// either one of these or a polynomial with these as coefficients; no floating
// point arithmetic appears anywhere in the verification paths.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline std::string rational_str(const Rational& r) { return r.str(); }

} // namespace lakit
