#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace fec {

// Exact rational scalar. Polynomial coefficients stay in this type end to end;
// conversion to double happens only at evaluation sites.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

// Every finite double is a dyadic rational, so this conversion is exact.
inline Rational rational_from_double(double x) { return Rational(x); }

inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace fec
