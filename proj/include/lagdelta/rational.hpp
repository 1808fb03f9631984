#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace lagdelta {

// Exact rational arithmetic for the inequality coefficients and the
// Sylvester minors. Unbounded, so no overflow concerns at n <= 12.
using Rational = boost::multiprecision::cpp_rational;

inline Rational ratio(long long num, long long den = 1) {
  return Rational(num) / Rational(den);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string numerator_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str();
}

inline std::string denominator_string(const Rational& r) {
  return boost::multiprecision::denominator(r).str();
}

// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Rational& r) {
  auto den = boost::multiprecision::denominator(r);
  if (den == 1) return numerator_string(r);
  return numerator_string(r) + "/" + den.str();
}

}  // namespace lagdelta
