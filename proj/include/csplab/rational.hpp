#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <string>

#include "csplab/errors.hpp"

namespace csplab {

// All arithmetic in this library is exact. Rational is GMP-backed and kept
// canonical (lowest terms, positive denominator) by the backend.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

inline Integer num(const Rational& r) { return numerator(r); }
inline Integer den(const Rational& r) { return denominator(r); }

// Canonical wire format: "num/den", denominator always present and positive.
inline std::string rational_to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "num/den" or a bare integer "num".
inline Rational rational_from_string(const std::string& s) {
  Integer n, d;
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(Integer(s));
    n = Integer(s.substr(0, slash));
    d = Integer(s.substr(slash + 1));
  } catch (const std::runtime_error&) {
    throw ParseError("malformed rational: " + s);
  }
  if (d <= 0) throw ParseError("rational denominator must be positive: " + s);
  return Rational(n, d);
}

// Least integer q with q * d >= n, for d >= 1.
inline Integer ceil_div(const Integer& n, const Integer& d) {
  Integer q = n / d;
  if (q * d < n) ++q;
  return q;
}

}  // namespace csplab
