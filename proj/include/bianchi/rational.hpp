#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace bianchi {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Renders p/q, omitting the denominator when q == 1.
inline std::string to_string(const Rational &r) {
  const Integer num = numerator(r);
  const Integer den = denominator(r);
  std::string s = num.str();
  if (den != 1)
    s += "/" + den.str();
  return s;
}

} // namespace bianchi
