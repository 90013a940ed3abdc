#ifndef MAPFORGE_RATIONAL_HPP
#define MAPFORGE_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "mapforge/errors.hpp"

namespace mapforge {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (long i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

// "num/den" with den > 0, omitting "/1" on integers.
inline std::string rat_to_string(const BigRat& q) {
  BigInt num = boost::multiprecision::numerator(q);
  BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline BigRat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return BigRat(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    require(den != 0, errc::invalid_input, "rational with zero denominator: " + s);
    return BigRat(num, den);
  } catch (const std::exception&) {
    throw error(errc::invalid_input, "malformed rational: " + s);
  }
}

}  // namespace mapforge

#endif
