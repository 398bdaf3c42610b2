#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <string>
#include <string_view>

#include "picardjump/errors.hpp"

namespace pj {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator(Rational const& q) {
  return boost::multiprecision::numerator(q);
}
inline Integer denominator(Rational const& q) {
  return boost::multiprecision::denominator(q);
}
inline bool is_integral(Rational const& q) { return denominator(q) == 1; }

inline Integer abs(Integer const& x) { return x < 0 ? Integer(-x) : x; }
inline Rational abs(Rational const& x) { return x < 0 ? Rational(-x) : x; }

inline Integer gcd(Integer a, Integer b) {
  a = abs(a);
  b = abs(b);
  while (b != 0) {
    Integer r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline Integer lcm(Integer const& a, Integer const& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

// Floor division for any signs.
inline Integer floor_div(Integer const& a, Integer const& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

inline Integer floor(Rational const& q) {
  return floor_div(numerator(q), denominator(q));
}

// Accepts "n", "-n", "n/d".
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) -> Integer {
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
    if (i == s.size()) throw InputError("bad rational: " + std::string(text));
    Integer v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9')
        throw InputError("bad rational: " + std::string(text));
      v = v * 10 + (s[i] - '0');
    }
    return neg ? Integer(-v) : v;
  };
  std::size_t slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  Integer d = parse_int(text.substr(slash + 1));
  if (d == 0) throw InputError("zero denominator: " + std::string(text));
  return Rational(parse_int(text.substr(0, slash)), d);
}

inline std::string to_string(Integer const& x) { return x.str(); }
inline std::string to_string(Rational const& q) {
  if (is_integral(q)) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

inline double to_double(Integer const& x) { return x.convert_to<double>(); }
inline double to_double(Rational const& q) { return q.convert_to<double>(); }

}  // namespace pj
