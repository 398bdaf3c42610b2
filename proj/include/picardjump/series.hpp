#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace pj {

using Complex = std::complex<double>;

// Coefficients c_0, c_1, ... of a truncated power series in (z - center).
using Series = std::vector<Complex>;

inline Complex horner(Series const& s, Complex w) {
  Complex acc = 0;
  for (std::size_t k = s.size(); k-- > 0;) acc = acc * w + s[k];
  return acc;
}

inline Series derivative(Series const& s) {
  Series d;
  for (std::size_t k = 1; k < s.size(); ++k) d.push_back(double(k) * s[k]);
  return d;
}

inline Series trimmed(Series s) {
  while (!s.empty() && s.back() == Complex(0)) s.pop_back();
  return s;
}

inline bool is_constant(Series const& s) {
  for (std::size_t k = 1; k < s.size(); ++k)
    if (s[k] != Complex(0)) return false;
  return true;
}

inline Series series_product(Series const& a, Series const& b) {
  if (a.empty() || b.empty()) return {};
  Series c(a.size() + b.size() - 1, Complex(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

inline double sup_abs(Series const& s) {
  double m = 0;
  for (auto const& c : s) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace pj
