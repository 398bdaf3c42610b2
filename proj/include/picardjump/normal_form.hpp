#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "picardjump/matrix.hpp"
#include "picardjump/rational.hpp"

namespace pj {

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

namespace detail {

// (x, y, g) with x*a + y*b = g = gcd(a, b) >= 0.
inline void extended_gcd(Integer const& a, Integer const& b, Integer& x,
                         Integer& y, Integer& g) {
  Integer r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    Integer q = floor_div(r0, r1);
    Integer t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
    t = t0 - q * t1;
    t0 = t1;
    t1 = t;
  }
  if (r0 < 0) {
    r0 = -r0;
    s0 = -s0;
    t0 = -t0;
  }
  x = s0;
  y = t0;
  g = r0;
}

// Rows (r, s) <- (x*r + y*s, -(b/g)*r + (a/g)*s); determinant 1.
inline void row_2x2(IntMatrix& m, std::size_t r, std::size_t s,
                    Integer const& p, Integer const& q, Integer const& u,
                    Integer const& v) {
  for (std::size_t c = 0; c < m.cols(); ++c) {
    Integer vr = m(r, c), vs = m(s, c);
    m(r, c) = p * vr + q * vs;
    m(s, c) = u * vr + v * vs;
  }
}

inline void col_2x2(IntMatrix& m, std::size_t r, std::size_t s,
                    Integer const& p, Integer const& q, Integer const& u,
                    Integer const& v) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer vr = m(i, r), vs = m(i, s);
    m(i, r) = p * vr + q * vs;
    m(i, s) = u * vr + v * vs;
  }
}

inline void negate_row(IntMatrix& m, std::size_t r) {
  for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = -m(r, c);
}

// row r += k * row s
inline void add_row(IntMatrix& m, std::size_t r, std::size_t s,
                    Integer const& k) {
  if (k == 0) return;
  for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) += k * m(s, c);
}

inline void add_col(IntMatrix& m, std::size_t r, std::size_t s,
                    Integer const& k) {
  if (k == 0) return;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, r) += k * m(i, s);
}

}  // namespace detail

struct HermiteForm {
  IntMatrix h;  // h = u * a
  IntMatrix u;  // unimodular
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

// Row Hermite normal form: echelon, positive pivots, entries above a pivot
// reduced into [0, pivot).
inline HermiteForm hermite_normal_form(IntMatrix const& a) {
  HermiteForm f{a, IntMatrix::identity(a.rows()), 0, {}};
  IntMatrix& h = f.h;
  std::size_t r = 0;
  for (std::size_t j = 0; j < h.cols() && r < h.rows(); ++j) {
    for (std::size_t s = r + 1; s < h.rows(); ++s) {
      if (h(s, j) == 0) continue;
      Integer x, y, g;
      detail::extended_gcd(h(r, j), h(s, j), x, y, g);
      Integer ca = h(r, j) / g, cb = h(s, j) / g;
      detail::row_2x2(h, r, s, x, y, -cb, ca);
      detail::row_2x2(f.u, r, s, x, y, -cb, ca);
    }
    if (h(r, j) == 0) continue;
    if (h(r, j) < 0) {
      detail::negate_row(h, r);
      detail::negate_row(f.u, r);
    }
    for (std::size_t s = 0; s < r; ++s) {
      Integer k = -floor_div(h(s, j), h(r, j));
      detail::add_row(h, s, r, k);
      detail::add_row(f.u, s, r, k);
    }
    f.pivots.push_back(j);
    ++r;
  }
  f.rank = r;
  return f;
}

// Hermite basis of the row lattice of a (zero rows dropped).
inline IntMatrix row_lattice_basis(IntMatrix const& a) {
  HermiteForm f = hermite_normal_form(a);
  return f.h.block(0, 0, f.rank, a.cols());
}

// Basis (as rows) of { x in Z^n : a x = 0 }.  The result is primitive.
inline IntMatrix integer_kernel(IntMatrix const& a) {
  std::size_t n = a.cols();
  if (a.rows() == 0) return IntMatrix::identity(n);
  HermiteForm f = hermite_normal_form(a.transpose());
  IntMatrix k = f.u.block(f.rank, 0, n - f.rank, n);
  if (k.rows() == 0) return k;
  return row_lattice_basis(k);
}

struct SmithForm {
  std::vector<Integer> diagonal;  // d_1 | d_2 | ..., length min(rows, cols)
  IntMatrix u;                    // u * a * v = diag
  IntMatrix v;
  std::size_t rank = 0;
};

inline SmithForm smith_normal_form(IntMatrix const& a) {
  std::size_t m = a.rows(), n = a.cols();
  IntMatrix d = a;
  SmithForm f{{}, IntMatrix::identity(m), IntMatrix::identity(n), 0};
  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    while (true) {
      // smallest nonzero entry of the trailing block to (t, t)
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (d(i, j) != 0 &&
              (!best || abs(d(i, j)) < abs(d(best->first, best->second))))
            best = {i, j};
      if (!best) break;
      d.swap_rows(t, best->first);
      f.u.swap_rows(t, best->first);
      d.swap_cols(t, best->second);
      f.v.swap_cols(t, best->second);
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        Integer q = floor_div(d(i, t), d(t, t));
        detail::add_row(d, i, t, -q);
        detail::add_row(f.u, i, t, -q);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        Integer q = floor_div(d(t, j), d(t, t));
        detail::add_col(d, j, t, -q);
        detail::add_col(f.v, j, t, -q);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility: fold an offending row into row t and retry
      std::optional<std::size_t> bad;
      for (std::size_t i = t + 1; i < m && !bad; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            bad = i;
            break;
          }
      if (!bad) break;
      detail::add_row(d, t, *bad, Integer(1));
      detail::add_row(f.u, t, *bad, Integer(1));
    }
    if (d(t, t) == 0) break;
    if (d(t, t) < 0) {
      detail::negate_row(d, t);
      detail::negate_row(f.u, t);
    }
  }
  f.rank = t;
  for (std::size_t i = 0; i < std::min(m, n); ++i) f.diagonal.push_back(d(i, i));
  return f;
}

inline Integer vector_content(IntVector const& v) {
  Integer g = 0;
  for (auto const& x : v) g = gcd(g, x);
  return g;
}

// Positive multiple of v that is integral and primitive.
inline IntVector primitive_integer_vector(RatVector const& v) {
  Integer den = 1;
  for (auto const& x : v) den = lcm(den, denominator(x));
  IntVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = numerator(v[i] * den);
  Integer g = vector_content(r);
  if (g == 0) throw Error("zero vector has no primitive multiple");
  for (auto& x : r) x /= g;
  return r;
}

// Rows of a scaled by a positive integer so every entry is integral.
inline IntMatrix clear_row_denominators(RatMatrix const& a) {
  IntMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Integer den = 1;
    for (std::size_t j = 0; j < a.cols(); ++j)
      den = lcm(den, denominator(a(i, j)));
    for (std::size_t j = 0; j < a.cols(); ++j)
      r(i, j) = numerator(a(i, j) * den);
  }
  return r;
}

// Reduced row echelon form over a field.
template <class F>
struct EchelonForm {
  Matrix<F> r;
  std::vector<std::size_t> pivots;
};

template <class F>
EchelonForm<F> reduced_echelon(Matrix<F> a) {
  EchelonForm<F> e;
  std::size_t row = 0;
  for (std::size_t j = 0; j < a.cols() && row < a.rows(); ++j) {
    std::size_t p = row;
    while (p < a.rows() && a(p, j) == F(0)) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(row, p);
    F inv = F(1) / a(row, j);
    for (std::size_t c = 0; c < a.cols(); ++c) a(row, c) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, j) == F(0)) continue;
      F k = a(i, j);
      for (std::size_t c = 0; c < a.cols(); ++c) a(i, c) -= k * a(row, c);
    }
    e.pivots.push_back(j);
    ++row;
  }
  e.r = std::move(a);
  return e;
}

template <class F>
std::size_t matrix_rank(Matrix<F> const& a) {
  return reduced_echelon(a).pivots.size();
}

template <class F>
F determinant(Matrix<F> a) {
  if (a.rows() != a.cols()) throw Error("determinant of non-square matrix");
  F det = 1;
  std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t p = j;
    while (p < n && a(p, j) == F(0)) ++p;
    if (p == n) return F(0);
    if (p != j) {
      a.swap_rows(p, j);
      det = -det;
    }
    det *= a(j, j);
    for (std::size_t i = j + 1; i < n; ++i) {
      if (a(i, j) == F(0)) continue;
      F k = a(i, j) / a(j, j);
      for (std::size_t c = j; c < n; ++c) a(i, c) -= k * a(j, c);
    }
  }
  return det;
}

inline Integer determinant(IntMatrix const& a) {
  Rational d = determinant(a.cast<Rational>());
  return numerator(d);
}

template <class F>
std::optional<Matrix<F>> inverse(Matrix<F> const& a) {
  std::size_t n = a.rows();
  if (a.cols() != n) throw Error("inverse of non-square matrix");
  Matrix<F> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = F(1);
  }
  auto e = reduced_echelon(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  return e.r.block(0, n, n, n);
}

// Some x with a x = b, or nothing if inconsistent.
template <class F>
std::optional<std::vector<F>> solve(Matrix<F> const& a,
                                    std::vector<F> const& b) {
  Matrix<F> aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  auto e = reduced_echelon(aug);
  std::vector<F> x(a.cols(), F(0));
  for (std::size_t k = 0; k < e.pivots.size(); ++k) {
    if (e.pivots[k] == a.cols()) return std::nullopt;
    x[e.pivots[k]] = e.r(k, a.cols());
  }
  return x;
}

}  // namespace pj
