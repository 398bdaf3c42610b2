#pragma once

// Independent checks for lattice_core.  Nothing here calls the saturation
// or complement code under test.

#include <Eigen/Dense>

#include <random>
#include <vector>

#include "picardjump/lattice.hpp"

namespace pj::oracle {

inline Signature eigen_signature(RatMatrix const& g) {
  std::size_t n = g.rows();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = to_double(g(i, j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Signature s;
  double scale = 1.0 + m.cwiseAbs().maxCoeff();
  for (std::size_t i = 0; i < n; ++i) {
    double l = es.eigenvalues()(i);
    if (std::abs(l) < 1e-9 * scale) ++s.nullity;
    else if (l > 0) ++s.positive;
    else ++s.negative;
  }
  return s;
}

// Saturation through the Smith form: b = u^-1 d v^-1, so the first j
// columns of u^-1 span the primitive closure and the index is prod(d).
struct SmithSaturation {
  IntMatrix basis_rows;
  Integer index;
};

inline SmithSaturation smith_saturation(std::vector<IntVector> const& s,
                                        std::size_t n) {
  IntMatrix b = IntMatrix::from_columns(s, n);
  SmithForm f = smith_normal_form(b);
  auto uinv = inverse(f.u.cast<Rational>());
  IntMatrix rows(s.size(), n);
  for (std::size_t j = 0; j < s.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) rows(j, i) = numerator((*uinv)(i, j));
  Integer index = 1;
  for (std::size_t j = 0; j < s.size(); ++j) index *= f.diagonal[j];
  return {rows, abs(index)};
}

// Same integer span.
inline bool same_lattice(IntMatrix const& a, IntMatrix const& b) {
  if (a.cols() != b.cols()) return false;
  IntMatrix ha = row_lattice_basis(a), hb = row_lattice_basis(b);
  return ha == hb;
}

inline bool is_primitive(IntMatrix const& rows) {
  if (rows.rows() == 0) return true;
  SmithForm f = smith_normal_form(rows);
  for (std::size_t i = 0; i < rows.rows(); ++i)
    if (f.diagonal[i] != 1) return false;
  return true;
}

// Every x in [-r, r]^n with (s.x) = 0 for all s.
inline std::vector<IntVector> brute_force_perp(Lattice const& l,
                                               std::vector<IntVector> const& s,
                                               int r) {
  std::size_t n = l.rank();
  IntMatrix g = l.integer_gram();
  std::vector<std::vector<long>> a;
  for (auto const& v : s) {
    std::vector<long> row(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      Integer acc = 0;
      for (std::size_t i = 0; i < n; ++i) acc += v[i] * g(i, j);
      row[j] = acc.convert_to<long>();
    }
    a.push_back(row);
  }
  std::vector<IntVector> out;
  std::vector<long> x(n, -r);
  while (true) {
    bool ok = true;
    for (auto const& row : a) {
      long d = 0;
      for (std::size_t j = 0; j < n; ++j) d += row[j] * x[j];
      if (d != 0) {
        ok = false;
        break;
      }
    }
    if (ok) out.emplace_back(x.begin(), x.end());
    std::size_t i = 0;
    while (i < n && x[i] == r) x[i++] = -r;
    if (i == n) break;
    ++x[i];
  }
  return out;
}

inline IntMatrix random_symmetric(std::mt19937_64& rng, std::size_t n, int c) {
  std::uniform_int_distribution<int> d(-c, c);
  IntMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) g(i, j) = g(j, i) = d(rng);
  return g;
}

inline IntMatrix random_nondegenerate(std::mt19937_64& rng, std::size_t n,
                                      int c) {
  while (true) {
    IntMatrix g = random_symmetric(rng, n, c);
    if (determinant(g) != 0) return g;
  }
}

inline std::vector<IntVector> random_independent(std::mt19937_64& rng,
                                                 std::size_t n, std::size_t j,
                                                 int c) {
  std::uniform_int_distribution<int> d(-c, c);
  while (true) {
    std::vector<IntVector> s(j, IntVector(n));
    for (auto& v : s)
      for (auto& x : v) x = d(rng);
    if (j == 0 || matrix_rank(IntMatrix::from_rows(s, n).cast<Rational>()) == j)
      return s;
  }
}

}  // namespace pj::oracle
