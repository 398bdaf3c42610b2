#pragma once

// Enumerators written separately from ns_bounded: plain box loops for small
// rank, a modulus-pruned depth-first search for K3 rank.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "picardjump/period.hpp"

namespace oracle {

using pj::Complex;
using pj::SmallVector;

inline std::vector<Complex> pairing_row(pj::PeriodPoint const& pt) {
  std::size_t n = pt.omega.size();
  std::vector<Complex> c(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      c[i] += pj::to_double(pt.lattice.gram()(i, j)) * pt.omega[j];
  return c;
}

inline double scale(pj::PeriodPoint const& pt) {
  double m = 0;
  for (auto const& w : pt.omega) m = std::max(m, std::abs(w));
  return m;
}

inline std::vector<SmallVector> brute_ns(pj::PeriodPoint const& pt, long bound,
                                         double tol) {
  std::size_t n = pt.omega.size();
  auto c = pairing_row(pt);
  double s = scale(pt);
  std::vector<SmallVector> out;
  SmallVector v(n, -bound);
  for (;;) {
    long l1 = 0;
    Complex acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      l1 += std::labs(v[i]);
      acc += double(v[i]) * c[i];
    }
    if (l1 > 0 && std::abs(acc) < tol * double(l1) * s) out.push_back(v);
    std::size_t k = n;
    while (k-- > 0) {
      if (v[k] < bound) {
        ++v[k];
        break;
      }
      v[k] = -bound;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Exact for the same threshold: a branch is dropped only when
// |partial| - bound * sum |c_rest| exceeds the largest reachable threshold.
inline std::vector<SmallVector> dfs_ns(pj::PeriodPoint const& pt, long bound,
                                       double tol) {
  std::size_t n = pt.omega.size();
  auto c = pairing_row(pt);
  double s = scale(pt);
  std::vector<std::size_t> ord(n);
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(),
            [&](auto a, auto b) { return std::abs(c[a]) > std::abs(c[b]); });
  std::vector<double> rest(n + 1, 0);
  for (std::size_t k = n; k-- > 0;) rest[k] = rest[k + 1] + std::abs(c[ord[k]]);
  std::vector<SmallVector> out;
  SmallVector v(n, 0);
  auto rec = [&](auto&& self, std::size_t k, Complex partial, long l1) -> void {
    double cap = tol * double(l1 + bound * long(n - k)) * s * (1 + 1e-12);
    if (std::abs(partial) - double(bound) * rest[k] > cap) return;
    if (k == n) {
      if (l1 > 0 && std::abs(partial) < tol * double(l1) * s) out.push_back(v);
      return;
    }
    for (long x = -bound; x <= bound; ++x) {
      v[ord[k]] = x;
      self(self, k + 1, partial + double(x) * c[ord[k]], l1 + std::labs(x));
    }
    v[ord[k]] = 0;
  };
  rec(rec, 0, 0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle
