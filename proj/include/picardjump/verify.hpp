#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "picardjump/jump.hpp"

namespace pj {

// Checks a claimed jump (v, Q) using none of the machinery of find_jump:
// plain power sums, a trapezoid integral of g'/g and rational rank.
struct Verification {
  double residual = 0;
  double contour_count = 0;  // (1/2 pi i) \oint g'/g around Q, unrounded
  bool outside_fixed = false;
  bool ok = false;
  std::string reason;
};

namespace detail {

inline Complex power_sum(Series const& s, Complex w) {
  Complex acc = 0;
  for (std::size_t d = 0; d < s.size(); ++d)
    acc += s[d] * std::pow(w, static_cast<double>(d));
  return acc;
}

inline bool rank_grows(std::vector<IntVector> const& base, IntVector const& v) {
  if (base.empty()) {
    for (auto const& x : v)
      if (x != 0) return true;
    return false;
  }
  RatMatrix a(base.size() + 1, v.size());
  for (std::size_t i = 0; i < base.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) a(i, j) = Rational(base[i][j]);
  for (std::size_t j = 0; j < v.size(); ++j) a(base.size(), j) = Rational(v[j]);
  return matrix_rank(a) == base.size() + 1;
}

}  // namespace detail

inline Verification verify_jump(PeriodFamily const& fam, IntVector const& v,
                                Complex Q, double tol, double radius = 0) {
  Verification out;
  PeriodMap const& pm = fam.pm;
  if (v.size() != fam.ambient.rank()) throw InputError("class length mismatch");
  if (std::abs(Q - pm.center) >= pm.radius)
    throw DomainError("point outside the period map disk");

  // c_i = (v . b_i): g(z) = sum_i c_i f_i(z)
  std::vector<double> c(pm.coords.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = to_double(fam.ambient.pairing(to_rational(v), to_rational(fam.perp_basis[i])));
  auto g = [&](Complex z, bool deriv) {
    Complex s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0) continue;
      if (i == pm.normalization) {
        if (!deriv) s += c[i];
        continue;
      }
      Series const& f = pm.coords[i];
      if (!deriv) {
        s += c[i] * detail::power_sum(f, z - pm.center);
      } else {
        Complex acc = 0;
        for (std::size_t d = 1; d < f.size(); ++d)
          acc += double(d) * f[d] *
                 std::pow(z - pm.center, static_cast<double>(d - 1));
        s += c[i] * acc;
      }
    }
    return s;
  };
  out.residual = std::abs(g(Q, false));

  double rmax = pm.radius - std::abs(Q - pm.center);
  double r = radius > 0 ? radius : std::min(1e-3, 0.5 * rmax);
  r = std::min(r, 0.5 * rmax);
  int n = 4096;
  Complex acc = 0;
  bool hit = false;
  for (int k = 0; k < n; ++k) {
    Complex e = std::polar(1.0, 2 * std::numbers::pi * k / n);
    Complex z = Q + r * e;
    Complex gz = g(z, false);
    if (std::abs(gz) == 0) hit = true;
    acc += g(z, true) / gz * (r * e);  // dz = i r e dt, the i cancels below
  }
  out.contour_count = hit ? NAN : (acc / double(n)).real();

  std::vector<IntVector> fixed = fam.fixed.basis();
  out.outside_fixed = detail::rank_grows(fixed, v);

  if (!(out.residual < tol)) out.reason = "residual above tolerance";
  else if (!(std::abs(out.contour_count - std::round(out.contour_count)) < 0.05 &&
             std::round(out.contour_count) >= 1))
    out.reason = "no zero of (v.p) inside the test circle";
  else if (!out.outside_fixed) out.reason = "class lies in the fixed part";
  out.ok = out.reason.empty();
  return out;
}

}  // namespace pj
