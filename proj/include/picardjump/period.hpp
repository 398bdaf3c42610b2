#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <future>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "picardjump/errors.hpp"
#include "picardjump/lattice.hpp"
#include "picardjump/series.hpp"

namespace pj {

using MatrixD = Matrix<double>;

inline MatrixD to_double(RatMatrix const& m) {
  MatrixD d(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d(i, j) = to_double(m(i, j));
  return d;
}

// Bilinear (not Hermitian) extension of the lattice form.
inline Complex bilinear(MatrixD const& g, std::vector<Complex> const& x,
                        std::vector<Complex> const& y) {
  Complex s = 0;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    Complex row = 0;
    for (std::size_t j = 0; j < g.cols(); ++j) row += g(i, j) * y[j];
    s += x[i] * row;
  }
  return s;
}

struct PeriodPoint {
  Lattice lattice;
  std::vector<Complex> omega;
};

// p(z) = [f_0(z) : ... : f_n(z)], f_normalization == 1, as series in
// (z - center), valid for |z - center| < radius.
struct PeriodMap {
  Lattice lattice;
  std::vector<Series> coords;
  double radius = 0;
  std::size_t normalization = 0;
  Complex center = 0;

  void check() const {
    if (coords.size() != lattice.rank())
      throw InputError("period map needs one series per basis vector");
    if (normalization >= coords.size())
      throw InputError("normalization index out of range");
    Series n = trimmed(coords[normalization]);
    if (n.size() != 1 || n[0] != Complex(1))
      throw InputError("normalization coordinate must be the constant 1");
    if (!(radius > 0)) throw InputError("radius must be positive");
  }

  std::size_t truncation_degree() const {
    std::size_t d = 0;
    for (auto const& s : coords) {
      auto t = trimmed(s);
      if (!t.empty()) d = std::max(d, t.size() - 1);
    }
    return d;
  }

  bool is_constant_map() const {
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (i != normalization && !pj::is_constant(coords[i])) return false;
    return true;
  }

  bool in_domain(Complex z) const { return std::abs(z - center) < radius; }

  std::vector<Complex> values(Complex z) const {
    if (!in_domain(z)) throw DomainError("point outside the period map disk");
    std::vector<Complex> v(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i)
      v[i] = horner(coords[i], z - center);
    v[normalization] = 1.0;
    return v;
  }
};

inline PeriodPoint evaluate(PeriodMap const& pm, Complex z) {
  return {pm.lattice, pm.values(z)};
}

struct PeriodReport {
  double isotropy_residual = 0;
  double positivity_value = 0;
  bool ok = false;
};

inline PeriodReport validate_period(PeriodPoint const& pt, double tol) {
  MatrixD g = to_double(pt.lattice.gram());
  std::vector<Complex> bar(pt.omega.size());
  for (std::size_t i = 0; i < bar.size(); ++i) bar[i] = std::conj(pt.omega[i]);
  PeriodReport r;
  r.isotropy_residual = std::abs(bilinear(g, pt.omega, pt.omega));
  r.positivity_value = bilinear(g, pt.omega, bar).real();
  r.ok = r.isotropy_residual < tol && r.positivity_value > tol;
  return r;
}

using SmallVector = std::vector<long>;

struct NsReport {
  std::vector<SmallVector> vectors;  // sorted, closed under negation
  std::size_t rank = 0;
  long bound = 0;
  double tol = 0;
};

inline std::size_t rational_rank(std::vector<SmallVector> const& vs,
                                 std::size_t n) {
  std::vector<RatVector> basis;  // echelon rows
  std::vector<std::size_t> lead;
  for (auto const& v : vs) {
    RatVector x(v.begin(), v.end());
    for (std::size_t b = 0; b < basis.size(); ++b) {
      if (x[lead[b]] == 0) continue;
      Rational f = x[lead[b]];
      for (std::size_t j = 0; j < n; ++j) x[j] -= f * basis[b][j];
    }
    std::size_t p = 0;
    while (p < n && x[p] == 0) ++p;
    if (p == n) continue;
    Rational inv = 1 / x[p];
    for (auto& e : x) e *= inv;
    for (std::size_t b = 0; b < basis.size(); ++b) {
      if (basis[b][p] == 0) continue;
      Rational f = basis[b][p];
      for (std::size_t j = 0; j < n; ++j) basis[b][j] -= f * x[j];
    }
    basis.push_back(std::move(x));
    lead.push_back(p);
    if (basis.size() == n) break;
  }
  return basis.size();
}

inline constexpr std::size_t kMaxKeptVectors = 2'000'000;

// All nonzero v with |v|_inf <= bound and |(v.w)| < tol |v|_1 max|w_i|.
// Branch and bound over coordinates sorted by |(e_j.w)|; a branch is cut
// only when no completion can meet the threshold, so the result equals
// the brute-force enumeration.
inline NsReport ns_bounded(PeriodPoint const& pt, long bound, double tol,
                           unsigned threads = 0) {
  if (bound < 1) throw DomainError("coefficient bound must be at least 1");
  std::size_t n = pt.lattice.rank();
  MatrixD g = to_double(pt.lattice.gram());
  std::vector<Complex> c(n, 0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) c[j] += g(j, i) * pt.omega[i];
  double scale = 0;
  for (auto const& w : pt.omega) scale = std::max(scale, std::abs(w));

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return std::abs(c[a]) > std::abs(c[b]);
  });
  std::vector<double> cre(n), cim(n), suf_re(n + 1, 0), suf_im(n + 1, 0);
  double total = 0;
  for (std::size_t k = 0; k < n; ++k) {
    cre[k] = c[order[k]].real();
    cim[k] = c[order[k]].imag();
    total += std::abs(c[order[k]]);
  }
  for (std::size_t k = n; k-- > 0;) {
    suf_re[k] = suf_re[k + 1] + std::abs(cre[k]);
    suf_im[k] = suf_im[k + 1] + std::abs(cim[k]);
  }
  double const unit = tol * scale;
  double const slack = 1e-13 * (1.0 + double(bound) * total);
  double const b = double(bound);

  struct Search {
    std::vector<long> v;
    std::vector<SmallVector> kept;
  };

  // Integer x range keeping |part + x*coef| <= reach.
  auto range = [&](double part, double coef, double reach, long& lo,
                   long& hi) {
    if (coef == 0) {
      if (std::abs(part) > reach) hi = lo - 1;
      return;
    }
    double a = (-reach - part) / coef, z = (reach - part) / coef;
    if (a > z) std::swap(a, z);
    lo = std::max(lo, long(std::ceil(a - 1e-12)));
    hi = std::min(hi, long(std::floor(z + 1e-12)));
  };

  std::function<void(Search&, std::size_t, double, double, long)> dfs =
      [&](Search& s, std::size_t d, double pre, double pim, long l1) {
        if (d == n) {
          if (l1 > 0 && std::hypot(pre, pim) < unit * double(l1)) {
            SmallVector out(n);
            for (std::size_t k = 0; k < n; ++k) out[order[k]] = s.v[k];
            s.kept.push_back(std::move(out));
            if (s.kept.size() > kMaxKeptVectors)
              throw Error("bounded enumeration kept too many vectors");
          }
          return;
        }
        double reach_thr = unit * (double(l1) + b * double(n - d)) + slack;
        long lo = -bound, hi = bound;
        range(pre, cre[d], b * suf_re[d + 1] + reach_thr, lo, hi);
        range(pim, cim[d], b * suf_im[d + 1] + reach_thr, lo, hi);
        for (long x = lo; x <= hi; ++x) {
          s.v[d] = x;
          dfs(s, d + 1, pre + double(x) * cre[d], pim + double(x) * cim[d],
              l1 + std::labs(x));
        }
        s.v[d] = 0;
      };

  std::vector<SmallVector> kept;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads <= 1 || n == 0) {
    Search s{std::vector<long>(n, 0), {}};
    dfs(s, 0, 0.0, 0.0, 0);
    kept = std::move(s.kept);
  } else {
    // Partition by the value of the leading coordinate.
    std::vector<std::future<std::vector<SmallVector>>> parts;
    for (long x = -bound; x <= bound; ++x)
      parts.push_back(std::async(std::launch::async, [&, x] {
        Search s{std::vector<long>(n, 0), {}};
        double reach = b * suf_re[1] + unit * b * double(n) + slack;
        double reach_im = b * suf_im[1] + unit * b * double(n) + slack;
        if (std::abs(x * cre[0]) > reach || std::abs(x * cim[0]) > reach_im)
          return s.kept;
        s.v[0] = x;
        dfs(s, 1, double(x) * cre[0], double(x) * cim[0], std::labs(x));
        return s.kept;
      }));
    for (auto& f : parts) {
      auto part = f.get();
      kept.insert(kept.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
    }
  }
  std::sort(kept.begin(), kept.end());
  NsReport r;
  r.rank = rational_rank(kept, n);
  r.vectors = std::move(kept);
  r.bound = bound;
  r.tol = tol;
  return r;
}

struct GenericPeriod {
  PeriodPoint point;
  NsReport ns;
  int attempts = 0;
};

inline constexpr int kGenericPeriodRetries = 1000;
inline constexpr long kMaxProposals = 5'000'000;

// A period point orthogonal to S and to no other bounded class outside
// the saturation of S.
inline GenericPeriod generic_period(Lattice const& l, Sublattice const& s,
                                    long bound, std::uint64_t seed,
                                    double tol) {
  std::size_t n = l.rank();
  Signature sig = signature(l);
  if (sig.nullity != 0 || sig.positive != 3)
    throw DomainError("lattice signature must be (3, rank - 3)");
  if (s.rank() + 3 > n) throw Error("perpendicular too small");
  Sublattice perp = orthogonal_complement(l, s);
  if (perp.rank() < 2 || signature(perp.gram()).positive < 2)
    throw Error("perpendicular too small");
  Saturation sat = saturate(l, s);

  auto ginv_r = inverse(l.gram());
  if (!ginv_r) throw Error("degenerate lattice");
  MatrixD ginv = to_double(*ginv_r);
  MatrixD g = to_double(l.gram());

  // Euclidean projector onto the annihilator of S: c . s = 0 for s in S.
  RatMatrix proj_r = RatMatrix::identity(n);
  if (s.rank() > 0) {
    RatMatrix b = s.rows().cast<Rational>();
    auto bbinv = inverse(b * b.transpose());
    proj_r = RatMatrix::identity(n) - (b.transpose() * (*bbinv) * b);
  }
  MatrixD proj = to_double(proj_r);
  auto project = [&](std::vector<Complex> const& x) {
    std::vector<Complex> y(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) y[i] += proj(i, j) * x[j];
    return y;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // One isotropic point orthogonal to S, or nothing when the draw is not
  // positive.  Magnitudes of c = G w fall by about 2 per coordinate in a
  // random order, which keeps the bounded enumeration shallow.
  auto propose = [&]() -> std::optional<PeriodPoint> {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Complex> c0(n);
    for (std::size_t i = 0; i < n; ++i) {
      double mag = std::ldexp(1.0 + unif(rng), -int(perm[i]));
      c0[i] = std::polar(mag, 2 * std::numbers::pi * unif(rng));
    }
    std::vector<Complex> c1 = project(c0);
    std::size_t top = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(c1[i]) > std::abs(c1[top])) top = i;
    std::vector<Complex> e(n, 0);
    e[top] = 1;
    std::vector<Complex> d = project(e);
    // (c1 + t d)^T G^-1 (c1 + t d) = 0
    Complex qa = bilinear(ginv, d, d), qb = bilinear(ginv, c1, d),
            qc = bilinear(ginv, c1, c1);
    std::vector<Complex> roots;
    if (std::abs(qa) < 1e-14) {
      if (std::abs(qb) < 1e-14) return std::nullopt;
      roots.push_back(-qc / (2.0 * qb));
    } else {
      Complex disc = std::sqrt(qb * qb - qa * qc);
      roots = {(-qb + disc) / qa, (-qb - disc) / qa};
      if (std::abs(roots[1]) < std::abs(roots[0])) std::swap(roots[0], roots[1]);
    }
    for (Complex t : roots) {
      std::vector<Complex> cc(n);
      for (std::size_t i = 0; i < n; ++i) cc[i] = c1[i] + t * d[i];
      std::vector<Complex> w(n, 0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w[i] += ginv(i, j) * cc[j];
      std::size_t imax = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (std::abs(w[i]) > std::abs(w[imax])) imax = i;
      if (std::abs(w[imax]) == 0) continue;
      Complex z = w[imax];
      for (auto& x : w) x /= z;
      w[imax] = 1;
      PeriodPoint pt{l, w};
      if (validate_period(pt, 1e-9).ok) return pt;
    }
    return std::nullopt;
  };

  long proposals = 0;
  for (int attempt = 1; attempt <= kGenericPeriodRetries; ++attempt) {
    std::optional<PeriodPoint> pt;
    while (!pt) {
      if (++proposals > kMaxProposals)
        throw Error("no isotropic positive direction found");
      pt = propose();
    }
    NsReport ns = ns_bounded(*pt, bound, tol);
    bool generic = true;
    for (auto const& v : ns.vectors)
      if (!contains(sat.lattice, IntVector(v.begin(), v.end()))) {
        generic = false;
        break;
      }
    if (generic) return {*pt, ns, attempt};
  }
  throw Error("generic period not found after retries");
}

struct FillStep {
  std::size_t j = 0;
  PeriodPoint point;
  std::size_t ns_rank = 0;
};

inline std::vector<FillStep> picard_fill_sequence(
    Lattice const& l, std::vector<IntVector> const& classes, long bound,
    std::uint64_t seed, double tol) {
  Sublattice all(l, classes);  // checks independence
  std::vector<FillStep> out;
  for (std::size_t j = 0; j <= classes.size(); ++j) {
    std::vector<IntVector> prefix(classes.begin(), classes.begin() + j);
    GenericPeriod gp = generic_period(l, Sublattice(l, prefix), bound,
                                      seed + 7919 * j, tol);
    if (gp.ns.rank != j)
      throw Error("prescribed class not visible at the enumeration bound");
    out.push_back({j, gp.point, gp.ns.rank});
  }
  return out;
}

}  // namespace pj
