#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <future>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "picardjump/errors.hpp"
#include "picardjump/lattice.hpp"
#include "picardjump/period.hpp"
#include "picardjump/winding.hpp"

namespace pj {

// A period map on the coordinates of a primitive sublattice P of an
// ambient lattice, together with the fixed part F whose classes stay
// algebraic on the whole family (P is the perpendicular of F).
struct PeriodFamily {
  PeriodMap pm;
  Lattice ambient;
  Sublattice fixed;
  std::vector<IntVector> perp_basis;  // ambient coordinates of pm's basis

  void check() const {
    pm.check();
    if (perp_basis.size() != pm.lattice.rank())
      throw InputError("perpendicular basis size differs from period map rank");
    Sublattice p(ambient, perp_basis);
    if (!(p.gram() == pm.lattice.gram()))
      throw InputError("period map gram differs from the restricted form");
    for (auto const& b : perp_basis)
      for (auto const& f : fixed.basis())
        if (ambient.pairing(to_rational(b), to_rational(f)) != 0)
          throw InputError("perpendicular basis is not orthogonal to the fixed part");
  }

  // Ambient coordinates of p(z).
  std::vector<Complex> ambient_point(std::vector<Complex> const& w) const {
    std::vector<Complex> x(ambient.rank(), 0);
    for (std::size_t i = 0; i < perp_basis.size(); ++i)
      for (std::size_t j = 0; j < ambient.rank(); ++j)
        x[j] += w[i] * to_double(perp_basis[i][j]);
    return x;
  }
};

inline PeriodFamily trivial_family(PeriodMap pm) {
  std::size_t n = pm.lattice.rank();
  std::vector<IntVector> id(n, IntVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
  Lattice l = pm.lattice;
  return {std::move(pm), l, Sublattice::zero(l), id};
}

// phys[0] is the normalization coordinate, phys[1] the first non-constant
// coordinate, the rest follow in index order.
struct Frame {
  std::vector<std::size_t> phys;
};

inline Frame make_frame(PeriodMap const& pm) {
  Frame f;
  f.phys.push_back(pm.normalization);
  std::optional<std::size_t> first;
  for (std::size_t i = 0; i < pm.coords.size(); ++i)
    if (i != pm.normalization && !is_constant(pm.coords[i])) {
      first = i;
      break;
    }
  if (!first) throw Error("map constant");
  f.phys.push_back(*first);
  for (std::size_t i = 0; i < pm.coords.size(); ++i)
    if (i != pm.normalization && i != *first) f.phys.push_back(i);
  return f;
}

// Real (r0, r1, r2) with r0 + r1 f1 + r2 fk = 0, unit sup-norm.
inline std::array<double, 3> fit_real_hyperplane(Complex f1, Complex fk) {
  std::array<double, 3> r = {f1.real() * fk.imag() - fk.real() * f1.imag(),
                             -fk.imag(), f1.imag()};
  double scale = 1 + std::abs(f1) + std::abs(fk);
  double sup = std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
  if (sup <= 1e-14 * scale * scale) {
    // both values real: the system has rank one
    r = {-f1.real(), 1.0, 0.0};
    sup = std::max(1.0, std::abs(r[0]));
  }
  for (auto& x : r) x /= sup;
  return r;
}

using HyperplaneVector = std::vector<double>;

// Fit for frame position k >= 2, returned in pm coordinate order.
inline HyperplaneVector fit_real_hyperplane(PeriodMap const& pm, std::size_t k,
                                            Complex z) {
  if (pm.coords.size() < 3)
    throw Error("degenerate family: perpendicular rank below 3");
  Frame fr = make_frame(pm);
  if (k < 2 || k >= fr.phys.size()) throw DomainError("invalid index");
  auto vals = pm.values(z);
  auto t = fit_real_hyperplane(vals[fr.phys[1]], vals[fr.phys[k]]);
  HyperplaneVector r(pm.coords.size(), 0.0);
  r[fr.phys[0]] = t[0];
  r[fr.phys[1]] = t[1];
  r[fr.phys[k]] = t[2];
  return r;
}

inline double to_double_coeff(double x) { return x; }
inline double to_double_coeff(Rational const& x) { return to_double(x); }

template <class T>
Complex hyperplane_value(std::vector<T> const& r,
                         std::vector<Complex> const& vals) {
  Complex s = 0;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] != T(0)) s += to_double_coeff(r[i]) * vals[i];
  return s;
}


struct RoucheMargin {
  double K = 0;      // min |f_r| on the circle
  double M = 0;      // max |f_i| on the circle, f_0 = 1 included
  double delta = 0;  // K / (M (n + 1))
};

inline RoucheMargin rouche_margin(PeriodMap const& pm, HyperplaneVector const& r,
                                  Complex center, double radius,
                                  int samples = 256) {
  if (r.size() != pm.coords.size()) throw InputError("hyperplane length mismatch");
  int n = std::max(samples, 64) * 4;
  double kmin = INFINITY, kmax = 0, m = 0, l1 = 0;
  for (double x : r) l1 += std::abs(x);
  if (l1 == 0) throw InputError("zero hyperplane vector");
  for (int s = 0; s < n; ++s) {
    Complex z = center + std::polar(radius, 2 * std::numbers::pi * s / n);
    auto vals = pm.values(z);
    for (auto const& v : vals) m = std::max(m, std::abs(v));
    double a = std::abs(hyperplane_value(r, vals));
    kmin = std::min(kmin, a);
    kmax = std::max(kmax, a);
  }
  if (kmax <= 1e-12 * m * l1)
    throw Error("identically vanishing hyperplane: the whole image lies in it");
  if (kmin <= 1e-10 * m * l1)
    throw Error("contour touches zero set: shrink or move circle");
  return {kmin, m, kmin / (m * double(pm.coords.size()))};
}

// Heuristic size of the omitted tail on a circle of radius rho, plus
// rounding noise of the evaluation.
inline double truncation_error_bound(PeriodMap const& pm, double rho) {
  double tail = 0, noise = 0;
  for (std::size_t i = 0; i < pm.coords.size(); ++i) {
    auto s = trimmed(pm.coords[i]);
    double acc = 0, p = 1;
    for (auto const& c : s) {
      acc += std::abs(c) * p;
      p *= rho;
    }
    noise += 1e-15 * acc;
    if (s.size() >= 2)
      tail += std::abs(s.back()) * std::pow(rho, double(s.size() - 1)) *
              (rho / pm.radius);
  }
  return tail + noise;
}

// Best rational approximation of x within eps by continued fractions.
inline Rational continued_fraction_approx(double x, double eps) {
  if (!std::isfinite(x)) throw DomainError("non-finite value");
  Integer h0 = 1, h1 = 0, k0 = 0, k1 = 1;  // convergents h/k
  double y = x;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(y);
    Integer ai = Integer(static_cast<long long>(a));
    Integer h = ai * h0 + h1, k = ai * k0 + k1;
    h1 = h0;
    h0 = h;
    k1 = k0;
    k0 = k;
    Rational c(h, k);
    if (std::abs(to_double(c) - x) < eps) return c;
    double frac = y - a;
    if (frac < 1e-300) return c;
    y = 1 / frac;
  }
  return Rational(h0, k0);
}

struct JumpOptions {
  double tol = 1e-9;
  int samples = 256;
  int max_shrinks = 20;
  double shrink = 0.7;
  double safety = 0.9;  // applied to delta where it bounds a perturbation
  double contour = 0.9;  // first contour radius as a fraction of max_radius
};

struct JumpCertificate {
  Complex Q;
  IntVector v;                 // ambient coordinates, primitive
  double residual = 0;         // |(v.p(Q))|
  int winding = 0;             // zeros of f_q inside the circle
  Complex circle_center;
  double circle_radius = 0;
  double margin = 0;           // delta for the pivot-normalized fit
  std::vector<Rational> q;     // pm coordinate order, before clearing
  std::size_t fit_index = 0;   // pm index of f_k
  HyperplaneVector fit;        // r_k, unit sup-norm
  double K = 0, M = 0;
  Integer denominator = 1;     // common denominator of q
  std::string perturbation;    // "denominator search" or "continued fraction"
};

namespace detail {

struct Candidate {
  std::size_t k = 0;
  HyperplaneVector r;
  double rho = 0;
  RoucheMargin margin;
  int winding = 0;
};

inline std::vector<Rational> round_to_denominator(HyperplaneVector const& r,
                                                  long d) {
  std::vector<Rational> q(r.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    q[i] = Rational(Integer(static_cast<long long>(std::llround(r[i] * d))), d);
  return q;
}

inline bool all_zero(std::vector<Rational> const& q) {
  for (auto const& x : q)
    if (x != 0) return false;
  return true;
}

}  // namespace detail

// A point Q near center and an integral class v outside the fixed part with
// (v.p(Q)) = 0, certified by the argument principle.
inline JumpCertificate find_jump(PeriodFamily const& fam, Complex center,
                                 double max_radius, JumpOptions const& opt = {}) {
  PeriodMap const& pm = fam.pm;
  pm.check();
  std::size_t n1 = pm.coords.size();
  if (n1 < 3) throw Error("degenerate family: perpendicular rank below 3");
  if (pm.is_constant_map()) throw Error("map constant");
  if (!(max_radius > 0)) throw DomainError("radius must be positive");
  if (std::abs(center - pm.center) + max_radius >= pm.radius)
    throw DomainError("disk outside the period map domain");
  Frame fr = make_frame(pm);
  auto cvals = pm.values(center);

  WindingOptions wopt;
  wopt.samples = opt.samples;

  std::vector<detail::Candidate> cands;
  bool contour_trouble = false;
  for (std::size_t k = 2; k < n1; ++k) {
    auto t = fit_real_hyperplane(cvals[fr.phys[1]], cvals[fr.phys[k]]);
    HyperplaneVector r(n1, 0.0);
    r[fr.phys[0]] = t[0];
    r[fr.phys[1]] = t[1];
    r[fr.phys[k]] = t[2];
    double rho = opt.contour * max_radius;
    bool rejected = false;
    for (int s = 0; s <= opt.max_shrinks && !rejected; ++s, rho *= opt.shrink) {
      RoucheMargin mg;
      try {
        mg = rouche_margin(pm, r, center, rho, opt.samples);
      } catch (Error const& e) {
        if (std::string(e.what()).rfind("identically", 0) == 0) rejected = true;
        continue;
      }
      if (mg.K <= 10 * truncation_error_bound(pm, rho)) continue;
      auto fr_fn = [&](Complex z) { return hyperplane_value(r, pm.values(z)); };
      int w;
      try {
        w = winding_count(fr_fn, circle_contour(center, rho), wopt);
      } catch (Error const&) {
        continue;
      }
      if (w >= 1) cands.push_back({fr.phys[k], r, rho, mg, w});
      else rejected = true;
      break;
    }
    if (!rejected && (cands.empty() || cands.back().k != fr.phys[k]))
      contour_trouble = true;
  }
  if (cands.empty()) {
    if (contour_trouble) throw Error("bad contour geometry");
    throw Error("map constant along all tested hyperplanes");
  }
  // Largest margin first; ties keep the smaller k.
  detail::Candidate best = cands.front();
  for (auto const& c : cands)
    if (c.margin.delta > best.margin.delta * (1 + 1e-9)) best = c;

  // Pivot on the f1 coefficient when it is nonzero.
  HyperplaneVector rp = best.r;
  {
    std::size_t piv = fr.phys[1];
    if (std::abs(rp[piv]) < 1e-12) {
      piv = 0;
      for (std::size_t i = 1; i < n1; ++i)
        if (std::abs(rp[i]) > std::abs(rp[piv])) piv = i;
    }
    double p = rp[piv];
    for (auto& x : rp) x /= p;
  }
  RoucheMargin mp = rouche_margin(pm, rp, center, best.rho, opt.samples);
  double budget = opt.safety * mp.delta;

  auto fq_of = [&](std::vector<Rational> const& q) {
    std::vector<double> qd(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) qd[i] = to_double(q[i]);
    return [&pm, qd](Complex z) { return hyperplane_value(qd, pm.values(z)); };
  };
  auto certified = [&](std::vector<Rational> const& q) {
    try {
      return winding_count(fq_of(q), circle_contour(center, best.rho), wopt) ==
             best.winding;
    } catch (Error const&) {
      return false;
    }
  };

  std::vector<Rational> q;
  Integer den = 1;
  std::string method = "denominator search";
  long dmax = long(std::ceil(1.0 / (2.0 * budget))) + 1;
  for (long d = 1; d <= dmax; ++d) {
    auto cand = detail::round_to_denominator(rp, d);
    if (detail::all_zero(cand)) continue;
    if (certified(cand)) {
      q = cand;
      break;
    }
  }
  if (q.empty()) {
    method = "continued fraction";
    double eps = budget / double(n1);
    for (double x : rp) q.push_back(continued_fraction_approx(x, eps));
    if (!certified(q)) throw Error("rational perturbation failed to certify");
  }
  for (auto const& x : q) den = lcm(den, denominator(x));

  // Integral class: y = G_perp^-1 q, v = sum y_i b_i, made primitive.
  IntVector qi = primitive_integer_vector(q);
  auto gi = inverse(pm.lattice.gram());
  if (!gi) throw Error("degenerate lattice");
  RatVector y = (*gi) * to_rational(qi);
  RatVector va(fam.ambient.rank(), 0);
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < va.size(); ++j)
      va[j] += y[i] * Rational(fam.perp_basis[i][j]);
  IntVector v = primitive_integer_vector(va);
  if (contains(saturate(fam.ambient, fam.fixed).lattice, v))
    throw Error("class lies in the fixed sublattice");

  MatrixD ga = to_double(fam.ambient.gram());
  std::vector<Complex> vd(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) vd[j] = to_double(v[j]);
  auto residual = [&](Complex z) {
    return std::abs(bilinear(ga, vd, fam.ambient_point(pm.values(z))));
  };

  // Quadtree of rectangles; children tile the parent so counts add up.
  auto fq = fq_of(q);
  double leaf = std::max(1e-3 * opt.tol, 1e-13 * (1 + std::abs(center)));
  double floor_size = 1e-14 * (1 + std::abs(center));
  double const splits[] = {0.5, 0.47, 0.53, 0.44, 0.56, 0.41, 0.59};
  auto rect_winding = [&](Rect const& r) {
    return winding_count(fq, rect_contour(r), wopt);
  };
  std::optional<Complex> found;
  std::function<bool(Rect const&, int)> search = [&](Rect const& r, int w) {
    double side = std::max(r.width(), r.height());
    Complex mid = r.mid();
    if (side < leaf && std::abs(mid - center) < best.rho &&
        residual(mid) < opt.tol) {
      found = mid;
      return true;
    }
    if (side < floor_size) return false;
    for (double sx : splits) {
      double xm = r.x0 + sx * r.width(), ym = r.y0 + sx * r.height();
      Rect kids[4] = {{r.x0, xm, r.y0, ym}, {xm, r.x1, r.y0, ym},
                      {r.x0, xm, ym, r.y1}, {xm, r.x1, ym, r.y1}};
      int ws[4];
      try {
        int sum = 0;
        for (int i = 0; i < 4; ++i) sum += ws[i] = rect_winding(kids[i]);
        if (sum != w) continue;
      } catch (Error const&) {
        continue;
      }
      int idx[4] = {0, 1, 2, 3};
      std::sort(idx, idx + 4, [&](int a, int b) {
        return std::abs(kids[a].mid() - center) < std::abs(kids[b].mid() - center);
      });
      for (int i : idx)
        if (ws[i] > 0 && std::abs(kids[i].mid() - center) <
                             best.rho + kids[i].width() + kids[i].height())
          if (search(kids[i], ws[i])) return true;
      return false;
    }
    return false;
  };
  Rect root{center.real() - best.rho, center.real() + best.rho,
            center.imag() - best.rho, center.imag() + best.rho};
  int wroot;
  try {
    wroot = rect_winding(root);
  } catch (Error const&) {
    root = {root.x0 * 1.0, root.x1 + 1e-3 * best.rho, root.y0,
            root.y1 + 1e-3 * best.rho};
    wroot = rect_winding(root);
  }
  if (wroot < 1 || !search(root, wroot))
    throw Error("root refinement failed inside the certification circle");

  JumpCertificate c;
  c.Q = *found;
  c.v = v;
  c.residual = residual(c.Q);
  c.winding = best.winding;
  c.circle_center = center;
  c.circle_radius = best.rho;
  c.margin = mp.delta;
  c.q = q;
  c.fit_index = best.k;
  c.fit = best.r;
  c.K = mp.K;
  c.M = mp.M;
  c.denominator = den;
  c.perturbation = method;
  return c;
}

struct ScanResult {
  Complex center;
  std::optional<JumpCertificate> certificate;
  std::string error;
};

inline std::vector<ScanResult> density_scan(PeriodFamily const& fam,
                                            std::vector<Complex> const& centers,
                                            double radius,
                                            JumpOptions const& opt = {},
                                            unsigned threads = 0) {
  auto one = [&](Complex c) {
    ScanResult r{c, std::nullopt, {}};
    try {
      r.certificate = find_jump(fam, c, radius, opt);
    } catch (std::exception const& e) {
      r.error = e.what();
    }
    return r;
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<ScanResult> out;
  if (threads <= 1) {
    for (auto c : centers) out.push_back(one(c));
    return out;
  }
  std::vector<std::future<ScanResult>> fs;
  for (auto c : centers) fs.push_back(std::async(std::launch::async, one, c));
  for (auto& f : fs) out.push_back(f.get());
  return out;
}

}  // namespace pj
