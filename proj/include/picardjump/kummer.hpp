#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "picardjump/errors.hpp"
#include "picardjump/jump.hpp"
#include "picardjump/lattice.hpp"
#include "picardjump/period.hpp"

namespace pj {

// The block carrying the transcendental part of Km(E_z x E_phi(z)).
// Gram U(-1) + U: (x.y) = -x0 y1 - x1 y0 + x2 y3 + x3 y2.
inline Lattice kummer_block() {
  Lattice l = orthogonal_sum(hyperbolic_plane(-1), hyperbolic_plane(1));
  l.set_label("U(-1)+U");
  return l;
}

struct KummerFamilySpec {
  Series phi;          // in (z - tau); empty means phi == sigma
  Complex tau{0, 1};
  Complex sigma{0, 1};
  double radius = 0.5;

  Series phi_series() const { return phi.empty() ? Series{sigma} : phi; }
  Complex phi_at(Complex z) const { return horner(phi_series(), z - tau); }

  void check() const {
    if (!(tau.imag() > 0)) throw DomainError("tau must lie in the upper half-plane");
    if (!(phi_at(tau).imag() > 0))
      throw DomainError("phi(tau) must lie in the upper half-plane");
    if (!(radius > 0)) throw DomainError("radius must be positive");
  }
};

// Coordinates (1, z phi(z), z, phi(z)) expanded about tau.
inline PeriodMap kummer_period_map(KummerFamilySpec const& s) {
  s.check();
  Series ph = s.phi_series();
  Series z{s.tau, Complex(1)};
  return {kummer_block(), {Series{1}, series_product(z, ph), z, ph}, s.radius, 0,
          s.tau};
}

// The block alone, or the block as the first summand of
// U(-1) + U + U + E8(-1)^2 with the other 18 coordinates fixed.
inline PeriodFamily kummer_family(KummerFamilySpec const& s, bool in_k3 = false) {
  PeriodMap pm = kummer_period_map(s);
  if (!in_k3) return trivial_family(std::move(pm));
  Lattice amb = orthogonal_sum(
      {kummer_block(), hyperbolic_plane(), e8(-1), e8(-1)});
  amb.set_label("K3");
  std::size_t n = amb.rank();
  std::vector<IntVector> fixed, perp;
  for (std::size_t i = 0; i < n; ++i) {
    IntVector e(n, 0);
    e[i] = 1;
    (i < 4 ? perp : fixed).push_back(e);
  }
  return {std::move(pm), amb, Sublattice(amb, fixed), perp};
}

// (A, B, C, D) with A z phi + B + C z + D phi = (v.w) for block class v.
inline std::array<Integer, 4> kummer_relation(IntVector const& v) {
  if (v.size() < 4) throw InputError("block class needs 4 coordinates");
  return {-v[0], -v[1], v[3], v[2]};
}

struct KummerRank {
  int rho = 18;
  std::size_t block_rank = 0;
  bool exact = false;  // 20 is the maximum; lower values are lower bounds
  std::vector<std::array<Integer, 4>> relations;
};

inline KummerRank kummer_rank(Complex z, Complex phi_z, long coeff_bound,
                              double tol) {
  if (!(z.imag() > 0) || !(phi_z.imag() > 0))
    throw DomainError("arguments must lie in the upper half-plane");
  PeriodPoint pt{kummer_block(), {Complex(1), z * phi_z, z, phi_z}};
  NsReport ns = ns_bounded(pt, coeff_bound, tol, 1);
  KummerRank r;
  r.block_rank = ns.rank;
  r.rho = static_cast<int>(std::min<std::size_t>(20, 18 + ns.rank));
  r.exact = r.rho == 20;
  if (ns.rank == 0) return r;
  // primitive basis of the saturated span
  std::vector<IntVector> found;
  for (auto const& v : ns.vectors) found.emplace_back(v.begin(), v.end());
  IntMatrix sat = integer_kernel(integer_kernel(IntMatrix::from_rows(found, 4)));
  for (std::size_t i = 0; i < sat.rows(); ++i) r.relations.push_back(kummer_relation(sat.row(i)));
  return r;
}

struct IsogenyWitness {
  std::array<Integer, 4> matrix;  // a, b, c, d
  Complex congruent_value;        // (a tau + b) / (c tau + d)

  Integer det() const { return matrix[0] * matrix[3] - matrix[1] * matrix[2]; }
};

inline Complex mobius(std::array<Integer, 4> const& m, Complex t) {
  return (to_double(m[0]) * t + to_double(m[1])) /
         (to_double(m[2]) * t + to_double(m[3]));
}

inline std::array<Integer, 4> normalize_sign(std::array<Integer, 4> m) {
  if (m[3] < 0 || (m[3] == 0 && m[2] < 0))
    for (auto& x : m) x = -x;
  return m;
}

// Smallest [[a,b],[c,d]] by (det, sup-norm, |c|, |d|, entries) with
// |entries| <= height_bound, det > 0 and |M.tau - tau'| < tol.
inline std::optional<IsogenyWitness> isogeny_witness(Complex tau, Complex tau_prime,
                                                     long height_bound, double tol) {
  if (!(tau.imag() > 0) || !(tau_prime.imag() > 0))
    throw DomainError("arguments must lie in the upper half-plane");
  using Key = std::tuple<long, long, long, long, long, long, long, long>;
  std::optional<Key> best;
  std::optional<IsogenyWitness> out;
  for (long c = -height_bound; c <= height_bound; ++c)
    for (long d = 0; d <= height_bound; ++d) {
      if (d == 0 && c <= 0) continue;
      // a tau + b = tau' (c tau + d)
      Complex w = tau_prime * (double(c) * tau + double(d));
      double ar = w.imag() / tau.imag();
      long a = std::lround(ar);
      long b = std::lround(w.real() - double(a) * tau.real());
      if (std::abs(a) > height_bound || std::abs(b) > height_bound) continue;
      long det = a * d - b * c;
      if (det <= 0) continue;
      std::array<Integer, 4> m = {a, b, c, d};
      Complex val = mobius(m, tau);
      if (!(std::abs(val - tau_prime) < tol)) continue;
      long sup = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
      Key k{det, sup, std::abs(c), std::abs(d), a, b, c, d};
      if (!best || k < *best) {
        best = k;
        out = IsogenyWitness{m, val};
      }
    }
  return out;
}

// phi(Q) = (-C Q - B) / (A Q + D) for the relation of v.
inline IsogenyWitness witness_from_class(IntVector const& block_v, Complex Q) {
  auto [A, B, C, D] = kummer_relation(block_v);
  auto m = normalize_sign({-C, -B, A, D});
  IsogenyWitness w{m, mobius(m, Q)};
  if (w.det() <= 0) throw Error("relation does not give a positive isogeny");
  return w;
}

struct IsogenousStep {
  Complex tau_k;
  JumpCertificate certificate;
  IsogenyWitness witness;
  double action_error = 0;  // |M.tau_k - phi(tau_k)|
};

inline std::vector<IsogenousStep> isogenous_sequence(KummerFamilySpec const& s,
                                                       int count, double shrink,
                                                       JumpOptions const& opt = {}) {
  s.check();
  if (count < 0) throw InputError("count must be non-negative");
  if (!(shrink > 0 && shrink < 1)) throw DomainError("shrink must lie in (0, 1)");
  PeriodFamily fam = kummer_family(s);
  if (fam.pm.is_constant_map()) throw Error("map constant");
  std::vector<IsogenousStep> out;
  double prev = INFINITY;
  double r = s.radius;
  for (int k = 0; k < count; ++k) {
    r *= shrink;
    Complex c = s.tau + Complex(0.75 * r, 0);
    auto cert = find_jump(fam, c, 0.25 * r, opt);
    double dist = std::abs(cert.Q - s.tau);
    if (!(dist < prev) || dist == 0)
      throw Error("sequence distances not strictly decreasing");
    prev = dist;
    IsogenyWitness w = witness_from_class(cert.v, cert.Q);
    double err = std::abs(w.congruent_value - s.phi_at(cert.Q));
    out.push_back({cert.Q, cert, w, err});
  }
  return out;
}

}  // namespace pj
