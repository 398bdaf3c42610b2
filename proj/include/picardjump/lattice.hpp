#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "picardjump/errors.hpp"
#include "picardjump/matrix.hpp"
#include "picardjump/normal_form.hpp"
#include "picardjump/rational.hpp"

namespace pj {

class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(RatMatrix gram, std::string label = {})
      : gram_(std::move(gram)), label_(std::move(label)) {
    if (gram_.rows() == 0 || !gram_.is_symmetric())
      throw InputError("gram matrix must be square, nonempty and symmetric");
  }
  explicit Lattice(IntMatrix const& gram, std::string label = {})
      : Lattice(gram.cast<Rational>(), std::move(label)) {}

  std::size_t rank() const { return gram_.rows(); }
  RatMatrix const& gram() const { return gram_; }
  std::string const& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }

  bool is_integral() const {
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < rank(); ++j)
        if (!pj::is_integral(gram_(i, j))) return false;
    return true;
  }
  IntMatrix integer_gram() const {
    if (!is_integral()) throw Error("gram matrix is not integral");
    IntMatrix g(rank(), rank());
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < rank(); ++j) g(i, j) = numerator(gram_(i, j));
    return g;
  }
  Rational determinant() const { return pj::determinant(gram_); }

  Rational pairing(RatVector const& x, RatVector const& y) const {
    Rational s = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < rank(); ++j) s += x[i] * gram_(i, j) * y[j];
    }
    return s;
  }

  friend bool operator==(Lattice const& a, Lattice const& b) {
    return a.gram_ == b.gram_;
  }

 private:
  RatMatrix gram_;
  std::string label_;
};

inline RatVector to_rational(IntVector const& v) {
  return RatVector(v.begin(), v.end());
}

// Named lattices.

inline Lattice hyperbolic_plane(long scale = 1) {
  IntMatrix g{{0, scale}, {scale, 0}};
  return Lattice(g, scale == 1 ? "U" : "U(" + std::to_string(scale) + ")");
}

inline Lattice rank_one(long k) {
  IntMatrix g{{k}};
  return Lattice(g, "<" + std::to_string(k) + ">");
}

// scale * (Cartan matrix of E8); scale -1 gives E8(-1).
inline Lattice e8(long scale = -1) {
  // Bourbaki labelling: edges 1-3, 3-4, 4-5, 5-6, 6-7, 7-8, 2-4.
  IntMatrix g(8, 8);
  for (std::size_t i = 0; i < 8; ++i) g(i, i) = 2 * scale;
  std::pair<int, int> edges[] = {{0, 2}, {2, 3}, {3, 4}, {4, 5},
                                 {5, 6}, {6, 7}, {1, 3}};
  for (auto [a, b] : edges) g(a, b) = g(b, a) = -scale;
  return Lattice(g, scale == 1 ? "E8" : "E8(" + std::to_string(scale) + ")");
}

inline Lattice orthogonal_sum(Lattice const& a, Lattice const& b) {
  std::string label;
  if (!a.label().empty() && !b.label().empty())
    label = a.label() + "+" + b.label();
  return Lattice(direct_sum(a.gram(), b.gram()), label);
}

inline Lattice orthogonal_sum(std::vector<Lattice> const& parts) {
  if (parts.empty()) throw InputError("empty orthogonal sum");
  Lattice r = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) r = orthogonal_sum(r, parts[i]);
  return r;
}

// U^3 + E8(-1)^2, signature (3, 19).
inline Lattice k3_lattice() {
  Lattice u = hyperbolic_plane(), e = e8(-1);
  Lattice r = orthogonal_sum({u, u, u, e, e});
  r.set_label("K3");
  return r;
}

struct Signature {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t nullity = 0;
  friend bool operator==(Signature const&, Signature const&) = default;
};

// Exact congruence diagonalization of a symmetric rational matrix.
inline Signature signature(RatMatrix a) {
  std::size_t n = a.rows();
  Signature s;
  auto swap_sym = [&](std::size_t i, std::size_t j) {
    a.swap_rows(i, j);
    a.swap_cols(i, j);
  };
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, p) == 0) ++p;
    if (p == n) {
      // zero diagonal: a nonzero off-diagonal entry (i, j) makes the
      // diagonal at i nonzero after x_i <- x_i + x_j
      std::size_t bi = n, bj = n;
      for (std::size_t i = k; i < n && bi == n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (a(i, j) != 0) {
            bi = i;
            bj = j;
            break;
          }
      if (bi == n) {
        s.nullity += n - k;
        break;
      }
      for (std::size_t c = 0; c < n; ++c) a(bi, c) += a(bj, c);
      for (std::size_t r = 0; r < n; ++r) a(r, bi) += a(r, bj);
      p = bi;
    }
    swap_sym(k, p);
    Rational piv = a(k, k);
    (piv > 0 ? s.positive : s.negative) += 1;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational f = a(i, k) / piv;
      for (std::size_t c = k; c < n; ++c) a(i, c) -= f * a(k, c);
      for (std::size_t r = k; r < n; ++r) a(r, i) -= f * a(r, k);
    }
  }
  return s;
}

inline Signature signature(Lattice const& l) { return signature(l.gram()); }

// Integer span of basis vectors given in ambient coordinates.
class Sublattice {
 public:
  Sublattice() = default;
  Sublattice(Lattice ambient, std::vector<IntVector> basis)
      : ambient_(std::move(ambient)), basis_(std::move(basis)) {
    for (auto const& b : basis_)
      if (b.size() != ambient_.rank())
        throw InputError("sublattice vector has wrong length");
    if (!basis_.empty() && matrix_rank(rows().cast<Rational>()) != basis_.size())
      throw InputError("sublattice basis is not linearly independent");
  }
  static Sublattice zero(Lattice ambient) { return {std::move(ambient), {}}; }
  static Sublattice whole(Lattice ambient) {
    std::size_t n = ambient.rank();
    std::vector<IntVector> b(n, IntVector(n, 0));
    for (std::size_t i = 0; i < n; ++i) b[i][i] = 1;
    return {std::move(ambient), std::move(b)};
  }

  Lattice const& ambient() const { return ambient_; }
  std::vector<IntVector> const& basis() const { return basis_; }
  std::size_t rank() const { return basis_.size(); }

  // Basis vectors as rows.
  IntMatrix rows() const {
    return IntMatrix::from_rows(basis_, ambient_.rank());
  }

  // Gram matrix of the restricted form.
  RatMatrix gram() const {
    RatMatrix b = rows().cast<Rational>();
    return b * ambient_.gram() * b.transpose();
  }

 private:
  Lattice ambient_;
  std::vector<IntVector> basis_;
};

namespace detail {
inline std::vector<IntVector> matrix_rows(IntMatrix const& m) {
  std::vector<IntVector> r;
  for (std::size_t i = 0; i < m.rows(); ++i) r.push_back(m.row(i));
  return r;
}
}  // namespace detail

// { x in L : (s.x) = 0 for all s in S }, primitive in L.
inline Sublattice orthogonal_complement(Lattice const& l, Sublattice const& s) {
  if (s.rank() == 0) return Sublattice::whole(l);
  RatMatrix a = s.rows().cast<Rational>() * l.gram();
  IntMatrix k = integer_kernel(clear_row_denominators(a));
  return {l, detail::matrix_rows(k)};
}

// Integer coordinates of v in the basis of s, if v lies in s.
inline std::optional<IntVector> coordinates(Sublattice const& s,
                                            IntVector const& v) {
  if (v.size() != s.ambient().rank()) throw InputError("vector length mismatch");
  if (s.rank() == 0) {
    for (auto const& x : v)
      if (x != 0) return std::nullopt;
    return IntVector{};
  }
  RatMatrix b = s.rows().transpose().cast<Rational>();
  auto x = solve(b, to_rational(v));
  if (!x) return std::nullopt;
  IntVector c;
  for (auto const& q : *x) {
    if (!is_integral(q)) return std::nullopt;
    c.push_back(numerator(q));
  }
  return c;
}

inline bool contains(Sublattice const& s, IntVector const& v) {
  return coordinates(s, v).has_value();
}

// v lies in the rational span of s.
inline bool in_span(Sublattice const& s, IntVector const& v) {
  if (s.rank() == 0) {
    for (auto const& x : v)
      if (x != 0) return false;
    return true;
  }
  RatMatrix b = s.rows().transpose().cast<Rational>();
  return solve(b, to_rational(v)).has_value();
}

struct Saturation {
  Sublattice lattice;
  Integer index;
};

// Primitive closure (Q S) cap L and the index [P : S].
inline Saturation saturate(Lattice const& l, Sublattice const& s) {
  std::size_t n = l.rank();
  if (s.rank() == 0) return {Sublattice::zero(l), 1};
  IntMatrix k = integer_kernel(s.rows());  // Euclidean annihilator
  IntMatrix p = k.rows() == 0 ? IntMatrix::identity(n) : integer_kernel(k);
  Sublattice sat(l, detail::matrix_rows(p));
  IntMatrix c(s.rank(), s.rank());
  for (std::size_t i = 0; i < s.rank(); ++i) {
    auto x = coordinates(sat, s.basis()[i]);
    if (!x) throw Error("saturation does not contain the sublattice");
    for (std::size_t j = 0; j < s.rank(); ++j) c(i, j) = (*x)[j];
  }
  return {sat, abs(determinant(c))};
}

struct DiscriminantGroup {
  std::vector<Integer> invariant_factors;  // d_1 | d_2 | ..., all > 1
  Integer order = 1;
};

struct DualData {
  Lattice dual;  // gram in the dual basis
  DiscriminantGroup group;
};

inline DualData dual_and_discriminant(Lattice const& m) {
  IntMatrix g = m.integer_gram();
  auto inv = inverse(m.gram());
  if (!inv) throw Error("degenerate lattice");
  SmithForm f = smith_normal_form(g);
  DiscriminantGroup d;
  for (auto const& x : f.diagonal)
    if (x != 1) {
      d.invariant_factors.push_back(x);
      d.order *= x;
    }
  std::string label = m.label().empty() ? "" : m.label() + "*";
  return {Lattice(*inv, label), d};
}

struct Overlattice {
  Lattice lattice;
  RatMatrix basis;  // rows, in the coordinates of M
  Integer index;    // [L : M]
};

inline constexpr std::uint64_t kMaxDiscriminantOrder = 1'000'000;

// All integer-valued L with M subset L subset M*, for positive definite M.
inline std::vector<Overlattice> intermediate_overlattices(Lattice const& m) {
  std::size_t n = m.rank();
  Signature sig = signature(m);
  if (sig.nullity > 0) throw Error("degenerate lattice");
  if (sig.positive != n) throw Error("lattice is not positive definite");
  IntMatrix g = m.integer_gram();
  SmithForm f = smith_normal_form(g);

  // Generators of M*/M: column i of v divided by d_i.
  std::vector<RatVector> gens;
  std::vector<std::uint64_t> orders;
  Integer order = 1;
  for (std::size_t i = 0; i < n; ++i) {
    Integer d = f.diagonal[i];
    if (d == 1) continue;
    order *= d;
    if (order > kMaxDiscriminantOrder)
      throw Error("discriminant group larger than enumeration cap 10^6");
    RatVector x(n);
    for (std::size_t r = 0; r < n; ++r) x[r] = Rational(f.v(r, i), d);
    gens.push_back(x);
    orders.push_back(d.convert_to<std::uint64_t>());
  }
  std::size_t k = gens.size();
  std::uint64_t total = order.convert_to<std::uint64_t>();

  // Mixed-radix codes for group elements.
  auto decode = [&](std::uint64_t c) {
    std::vector<std::uint64_t> a(k);
    for (std::size_t i = 0; i < k; ++i) {
      a[i] = c % orders[i];
      c /= orders[i];
    }
    return a;
  };
  auto encode = [&](std::vector<std::uint64_t> const& a) {
    std::uint64_t c = 0;
    for (std::size_t i = k; i-- > 0;) c = c * orders[i] + a[i];
    return c;
  };
  auto add = [&](std::uint64_t x, std::uint64_t y) {
    auto a = decode(x), b = decode(y);
    for (std::size_t i = 0; i < k; ++i) a[i] = (a[i] + b[i]) % orders[i];
    return encode(a);
  };
  RatMatrix gg(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) gg(i, j) = m.pairing(gens[i], gens[j]);
  auto form = [&](std::uint64_t x, std::uint64_t y) {
    auto a = decode(x), b = decode(y);
    Rational s = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (a[i] && b[j]) s += Rational(Integer(a[i]) * b[j]) * gg(i, j);
    return s;
  };

  std::vector<std::uint64_t> isotropic;
  for (std::uint64_t c = 1; c < total; ++c)
    if (is_integral(form(c, c))) isotropic.push_back(c);

  using Group = std::vector<std::uint64_t>;  // sorted element codes
  auto closure = [&](Group const& h, std::uint64_t x) {
    std::set<std::uint64_t> s(h.begin(), h.end());
    std::vector<std::uint64_t> frontier(h.begin(), h.end());
    std::vector<std::uint64_t> gensx(h.begin(), h.end());
    gensx.push_back(x);
    while (!frontier.empty()) {
      std::vector<std::uint64_t> next;
      for (auto e : frontier)
        for (auto gx : gensx) {
          auto y = add(e, gx);
          if (s.insert(y).second) next.push_back(y);
        }
      frontier = std::move(next);
    }
    return Group(s.begin(), s.end());
  };

  std::set<Group> seen{{0}};
  std::vector<Group> queue{{0}};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    Group h = queue[qi];
    for (auto x : isotropic) {
      if (std::binary_search(h.begin(), h.end(), x)) continue;
      bool ok = true;
      for (auto y : h)
        if (!is_integral(form(x, y))) {
          ok = false;
          break;
        }
      if (!ok) continue;
      Group h2 = closure(h, x);
      if (seen.insert(h2).second) queue.push_back(std::move(h2));
    }
  }

  std::vector<Overlattice> out;
  for (auto const& h : queue) {
    std::vector<RatVector> rows;
    for (std::size_t i = 0; i < n; ++i) {
      RatVector e(n, 0);
      e[i] = 1;
      rows.push_back(e);
    }
    for (auto c : h) {
      if (c == 0) continue;
      auto a = decode(c);
      RatVector x(n, 0);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t r = 0; r < n; ++r) x[r] += Rational(Integer(a[i])) * gens[i][r];
      rows.push_back(x);
    }
    Integer den = 1;
    for (auto const& r : rows)
      for (auto const& x : r) den = lcm(den, denominator(x));
    IntMatrix im(rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < n; ++j) im(i, j) = numerator(rows[i][j] * den);
    IntMatrix hb = row_lattice_basis(im);
    RatMatrix basis(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) basis(i, j) = Rational(hb(i, j), den);
    RatMatrix gl = basis * m.gram() * basis.transpose();
    Lattice lat(gl);
    if (!lat.is_integral()) throw Error("overlattice lift is not integral");
    if (h.size() == 1) lat.set_label(m.label());
    else if (!m.label().empty())
      lat.set_label(m.label() + " index " + std::to_string(h.size()));
    out.push_back({lat, basis, Integer(h.size())});
  }
  std::stable_sort(out.begin(), out.end(), [](auto const& a, auto const& b) {
    if (a.index != b.index) return a.index < b.index;
    for (std::size_t i = 0; i < a.basis.rows(); ++i)
      for (std::size_t j = 0; j < a.basis.cols(); ++j)
        if (a.basis(i, j) != b.basis(i, j)) return a.basis(i, j) < b.basis(i, j);
    return false;
  });
  return out;
}

inline long euler_totient(long n) {
  long r = n;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      r -= r / p;
    }
  if (n > 1) r -= r / n;
  return r;
}

struct PicardBound {
  long max_rho = 0;
  std::vector<long> allowed_transcendental_ranks;
  bool clipped = false;  // b2 - phi exceeded b2 - 2
};

// Transcendental ranks are the positive multiples of phi(order) below b2;
// max_rho is clipped to b2 - 2.
inline PicardBound nonsymplectic_picard_bound(long order, long b2) {
  if (order < 2) throw DomainError("order must be at least 2");
  if (b2 < 3) throw DomainError("b2 must be at least 3");
  long phi = euler_totient(order);
  if (phi > b2 - 1) throw Error("no admissible transcendental rank");
  PicardBound r;
  for (long t = phi; t <= b2 - 1; t += phi) r.allowed_transcendental_ranks.push_back(t);
  r.max_rho = b2 - phi;
  if (r.max_rho > b2 - 2) {
    r.max_rho = b2 - 2;
    r.clipped = true;
  }
  return r;
}

}  // namespace pj
