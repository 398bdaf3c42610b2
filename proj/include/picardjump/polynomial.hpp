#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "picardjump/errors.hpp"
#include "picardjump/rational.hpp"

namespace pj {

// Dense univariate polynomial, coefficients low to high, no trailing zeros.
template <class R>
class Poly {
 public:
  Poly() = default;
  Poly(R c) {  // NOLINT: constants convert implicitly
    if (c != R(0)) c_.push_back(std::move(c));
  }
  explicit Poly(std::vector<R> c) : c_(std::move(c)) { trim(); }
  static Poly monomial(R c, std::size_t k) {
    std::vector<R> v(k + 1, R(0));
    v[k] = std::move(c);
    return Poly(std::move(v));
  }
  static Poly x() { return monomial(R(1), 1); }

  bool is_zero() const { return c_.empty(); }
  long degree() const { return static_cast<long>(c_.size()) - 1; }  // -1 for 0
  R const& lead() const {
    if (c_.empty()) throw Error("leading coefficient of zero polynomial");
    return c_.back();
  }
  R coeff(std::size_t i) const { return i < c_.size() ? c_[i] : R(0); }
  std::vector<R> const& coeffs() const { return c_; }

  template <class X>
  X operator()(X const& x) const {
    X acc = X(R(0));
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + X(c_[k]);
    return acc;
  }

  Poly& operator+=(Poly const& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator-=(Poly const& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, Poly const& b) { return a += b; }
  friend Poly operator-(Poly a, Poly const& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend Poly operator*(Poly const& a, Poly const& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<R> c(a.c_.size() + b.c_.size() - 1, R(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == R(0)) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(c));
  }
  Poly& operator*=(Poly const& o) { return *this = *this * o; }
  friend bool operator==(Poly const& a, Poly const& b) { return a.c_ == b.c_; }
  friend bool operator!=(Poly const& a, Poly const& b) { return !(a == b); }

  Poly scaled(R const& k) const {
    Poly r = *this;
    for (auto& x : r.c_) x *= k;
    r.trim();
    return r;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == R(0)) c_.pop_back();
  }
  std::vector<R> c_;
};

using QPoly = Poly<Rational>;
using QtPoly = Poly<QPoly>;  // outer variable s, coefficients in Q[t]

template <class R>
Poly<R> pow(Poly<R> const& p, unsigned n) {
  Poly<R> r(R(1)), b = p;
  for (; n; n >>= 1) {
    if (n & 1) r *= b;
    if (n > 1) b *= b;
  }
  return r;
}

template <class R>
Poly<R> derivative(Poly<R> const& p) {
  std::vector<R> d;
  for (std::size_t k = 1; k < p.coeffs().size(); ++k)
    d.push_back(p.coeffs()[k] * R(static_cast<long>(k)));
  return Poly<R>(std::move(d));
}

// p(q(x))
template <class R>
Poly<R> compose(Poly<R> const& p, Poly<R> const& q) {
  Poly<R> acc;
  for (std::size_t k = p.coeffs().size(); k-- > 0;) acc = acc * q + Poly<R>(p.coeffs()[k]);
  return acc;
}

// Coefficientwise map, e.g. specialization of Q[t] coefficients.
template <class R, class F>
auto map_coeffs(Poly<R> const& p, F f) {
  using S = decltype(f(p.coeffs().front()));
  std::vector<S> c;
  for (auto const& x : p.coeffs()) c.push_back(f(x));
  return Poly<S>(std::move(c));
}

// ---- over a field ----

template <class F>
std::pair<Poly<F>, Poly<F>> divmod(Poly<F> const& a, Poly<F> const& b) {
  if (b.is_zero()) throw Error("polynomial division by zero");
  std::vector<F> q(std::max<long>(0, a.degree() - b.degree() + 1), F(0));
  Poly<F> r = a;
  F inv = F(1) / b.lead();
  while (!r.is_zero() && r.degree() >= b.degree()) {
    std::size_t k = r.degree() - b.degree();
    F c = r.lead() * inv;
    q[k] = c;
    r -= Poly<F>::monomial(c, k) * b;
  }
  return {Poly<F>(std::move(q)), r};
}

template <class F>
Poly<F> monic(Poly<F> const& p) {
  return p.is_zero() ? p : p.scaled(F(1) / p.lead());
}

template <class F>
Poly<F> gcd(Poly<F> a, Poly<F> b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

template <class F>
Poly<F> exact_quotient(Poly<F> const& a, Poly<F> const& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw Error("inexact polynomial division");
  return q;
}

template <class F>
Poly<F> squarefree_part(Poly<F> const& p) {
  if (p.degree() <= 0) return p.is_zero() ? p : Poly<F>(F(1));
  return monic(exact_quotient(p, gcd(p, derivative(p))));
}

// Largest k with p^k | f; f != 0, deg p >= 1.
template <class F>
long valuation(Poly<F> f, Poly<F> const& p) {
  if (f.is_zero()) throw Error("valuation of zero polynomial");
  long k = 0;
  for (;;) {
    auto [q, r] = divmod(f, p);
    if (!r.is_zero()) return k;
    f = std::move(q);
    ++k;
  }
}

// ---- Q[t] as coefficient ring of Q[t][s] ----

inline QPoly content(QtPoly const& p) {
  QPoly g;
  for (auto const& c : p.coeffs()) g = gcd(g, c);
  return g;
}

inline QtPoly divide_coeffs(QtPoly const& p, QPoly const& d) {
  return map_coeffs(p, [&](QPoly const& c) { return exact_quotient(c, d); });
}

inline QtPoly primitive_part(QtPoly const& p) {
  return p.is_zero() ? p : divide_coeffs(p, content(p));
}

// lc(b)^(deg a - deg b + 1) a = q b + r
inline QtPoly pseudo_remainder(QtPoly a, QtPoly const& b) {
  if (b.is_zero()) throw Error("pseudo division by zero");
  long d = a.degree() - b.degree();
  if (d < 0) return a;
  QPoly lb = b.lead();
  long e = d + 1;
  while (!a.is_zero() && a.degree() >= b.degree()) {
    std::size_t k = a.degree() - b.degree();
    QtPoly t = QtPoly::monomial(a.lead(), k) * b;
    a = a.scaled(lb) - t;
    --e;
  }
  return a.scaled(pow(lb, static_cast<unsigned>(e)));
}

// gcd in Q(t)[s], returned primitive in Q[t][s] (content of the inputs dropped).
inline QtPoly gcd(QtPoly a, QtPoly b) {
  if (a.is_zero()) return primitive_part(b);
  if (b.is_zero()) return primitive_part(a);
  a = primitive_part(a);
  b = primitive_part(b);
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    if (b.degree() == 0) return QtPoly(QPoly(Rational(1)));
    QtPoly r = pseudo_remainder(a, b);
    a = std::move(b);
    b = primitive_part(r);
  }
  return a;
}

inline QtPoly exact_quotient(QtPoly a, QtPoly const& b) {
  if (b.is_zero()) throw Error("polynomial division by zero");
  std::vector<QPoly> q(std::max<long>(0, a.degree() - b.degree() + 1));
  while (!a.is_zero() && a.degree() >= b.degree()) {
    std::size_t k = a.degree() - b.degree();
    QPoly c = exact_quotient(a.lead(), b.lead());
    q[k] = c;
    a -= QtPoly::monomial(c, k) * b;
  }
  if (!a.is_zero()) throw Error("inexact polynomial division");
  return QtPoly(std::move(q));
}

inline QtPoly derivative_s(QtPoly const& p) { return derivative(p); }

// Squarefree part over Q(t), primitive.
inline QtPoly squarefree_part(QtPoly const& p) {
  if (p.degree() <= 0) return p.is_zero() ? p : QtPoly(QPoly(Rational(1)));
  return primitive_part(exact_quotient(primitive_part(p), gcd(p, derivative(p))));
}

// Res_s(a, b) in Q[t] by the subresultant algorithm.
inline QPoly resultant(QtPoly a, QtPoly b) {
  if (a.is_zero() || b.is_zero()) return {};
  QPoly ca = content(a), cb = content(b);
  a = divide_coeffs(a, ca);
  b = divide_coeffs(b, cb);
  QPoly g(Rational(1)), h(Rational(1));
  Rational sign = 1;
  QPoly t = pow(ca, static_cast<unsigned>(b.degree())) *
            pow(cb, static_cast<unsigned>(a.degree()));
  if (a.degree() < b.degree()) {
    std::swap(a, b);
    if (a.degree() % 2 == 1 && b.degree() % 2 == 1) sign = -sign;
  }
  while (b.degree() > 0) {
    long delta = a.degree() - b.degree();
    if (a.degree() % 2 == 1 && b.degree() % 2 == 1) sign = -sign;
    QtPoly r = pseudo_remainder(a, b);
    a = std::move(b);
    b = divide_coeffs(r, g * pow(h, static_cast<unsigned>(delta)));
    if (b.is_zero()) return {};
    g = a.lead();
    // h <- g^delta / h^(delta-1)
    if (delta == 0) {
      // h^1 g^0 = h
    } else {
      h = exact_quotient(pow(g, static_cast<unsigned>(delta)),
                         pow(h, static_cast<unsigned>(delta - 1)));
    }
  }
  if (b.is_zero()) return {};
  long da = a.degree();
  QPoly lb = b.lead();
  QPoly hh = da == 0 ? h
                     : exact_quotient(pow(lb, static_cast<unsigned>(da)),
                                      pow(h, static_cast<unsigned>(da - 1)));
  return (t * hh).scaled(sign);
}

// ---- rational roots ----

namespace detail {

inline std::vector<Integer> positive_divisors(Integer n) {
  if (n < 0) n = -n;
  std::vector<Integer> small, large;
  for (Integer d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

}  // namespace detail

inline constexpr long long kRationalRootSearchLimit = 1'000'000'000'000LL;

// Distinct rational roots, ascending. nullopt when the divisor search
// would exceed the size limit.
inline std::optional<std::vector<Rational>> rational_roots(QPoly const& p) {
  if (p.is_zero()) throw Error("roots of zero polynomial");
  std::vector<Rational> out;
  QPoly f = squarefree_part(p);
  if (f.degree() <= 0) return out;
  if (f.coeff(0) == 0) {
    out.push_back(0);
    f = exact_quotient(f, QPoly::x());
  }
  if (f.degree() >= 1) {
    Integer l = 1;
    for (auto const& c : f.coeffs()) l = lcm(l, denominator(c));
    std::vector<Integer> z;
    for (auto const& c : f.coeffs()) z.push_back(numerator(c * Rational(l)));
    Integer a0 = abs(z.front()), an = abs(z.back());
    Integer lim(kRationalRootSearchLimit);
    if (a0 > lim || an > lim) return std::nullopt;
    for (auto const& num : detail::positive_divisors(a0))
      for (auto const& den : detail::positive_divisors(an))
        for (int sg : {1, -1}) {
          Rational r(num * sg, den);
          if (denominator(r) != den) continue;  // reduced form seen elsewhere
          if (f(r) == 0) out.push_back(r);
        }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---- printing ----

inline std::string to_string(QPoly const& p, std::string const& var) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = p.coeffs().size(); k-- > 0;) {
    Rational c = p.coeffs()[k];
    if (c == 0) continue;
    bool neg = c < 0;
    Rational a = neg ? Rational(-c) : c;
    if (first) os << (neg ? "-" : "");
    else os << (neg ? "-" : "+");
    first = false;
    if (k == 0 || a != 1) os << pj::to_string(a);
    if (k > 0) os << var;
    if (k > 1) os << "^" << k;
  }
  return os.str();
}

}  // namespace pj
