#include <gtest/gtest.h>

#include <random>

#include "picardjump/json_io.hpp"
#include "picardjump/kummer.hpp"
#include "picardjump/verify.hpp"

using namespace pj;

namespace {

const Complex I(0, 1);

// Rank over Q of the integer (A, B, C, D), |.| <= bound, with
// |A z p + B + C z + D p| small, written without the lattice layer.
std::size_t relation_rank(Complex z, Complex p, long bound, double tol) {
  std::vector<SmallVector> rel;
  double s = std::max({1.0, std::abs(z * p), std::abs(z), std::abs(p)});
  for (long a = -bound; a <= bound; ++a)
    for (long b = -bound; b <= bound; ++b)
      for (long c = -bound; c <= bound; ++c)
        for (long d = -bound; d <= bound; ++d) {
          long l1 = std::labs(a) + std::labs(b) + std::labs(c) + std::labs(d);
          if (l1 == 0) continue;
          Complex x = double(a) * z * p + double(b) + double(c) * z + double(d) * p;
          if (std::abs(x) < tol * double(l1) * s) rel.push_back({a, b, c, d});
        }
  return rational_rank(rel, 4);
}

long sup_norm(std::array<Integer, 4> const& m) {
  long s = 0;
  for (auto const& x : m) s = std::max(s, abs(x).convert_to<long>());
  return s;
}

}  // namespace

TEST(KummerPeriodMap, ConstantSecondFactor) {
  KummerFamilySpec s;
  s.tau = Complex(0, 1.3);
  s.radius = 1;
  auto pm = kummer_period_map(s);
  auto w = pm.values(I);
  std::vector<Complex> want{1, -1, I, I};
  for (int i = 0; i < 4; ++i) EXPECT_LT(std::abs(w[i] - want[i]), 1e-15);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int k = 0; k < 50; ++k) {
    auto r = validate_period(evaluate(pm, s.tau + Complex(u(rng), u(rng))), 1e-9);
    EXPECT_LT(r.isotropy_residual, 1e-12);
    EXPECT_TRUE(r.ok);
  }
}

TEST(KummerPeriodMap, Diagonal) {
  KummerFamilySpec s;
  s.tau = Complex(0.2, 0.9);
  s.phi = {s.tau, 1.0};
  s.radius = 0.5;
  auto w = kummer_period_map(s).values(s.tau);
  EXPECT_LT(std::abs(w[1] - s.tau * s.tau), 1e-15);
  EXPECT_EQ(w[2], s.tau);
  EXPECT_EQ(w[3], s.tau);
  for (double d : {0.1, -0.2, 0.3}) {
    auto p = evaluate(kummer_period_map(s), s.tau + Complex(d, d / 2));
    EXPECT_LT(validate_period(p, 1e-9).isotropy_residual, 1e-12);
  }
}

TEST(KummerPeriodMap, UpperHalfPlaneRequired) {
  KummerFamilySpec s;
  s.tau = Complex(0, -1);
  EXPECT_THROW(kummer_period_map(s), DomainError);
  s.tau = I;
  s.sigma = -I;
  EXPECT_THROW(kummer_period_map(s), DomainError);
}

TEST(KummerRank, Examples) {
  auto a = kummer_rank(I, I, 2, 1e-9);
  EXPECT_EQ(a.rho, 20);
  EXPECT_TRUE(a.exact);
  EXPECT_EQ(kummer_rank(1.0 + I, I, 2, 1e-9).rho, 20);
  EXPECT_EQ(kummer_rank((1.0 + 3.0 * I) / 2.0, I, 2, 1e-9).rho, 20);
  auto g = kummer_rank(Complex(1.2345, 1.5432), I, 5, 1e-9);
  EXPECT_EQ(g.rho, 18);
  EXPECT_FALSE(g.exact);
  EXPECT_TRUE(g.relations.empty());
}

TEST(KummerRank, IsogenousNonCM) {
  Complex z(0.3141, 1.2718);
  auto r = kummer_rank(z, 2.0 * z, 3, 1e-9);
  EXPECT_EQ(r.rho, 19);
  ASSERT_FALSE(r.relations.empty());
  for (auto const& rel : r.relations) {
    Complex x = to_double(rel[0]) * z * 2.0 * z + to_double(rel[1]) + to_double(rel[2]) * z +
                to_double(rel[3]) * 2.0 * z;
    EXPECT_LT(std::abs(x), 1e-9 * 30);
  }
}

TEST(KummerRank, RelationsFormPrimitiveBasis) {
  for (Complex z : {Complex(0, 1), Complex(1, 1), Complex(0.5, 1.5)}) {
    auto r = kummer_rank(z, Complex(0, 1), 5, 1e-9);
    ASSERT_EQ(r.relations.size(), static_cast<std::size_t>(r.block_rank));
    for (auto const& rel : r.relations) {
      Integer g = 0;
      for (auto const& c : rel) g = gcd(g, c);
      EXPECT_EQ(g, 1);
    }
  }
}

TEST(KummerRank, AgreesWithDirectEnumeration) {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> n(-3, 3), d(1, 3);
  std::uniform_real_distribution<double> u(0.2, 2);
  for (int it = 0; it < 20; ++it) {
    Complex z(double(n(rng)) / d(rng), double(1 + std::abs(n(rng))) / d(rng));
    Complex p = it % 3 == 0 ? Complex(u(rng), u(rng)) : (it % 3 == 1 ? I : 2.0 * z + 1.0);
    long bound = 2;
    auto r = kummer_rank(z, p, bound, 1e-9);
    std::size_t want = relation_rank(z, p, bound, 1e-9);
    EXPECT_EQ(r.block_rank, want) << z << " " << p;
    EXPECT_EQ(r.rho, int(std::min<std::size_t>(20, 18 + want)));
  }
}

TEST(KummerRank, SymmetricInTheTwoFactors) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0.1, 2);
  for (int it = 0; it < 20; ++it) {
    Complex z(u(rng), u(rng)), p = it % 2 ? Complex(u(rng), u(rng)) : (z + 1.0) / 2.0;
    EXPECT_EQ(kummer_rank(z, p, 3, 1e-9).rho, kummer_rank(p, z, 3, 1e-9).rho);
  }
  EXPECT_EQ(kummer_rank(I, 1.0 + I, 2, 1e-9).rho, kummer_rank(1.0 + I, I, 2, 1e-9).rho);
}

TEST(IsogenyWitness, Examples) {
  auto a = isogeny_witness(I, 2.0 * I, 3, 1e-9);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->matrix, (std::array<Integer, 4>{2, 0, 0, 1}));
  auto b = isogeny_witness(I, I, 3, 1e-9);
  ASSERT_TRUE(b);
  EXPECT_EQ(b->matrix, (std::array<Integer, 4>{1, 0, 0, 1}));
  auto c = isogeny_witness(I, (I + 1.0) / (2.0 - I), 3, 1e-9);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->matrix, (std::array<Integer, 4>{1, 1, -1, 2}));
  EXPECT_EQ(c->det(), 3);
  EXPECT_FALSE(isogeny_witness(I, Complex(0.1234, 1.777), 3, 1e-9));
}

TEST(IsogenyWitness, MinimalAgainstFullSearch) {
  std::mt19937 rng(12);
  std::uniform_int_distribution<int> e(-3, 3);
  for (int it = 0; it < 30; ++it) {
    std::array<Integer, 4> m{e(rng), e(rng), e(rng), e(rng)};
    if (m[0] * m[3] - m[1] * m[2] <= 0) continue;
    Complex tau(0.17 * (it % 5), 0.8 + 0.1 * (it % 4));
    Complex tp = mobius(m, tau);
    auto w = isogeny_witness(tau, tp, 3, 1e-9);
    ASSERT_TRUE(w);
    EXPECT_GT(w->det(), 0);
    EXPECT_LT(std::abs(mobius(w->matrix, tau) - tp), 1e-9);
    // smallest (det, sup) over all four entries
    std::pair<long, long> best{1L << 30, 0};
    for (long a = -3; a <= 3; ++a)
      for (long b = -3; b <= 3; ++b)
        for (long c = -3; c <= 3; ++c)
          for (long d = -3; d <= 3; ++d) {
            long det = a * d - b * c;
            if (det <= 0) continue;
            if (std::abs(mobius({a, b, c, d}, tau) - tp) >= 1e-9) continue;
            long s = std::max({std::labs(a), std::labs(b), std::labs(c), std::labs(d)});
            best = std::min(best, std::pair<long, long>{det, s});
          }
    EXPECT_EQ(w->det(), best.first);
    EXPECT_EQ(sup_norm(w->matrix), best.second);
  }
}

TEST(IsogenousSequence, ConstantSecondFactor) {
  KummerFamilySpec s;
  s.tau = Complex(0.3, 1.4);
  s.radius = 0.5;
  auto seq = isogenous_sequence(s, 5, 0.5);
  ASSERT_EQ(seq.size(), 5u);
  double prev = INFINITY;
  auto fam = kummer_family(s);
  for (std::size_t k = 0; k < seq.size(); ++k) {
    auto const& st = seq[k];
    double d = std::abs(st.tau_k - s.tau);
    EXPECT_LT(d, prev);
    EXPECT_LE(d, s.radius * std::pow(0.5, double(k + 1)));
    prev = d;
    EXPECT_GT(st.witness.det(), 0);
    EXPECT_LT(st.action_error, 1e-6);
    // Gaussian rational: some small multiple is in Z[i]
    bool gaussian = false;
    for (int q = 1; q <= 2000 && !gaussian; ++q) {
      Complex x = double(q) * st.tau_k;
      gaussian = std::abs(x - Complex(std::round(x.real()), std::round(x.imag()))) < 1e-6 * q;
    }
    EXPECT_TRUE(gaussian);
    auto w = isogeny_witness(st.tau_k, s.phi_at(st.tau_k),
                             std::max(1L, [&] {
                               long m = 0;
                               for (auto const& x : st.certificate.v)
                                 m = std::max(m, abs(x).convert_to<long>());
                               return m;
                             }()),
                             1e-6);
    EXPECT_TRUE(w);
    EXPECT_TRUE(verify_jump(fam, st.certificate.v, st.tau_k, 1e-9).ok);
  }
}

TEST(IsogenousSequence, Shifted) {
  KummerFamilySpec s;
  s.tau = Complex(0.5, 1.0);
  s.phi = {Complex(0.5, 2.0), 1.0};
  s.radius = 0.9;
  auto seq = isogenous_sequence(s, 4, 0.5);
  ASSERT_EQ(seq.size(), 4u);
  for (auto const& st : seq) {
    EXPECT_LT(st.certificate.residual, 1e-9);
    EXPECT_LT(std::abs(mobius(st.witness.matrix, st.tau_k) - s.phi_at(st.tau_k)), 1e-6);
  }
}

TEST(IsogenousSequence, EmptyAndBadArguments) {
  KummerFamilySpec s;
  s.tau = Complex(0.3, 1.4);
  EXPECT_TRUE(isogenous_sequence(s, 0, 0.5).empty());
  EXPECT_THROW(isogenous_sequence(s, 3, 1.5), DomainError);
}
