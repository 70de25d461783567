#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace specband;
using namespace specband::testing;

namespace {

InitialConditions<R> identity_ic(int p, int q_) {
  return {Matrix<R>::identity(static_cast<std::size_t>(p)), Matrix<R>::identity(static_cast<std::size_t>(q_))};
}

Polynomial<R> poly(std::initializer_list<R> c) { return Polynomial<R>(std::vector<R>(c)); }

}  // namespace

TEST(Recursion, CeilDivAndDegreeLaw) {
  EXPECT_EQ(ceil_div(7, 3), 3);
  EXPECT_EQ(ceil_div(6, 3), 2);
  EXPECT_EQ(ceil_div(0, 2), 0);
  EXPECT_EQ(ceil_div(-1, 2), 0);
  EXPECT_EQ(ceil_div(-4, 3), -1);
  EXPECT_EQ(recursion_degree(0, 1, 2), 0);
  EXPECT_EQ(recursion_degree(2, 1, 2), 1);
  EXPECT_EQ(recursion_degree(2, 2, 2), 0);
}

TEST(Recursion, FirstPolynomialsOfF1) {
  auto T = fixture_f1().with_shift(R(0));
  auto fam = generate_families(T, identity_ic(1, 1), 3);
  EXPECT_EQ(fam.b(1, 1), Polynomial<R>::x());
  EXPECT_EQ(fam.a(1, 1), poly({q(0), q(4)}));
  // x B_1 = T_{10} B_0 + T_{11} B_1 + T_{12} B_2 gives B_2 = x^2 - 1/4.
  EXPECT_EQ(fam.b(1, 2), poly({q(-1, 4), q(0), q(1)}));
}

TEST(Recursion, FirstPolynomialsOfF2) {
  auto fam = generate_families(fixture_f2(), identity_ic(2, 1), 4);
  EXPECT_EQ(fam.a(1, 2), poly({q(-1), q(1)}));
  EXPECT_EQ(fam.a(2, 2), Polynomial<R>(q(-2)));
  EXPECT_EQ(fam.b(1, 1), poly({q(-1), q(1)}));
}

TEST(Recursion, RecurrencesHoldAsIdentities) {
  for (const auto& f : pbf_fixtures()) {
    const int p = f.T.p(), q_ = f.T.q(), len = 12;
    auto fam = generate_families(f.T, f.ic, len);
    auto X = Polynomial<R>::x();
    for (int a = 1; a <= p; ++a)
      for (int n = 0; n + p <= len; ++n) {
        Polynomial<R> rhs;
        for (int j = std::max(0, n - q_); j <= n + p; ++j) rhs = rhs + fam.a(a, j) * Polynomial<R>(f.T(j, n));
        EXPECT_EQ(X * fam.a(a, n), rhs) << f.name;
      }
    for (int b = 1; b <= q_; ++b)
      for (int n = 0; n + q_ <= len; ++n) {
        Polynomial<R> rhs;
        for (int j = std::max(0, n - p); j <= n + q_; ++j) rhs = rhs + Polynomial<R>(f.T(n, j)) * fam.b(b, j);
        EXPECT_EQ(X * fam.b(b, n), rhs) << f.name;
      }
  }
}

TEST(Recursion, DegreeLawAfterInitialBlock) {
  for (const auto& f : pbf_fixtures()) {
    const int p = f.T.p(), q_ = f.T.q(), len = 14;
    auto fam = generate_families(f.T, identity_ic(p, q_), len);
    for (int a = 1; a <= p; ++a)
      for (int n = 0; n <= len; ++n) {
        const int law = recursion_degree(n, a, p);
        if (n >= p || n == a - 1) EXPECT_EQ(fam.a(a, n).degree(), law) << f.name << " a=" << a << " n=" << n;
        else EXPECT_LE(fam.a(a, n).degree(), law);
      }
    for (int b = 1; b <= q_; ++b)
      for (int n = 0; n <= len; ++n) {
        const int law = recursion_degree(n, b, q_);
        if (n >= q_ || n == b - 1) EXPECT_EQ(fam.b(b, n).degree(), law) << f.name << " b=" << b << " n=" << n;
        else EXPECT_LE(fam.b(b, n).degree(), law);
      }
  }
}

TEST(Recursion, PointValuesMatchPolynomials) {
  auto f = pbf_fixtures()[5];
  auto fam = generate_families(f.T, f.ic, 10);
  const R x = q(-7, 3);
  auto direct = family_values(f.T, f.ic, 10, x);
  auto viaPoly = evaluate(fam, x);
  EXPECT_EQ(direct.A, viaPoly.A);
  EXPECT_EQ(direct.B, viaPoly.B);
  auto d = family_values(f.T.convert<double>(), f.ic.convert<double>(), 10, x.get_d());
  for (std::size_t a = 0; a < d.A.size(); ++a)
    for (std::size_t n = 0; n < d.A[a].size(); ++n) EXPECT_NEAR(d.A[a][n], direct.A[a][n].get_d(), 1e-9 * (1 + std::abs(direct.A[a][n].get_d())));
}

TEST(Recursion, HorizonIsEnforced) {
  auto T = BandedMatrix<R>::from_bands(1, 1, {{-1, {q(1)}}, {1, {q(1)}}}, 6);
  EXPECT_NO_THROW(generate_families(T, identity_ic(1, 1), 6));
  EXPECT_THROW(generate_families(T, identity_ic(1, 1), 7), Error);
  EXPECT_THROW(generate_families(fixture_f2(), identity_ic(1, 1), 4), Error);
}

TEST(CharacteristicPolys, F2Values) {
  auto Ps = characteristic_polys(fixture_f2(), 3);
  EXPECT_EQ(Ps[0], Polynomial<R>(q(1)));
  EXPECT_EQ(Ps[1], poly({q(-1), q(1)}));
  EXPECT_EQ(Ps[3], poly({q(-1), q(10), q(-7), q(1)}));
}

TEST(CharacteristicPolys, MatchDenseDeterminants) {
  for (const auto& f : pbf_fixtures()) {
    auto Ps = characteristic_polys(f.T, 7);
    ASSERT_EQ(Ps.size(), 9u);
    for (int k = 1; k <= 8; ++k) EXPECT_EQ(Ps[static_cast<std::size_t>(k)], characteristic_polynomial(f.T.truncate(k - 1))) << f.name;
  }
}

TEST(Determinantal, BlocksGiveCharacteristicPolynomials) {
  for (const auto& f : pbf_fixtures()) {
    const int p = f.T.p(), q_ = f.T.q();
    auto Ps = characteristic_polys(f.T, 9);
    auto fam = generate_families(f.T, f.ic, 8 + std::max(p, q_));
    for (int N = 0; N <= 8; ++N) {
      auto blk = determinantal_blocks(fam, f.T, N);
      EXPECT_EQ(blk.P_N, Ps[static_cast<std::size_t>(N)]) << f.name << " N=" << N;
      EXPECT_EQ(blk.det_B * Polynomial<R>(blk.beta_N), Ps[static_cast<std::size_t>(N)]) << f.name << " N=" << N;
      EXPECT_EQ(blk.P_N1, Ps[static_cast<std::size_t>(N) + 1]) << f.name << " N=" << N;
      for (int j = 1; j < p; ++j) EXPECT_TRUE(blk.Q[static_cast<std::size_t>(N + j)].is_zero());
      for (int j = 1; j < q_; ++j) EXPECT_TRUE(blk.R[static_cast<std::size_t>(N + j)].is_zero());
    }
  }
}

TEST(Determinantal, NeedsLongEnoughFamilies) {
  auto fam = generate_families(fixture_f2(), identity_ic(2, 1), 5);
  EXPECT_NO_THROW(determinantal_blocks(fam, fixture_f2(), 3));
  EXPECT_THROW(determinantal_blocks(fam, fixture_f2(), 4), Error);
}

TEST(ChristoffelDarboux, ExactAtRationalPairs) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
  for (const auto& f : pbf_fixtures()) {
    const int p = f.T.p(), q_ = f.T.q();
    auto fam = generate_families(f.T, f.ic, 7 + std::max(p, q_));
    for (int N : {0, 3, 7}) {
      auto blk = determinantal_blocks(fam, f.T, N);
      for (int k = 0; k < 3; ++k) {
        R x = q(num(rng), den(rng)), y = x + q(1 + k, 5);
        EXPECT_EQ(christoffel_darboux_check(blk, x, y), R(0)) << f.name;
        EXPECT_EQ(christoffel_darboux_confluent(blk, x), R(0)) << f.name;
      }
      EXPECT_THROW(christoffel_darboux_check(blk, q(1), q(1)), Error);
    }
  }
}

TEST(ChristoffelDarboux, FloatWithinRoundoff) {
  auto f = make_fixture("periodic", periodic_factorization(2, 3));
  auto fam = generate_families(f.T, f.ic, 9);
  auto blk = determinantal_blocks(fam, f.T, 6);
  double x = 0.37, y = 2.9;
  double lhs = 0.0;
  for (int n = 0; n <= 6; ++n) lhs += std::abs(blk.Q[static_cast<std::size_t>(n)](R(x)).get_d() * blk.R[static_cast<std::size_t>(n)](R(y)).get_d());
  EXPECT_LE(std::abs(christoffel_darboux_check<R, double>(blk, x, y)), 1e-10 * std::max(1.0, lhs));
}
