#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace specband;
using namespace specband::testing;

namespace {

InitialConditions<R> identity_ic(int p, int q_) {
  return {Matrix<R>::identity(static_cast<std::size_t>(p)), Matrix<R>::identity(static_cast<std::size_t>(q_))};
}

Matrix<R> dense_power(const Matrix<R>& t, int n) {
  auto out = Matrix<R>::identity(t.rows());
  for (int i = 0; i < n; ++i) out = out * t;
  return out;
}

}  // namespace

TEST(Degrees, Examples) {
  EXPECT_EQ(degrees_of_precision(1, 1, 4), (std::vector<std::vector<int>>{{9}}));
  EXPECT_EQ(degrees_of_precision(2, 1, 4), (std::vector<std::vector<int>>{{7, 6}}));
  EXPECT_EQ(degrees_of_precision(2, 2, 3), (std::vector<std::vector<int>>{{3, 3}, {3, 3}}));
  try {
    degrees_of_precision(3, 1, 2);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AssumptionViolated);
  }
}

TEST(Degrees, SumOfPolynomialDegreesPlusOne) {
  for (int p = 1; p <= 4; ++p)
    for (int q_ = 1; q_ <= 4; ++q_)
      for (int N = std::max(p, q_); N <= 20; ++N) {
        auto d = degrees_of_precision(p, q_, N);
        for (int b = 1; b <= q_; ++b)
          for (int a = 1; a <= p; ++a)
            EXPECT_EQ(d[static_cast<std::size_t>(b - 1)][static_cast<std::size_t>(a - 1)],
                      recursion_degree(N, a, p) + recursion_degree(N, b, q_) + 1);
      }
}

TEST(Quadrature, F1RuleAndRemainder) {
  auto T = fixture_f1();
  auto ic = identity_ic(1, 1);
  auto rule = build_rule(build_spectral_data(T, ic, 1, {q(3, 2), q(1, 2)}));
  EXPECT_EQ(rule.degree(1, 1), 3);
  EXPECT_EQ(rule.weight(0, 1, 1), q(1, 2));
  auto rep = verify_exactness(rule, T, ic, 1, 1);
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.remainder_text, "1/16");
  // Oracle for the remainder: a dense power of a larger truncation.
  auto oracle = dense_power(T.truncate(8), 4)(0, 0);
  EXPECT_EQ(oracle - rule.apply(1, 1, 4), q(1, 16));
  EXPECT_EQ(semi_infinite_moment(T, ic, 1, 1, 4), oracle);
}

TEST(Quadrature, F2RemainderByTruncation) {
  auto f = make_fixture("f2", fixture_f2_factors());
  auto rep = verify_exactness_by_truncation(f.T, f.ic, 4, 1, 1);
  EXPECT_EQ(rep.degree, 7);
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.remainder_text, "8");
  auto rep2 = verify_exactness_by_truncation(f.T, f.ic, 4, 1, 2);
  EXPECT_EQ(rep2.degree, 6);
  EXPECT_TRUE(rep2.pass());
}

TEST(Quadrature, SemiInfiniteMomentMatchesDensePower) {
  for (const auto& f : pbf_fixtures()) {
    const int p = f.T.p(), q_ = f.T.q();
    auto en = e_nu(f.ic, 30);
    auto ex = e_xi(f.ic, 30);
    auto t = f.T.truncate(30);
    for (int n = 0; n <= 6; ++n) {
      auto tn = dense_power(t, n);
      for (int b = 1; b <= q_; ++b)
        for (int a = 1; a <= p; ++a) {
          R expected(0);
          for (std::size_t i = 0; i < 31; ++i)
            for (std::size_t j = 0; j < 31; ++j) expected += ex[static_cast<std::size_t>(b - 1)][i] * tn(i, j) * en[static_cast<std::size_t>(a - 1)][j];
          EXPECT_EQ(semi_infinite_moment(f.T, f.ic, b, a, n), expected) << f.name;
        }
    }
  }
}

TEST(Quadrature, ExactAndOptimalForAllFixtures) {
  for (const auto& f : pbf_fixtures()) {
    const int p = f.T.p(), q_ = f.T.q();
    for (int N = std::max(p, q_); N <= 8; ++N)
      for (int b = 1; b <= q_; ++b)
        for (int a = 1; a <= p; ++a) {
          auto rep = verify_exactness_by_truncation(f.T, f.ic, N, b, a);
          EXPECT_TRUE(rep.exactness_ok) << f.name << " N=" << N;
          EXPECT_TRUE(rep.optimality_ok) << f.name << " N=" << N << " remainder " << rep.remainder_text;
        }
  }
}

TEST(Quadrature, Hand3RuleIsExactWithRationalNodes) {
  auto f = make_fixture("hand3", hand3_factors());
  auto Ps = characteristic_polys(f.T, 2);
  auto roots = exact_rational_roots(Ps[3], isolate_eigenvalues(Ps, 2).final_level());
  ASSERT_TRUE(roots);
  auto rule = build_rule(build_spectral_data(f.T, f.ic, 2, *roots));
  for (int a = 1; a <= 2; ++a) {
    auto rep = verify_exactness(rule, f.T, f.ic, 1, a);
    EXPECT_TRUE(rep.pass());
    EXPECT_EQ(rep.max_exact_residual, 0.0);
  }
}

TEST(Quadrature, NegativeWeightsAreRejected) {
  InitialConditions<R> bad{Matrix<R>{{q(1), q(0)}, {q(5), q(1)}}, Matrix<R>{{q(1)}}};
  auto T = fixture_f2();
  auto iso = isolate_eigenvalues(characteristic_polys(T, 4), 4);
  try {
    build_rule(build_spectral_data(T, bad, 4, iso.roots(5)));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveWeight);
  }
}

TEST(Quadrature, FloatRuleVerifies) {
  for (const auto& f : pbf_fixtures()) {
    const int N = std::max(f.T.p(), f.T.q()) + 4;
    auto iso = isolate_eigenvalues(characteristic_polys(f.T, N), N);
    auto rule = build_rule(build_spectral_data_refined(f.T, f.ic, N, iso));
    auto Td = f.T.convert<double>();
    auto icd = f.ic.convert<double>();
    for (int b = 1; b <= f.T.q(); ++b)
      for (int a = 1; a <= f.T.p(); ++a) {
        auto rep = verify_exactness(rule, Td, icd, b, a, 1e-8);
        EXPECT_TRUE(rep.exactness_ok) << f.name << " residual " << rep.max_exact_residual;
        EXPECT_GT(rep.remainder, 0.0) << f.name;
      }
  }
}
