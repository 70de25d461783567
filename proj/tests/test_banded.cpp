#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace specband;
using namespace specband::testing;

namespace {

Matrix<R> dense_power(const Matrix<R>& t, int n) {
  auto out = Matrix<R>::identity(t.rows());
  for (int i = 0; i < n; ++i) out = out * t;
  return out;
}

}  // namespace

TEST(Banded, TruncationsOfFixtures) {
  auto F2 = fixture_f2();
  EXPECT_EQ(F2.truncate(2), (Matrix<R>{{q(1), q(1), q(0)}, {q(2), q(3), q(1)}, {q(1), q(3), q(3)}}));
  EXPECT_EQ(F2.truncate(0), (Matrix<R>{{q(1)}}));
  EXPECT_EQ(fixture_f1().truncate(1), (Matrix<R>{{q(1), q(1)}, {q(1, 4), q(1)}}));
}

TEST(Banded, ZeroOutsideTheBand) {
  for (const auto& f : pbf_fixtures()) {
    const int p = f.T.p(), q_ = f.T.q();
    auto t = f.T.truncate(9);
    for (int i = 0; i <= 9; ++i)
      for (int j = 0; j <= 9; ++j) {
        auto v = t(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        if (j - i > q_ || i - j > p) {
          EXPECT_EQ(v, R(0)) << f.name;
        }
        if (i - j == p || j - i == q_) {
          EXPECT_NE(v, R(0)) << f.name;
        }
      }
  }
}

TEST(Banded, ShapeErrors) {
  using BM = BandedMatrix<R>;
  try {
    BM::from_bands(1, 1, {{-1, {q(0)}}, {1, {q(1)}}});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroExtremeDiagonal);
  }
  EXPECT_THROW(BM::from_bands(1, 1, {{-1, {q(1)}}, {1, {q(1)}}, {2, {q(1)}}}), Error);
  EXPECT_THROW(BM::from_bands(0, 1, {{1, {q(1)}}}), Error);
  auto finite = BM::from_bands(1, 1, {{-1, {q(1)}}, {1, {q(1)}}}, 5);
  EXPECT_NO_THROW(finite.truncate(4));
  try {
    finite.truncate(5);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::HorizonExceeded);
  }
}

TEST(Banded, ShiftAddsToDiagonal) {
  auto F1 = fixture_f1();
  auto unshifted = F1.with_shift(R(0));
  EXPECT_EQ(unshifted(3, 3), R(0));
  EXPECT_EQ(F1(3, 3), R(1));
  EXPECT_EQ(F1(3, 4), R(1));
  EXPECT_THROW(F1.with_shift(R(-1)), Error);
}

TEST(Banded, ExtremeProducts) {
  auto ep = extreme_products(fixture_f2(), 3);
  EXPECT_EQ(ep.alpha[0], R(1));
  EXPECT_EQ(ep.beta[0], R(1));
  EXPECT_EQ(ep.alpha[3], R(-1));
  EXPECT_EQ(ep.beta[3], R(1));
  auto e1 = extreme_products(fixture_f1(), 4);
  EXPECT_EQ(e1.alpha[4], q(1, 256));
  EXPECT_EQ(e1.beta[4], R(1));
  for (const auto& f : pbf_fixtures()) {
    auto e = extreme_products(f.T, 6);
    for (int n = 0; n <= 6; ++n) {
      EXPECT_NE(e.alpha[static_cast<std::size_t>(n)], R(0));
      EXPECT_NE(e.beta[static_cast<std::size_t>(n)], R(0));
    }
  }
}

TEST(Banded, PowerBracketExamples) {
  auto F2 = fixture_f2();
  std::vector<R> e0{R(1)};
  EXPECT_EQ(power_bracket(F2, 0, e0, e0, reach_bound(0, 0, 2, 1)), R(1));
  EXPECT_EQ(power_bracket(F2, 1, e0, e0, reach_bound(0, 1, 2, 1)), R(1));
  EXPECT_EQ(power_bracket(F2, 2, e0, e0, reach_bound(0, 2, 2, 1)), R(3));
}

TEST(Banded, PowerBracketMatchesDensePower) {
  for (const auto& f : pbf_fixtures()) {
    const int p = f.T.p(), q_ = f.T.q();
    for (int n = 0; n <= 5; ++n) {
      auto dense = dense_power(f.T.truncate(30), n);
      for (int i = 0; i <= 2; ++i)
        for (int j = 0; j <= 2; ++j) {
          std::vector<R> left(static_cast<std::size_t>(i) + 1, R(0)), right(static_cast<std::size_t>(j) + 1, R(0));
          left.back() = R(1);
          right.back() = R(1);
          int M = reach_bound(std::max(i, j), n, p, q_);
          EXPECT_EQ(power_bracket(f.T, n, left, right, M), dense(static_cast<std::size_t>(i), static_cast<std::size_t>(j)))
              << f.name << " n=" << n;
        }
    }
  }
}

TEST(Banded, RowSumBoundAndConversion) {
  auto F2 = fixture_f2();
  EXPECT_DOUBLE_EQ(F2.row_sum_bound(), 8.0);
  auto d = F2.convert<double>();
  auto t = F2.truncate(6);
  auto td = d.truncate(6);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j) EXPECT_DOUBLE_EQ(td(i, j), t(i, j).get_d());
}

TEST(Banded, ApplyTruncatedMatchesMatrixProduct) {
  auto F2 = fixture_f2();
  std::vector<R> x{q(1), q(-2), q(1, 3), q(4), q(0), q(5, 2)};
  EXPECT_EQ(F2.apply_truncated(x), F2.truncate(5).apply(x));
}
