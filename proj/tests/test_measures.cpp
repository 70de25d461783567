#include <gtest/gtest.h>

#include <complex>

#include "fixtures.hpp"

using namespace specband;
using namespace specband::testing;

namespace {

InitialConditions<R> identity_ic(int p, int q_) {
  return {Matrix<R>::identity(static_cast<std::size_t>(p)), Matrix<R>::identity(static_cast<std::size_t>(q_))};
}

DiscreteMeasureMatrix<R> f1_measure() { return build_measures(build_spectral_data(fixture_f1(), identity_ic(1, 1), 1, {q(3, 2), q(1, 2)})); }

struct ExactCase {
  PbfFixture fx;
  SpectralData<R> sd;
  DiscreteMeasureMatrix<R> dm;
  Polynomial<R> P;
};

ExactCase hand3_case() {
  auto fx = make_fixture("hand3", hand3_factors());
  auto Ps = characteristic_polys(fx.T, 2);
  auto roots = *exact_rational_roots(Ps[3], isolate_eigenvalues(Ps, 2).final_level());
  auto sd = build_spectral_data(fx.T, fx.ic, 2, roots);
  auto dm = build_measures(sd);
  return {fx, sd, dm, Ps[3]};
}

// Float64 measure from exact evaluation at tightly isolated nodes.
DiscreteMeasureMatrix<double> refined_measure(const PbfFixture& f, int N, std::vector<R>* nodes = nullptr) {
  auto iso = isolate_eigenvalues(characteristic_polys(f.T, N), N);
  if (nodes) *nodes = iso.roots(N + 1);
  return build_measures(build_spectral_data_refined(f.T, f.ic, N, iso));
}

}  // namespace

TEST(Measures, F1SecondKindAndWeyl) {
  auto dm = f1_measure();
  EXPECT_EQ(dm.mass(0, 1, 1), q(1, 2));
  EXPECT_EQ(dm.mass(1, 1, 1), q(1, 2));
  auto P2 = characteristic_polys(fixture_f1(), 1)[2];
  auto sk = second_kind(dm, P2);
  EXPECT_EQ(sk(1, 1), Polynomial<R>(std::vector<R>{q(-1), q(1)}));
  EXPECT_EQ(weyl(dm, q(3))(0, 0), q(8, 15));
  EXPECT_EQ(weyl_ratio(sk, P2, q(3))(0, 0), q(8, 15));
  EXPECT_EQ(discrete_moment(dm, 1, 1, 2), q(5, 4));
  EXPECT_EQ(truncation_moments(fixture_f1(), identity_ic(1, 1), 1, 3)[0][0][2], q(5, 4));
}

TEST(Measures, WeylRejectsNodes) {
  auto dm = f1_measure();
  try {
    weyl(dm, q(1, 2));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EvaluationOnSpectrum);
  }
  auto sd = build_spectral_data(fixture_f1(), identity_ic(1, 1), 1, {q(3, 2), q(1, 2)}).convert<double>();
  EXPECT_THROW(weyl(build_measures(sd), 1.5 + 1e-13, 1e-12), Error);
}

TEST(Measures, TotalMassIdentity) {
  auto hc = hand3_case();
  EXPECT_EQ(hc.dm.total_mass(), expected_total_mass(hc.fx.ic));
  for (const auto& f : pbf_fixtures()) {
    const int N = std::max(f.T.p(), f.T.q()) + 3;
    auto dm = refined_measure(f, N);
    auto expected = matrix_cast<double>(expected_total_mass(f.ic));
    EXPECT_LE(max_abs(dm.total_mass() - expected), 1e-9) << f.name;
  }
}

TEST(Measures, F2TotalMassWithIdentityInitialConditions) {
  auto ic = identity_ic(2, 1);
  auto iso = isolate_eigenvalues(characteristic_polys(fixture_f2(), 4), 4);
  auto dm = build_measures(build_spectral_data_refined(fixture_f2(), ic, 4, iso));
  auto m = dm.total_mass();
  EXPECT_NEAR(m(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(m(0, 1), 0.0, 1e-12);
}

TEST(Measures, DiscreteMomentsEqualTruncationMoments) {
  auto hc = hand3_case();
  EXPECT_EQ(discrete_moments(hc.dm, 10), truncation_moments(hc.fx.T, hc.fx.ic, 2, 10));
  for (const auto& f : pbf_fixtures()) {
    const int N = 6;
    auto dm = refined_measure(f, N);
    auto exact = truncation_moments(f.T, f.ic, N, 8);
    auto approx = discrete_moments(dm, 8);
    for (std::size_t b = 0; b < exact.size(); ++b)
      for (std::size_t a = 0; a < exact[b].size(); ++a)
        for (std::size_t n = 0; n < 8; ++n) {
          double e = exact[b][a][n].get_d();
          EXPECT_NEAR(approx[b][a][n], e, 1e-9 * std::max(1.0, std::abs(e))) << f.name;
        }
  }
}

TEST(Measures, BiorthogonalityExactForHand3) {
  auto hc = hand3_case();
  auto fam = generate_families(hc.fx.T, hc.fx.ic, 4);
  for (int n = 0; n <= 2; ++n)
    for (int m = 0; m <= 2; ++m) EXPECT_EQ(discrete_biorthogonality(hc.dm, fam, n, m), R(0));
  std::vector<FamilyValues<R>> vals;
  for (const auto& x : hc.dm.nodes) vals.push_back(evaluate(fam, x));
  EXPECT_EQ(mixed_orthogonality_residual(hc.dm, vals), 0.0);
  EXPECT_THROW(discrete_biorthogonality(hc.dm, fam, 3, 0), Error);
}

TEST(Measures, BiorthogonalityForF2) {
  auto f = make_fixture("f2", fixture_f2_factors());
  std::vector<R> nodes;
  auto dm = refined_measure(f, 3, &nodes);
  auto vals = refined_node_values(f.T, f.ic, nodes, 3 + 2);
  EXPECT_LE(max_abs(biorthogonality_table(dm, vals)), 1e-9);
  EXPECT_LE(mixed_orthogonality_residual(dm, vals), 1e-9);
}

TEST(Measures, MassBlocksHaveRankOne) {
  auto f = make_fixture("ones-2x3", constant_factorization(2, 3));
  auto dm = refined_measure(f, 6);
  for (int k = 0; k < dm.size(); ++k)
    for (int b1 = 1; b1 <= 3; ++b1)
      for (int b2 = b1 + 1; b2 <= 3; ++b2) {
        double minor = dm.mass(k, b1, 1) * dm.mass(k, b2, 2) - dm.mass(k, b1, 2) * dm.mass(k, b2, 1);
        EXPECT_NEAR(minor, 0.0, 1e-12 * std::abs(dm.mass(k, b1, 1) * dm.mass(k, b2, 2)));
      }
}

TEST(SecondKind, AdjugateAgreesWithDividedDifferences) {
  auto hc = hand3_case();
  auto a = second_kind_adjugate(hc.fx.T, hc.fx.ic, 2);
  auto d = second_kind(hc.dm, hc.P);
  EXPECT_EQ(a.table, d.table);
  for (int k = 0; k < 3; ++k) {
    auto res = weyl_residue(d, hc.P, hc.dm.nodes[static_cast<std::size_t>(k)]);
    for (int b = 1; b <= 1; ++b)
      for (int a_ = 1; a_ <= 2; ++a_) EXPECT_EQ(res(static_cast<std::size_t>(b - 1), static_cast<std::size_t>(a_ - 1)), hc.dm.mass(k, b, a_));
  }
  const R z = q(7, 3);
  EXPECT_EQ(weyl(hc.dm, z), weyl_ratio(d, hc.P, z));
}

TEST(SecondKind, DegreeIsAtMostN) {
  for (const auto& f : pbf_fixtures()) {
    auto sk = second_kind_adjugate(f.T, f.ic, 5);
    for (std::size_t b = 0; b < sk.table.rows(); ++b)
      for (std::size_t a = 0; a < sk.table.cols(); ++a) EXPECT_LE(sk.table(b, a).degree(), 5) << f.name;
  }
}

TEST(Weyl, ResolventAgreesWithMeasure) {
  for (const auto& f : pbf_fixtures()) {
    const int N = 5;
    auto dm = refined_measure(f, N);
    using C = std::complex<double>;
    for (C z : {C(1.0, 2.0), C(-3.0, 0.5), C(20.0, 0.0)}) {
      auto a = resolvent_weyl(f.T, f.ic, N, z);
      auto b = weyl(dm, z);
      EXPECT_LE(max_abs(a - b), 1e-10) << f.name;
    }
  }
}

TEST(Weyl, TelescopingDifferencesShrinkAwayFromSpectrum) {
  auto f = make_fixture("f2", fixture_f2_factors());
  auto d = weyl_telescoping(f.T, f.ic, {4, 8, 16}, std::complex<double>(-4.0, 1.0));
  ASSERT_EQ(d.size(), 3u);
  EXPECT_GT(d[0], d[1]);
  EXPECT_GT(d[1], d[2]);
}

TEST(HermitePade, OrdersMeetMultiIndices) {
  for (const auto& f : pbf_fixtures()) {
    const int p = f.T.p(), q_ = f.T.q();
    const int N = 24, depth = 6;
    auto fam = generate_families(f.T, f.ic, 8);
    auto moments = truncation_moments(f.T, f.ic, N, 16);
    for (int n = 0; n <= 8; ++n) {
      auto hp = hermite_pade_order(fam, moments, n, depth);
      EXPECT_TRUE(hp.pass()) << f.name << " n=" << n;
      int sa = 0, sb = 0;
      for (int a = 1; a <= p; ++a) sa += multi_index(n, a, p);
      for (int b = 1; b <= q_; ++b) sb += multi_index(n, b, q_);
      EXPECT_EQ(sa, n);
      EXPECT_EQ(sb, n);
    }
  }
}

TEST(HermitePade, DetectsWrongPolynomials) {
  auto f = make_fixture("f2", fixture_f2_factors());
  auto fam = generate_families(f.T, f.ic, 6);
  fam.A[0][5] = fam.A[0][5] + Polynomial<R>(q(1));
  auto hp = hermite_pade_order(fam, truncation_moments(f.T, f.ic, 20, 16), 5, 6);
  EXPECT_FALSE(hp.pass());
  EXPECT_THROW(hermite_pade_order(fam, truncation_moments(f.T, f.ic, 20, 4), 5, 6), Error);
}

TEST(StepFunctions, F1Measure) {
  auto dm = f1_measure();
  auto s = measure_step_function(dm, 1, 1);
  EXPECT_EQ(s(q(0)), R(0));
  EXPECT_EQ(s(q(1, 2)), q(1, 2));
  EXPECT_EQ(s(q(1)), q(1, 2));
  EXPECT_EQ(s(q(3, 2)), R(1));
  EXPECT_EQ(s.total(), R(1));
  EXPECT_TRUE(s.nondecreasing());
  auto bad = step_function(std::vector<R>{q(1), q(2)}, std::vector<R>{q(1), q(-2)});
  EXPECT_FALSE(bad.nondecreasing());
}

TEST(StepFunctions, MarginalsAreNondecreasing) {
  for (const auto& f : pbf_fixtures()) {
    auto iso = isolate_eigenvalues(characteristic_polys(f.T, 6), 6);
    auto steps = marginal_step_functions(build_spectral_data_refined(f.T, f.ic, 6, iso));
    EXPECT_EQ(steps.phi.size(), static_cast<std::size_t>(f.T.q()));
    EXPECT_EQ(steps.phi_tilde.size(), static_cast<std::size_t>(f.T.p()));
    for (const auto& s : steps.phi) EXPECT_TRUE(s.nondecreasing()) << f.name;
    for (const auto& s : steps.phi_tilde) EXPECT_TRUE(s.nondecreasing()) << f.name;
  }
}
