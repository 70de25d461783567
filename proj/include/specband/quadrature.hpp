#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "specband/measures.hpp"

namespace specband {

// d_{b,a}(N) = ceil((N+2-a)/p) + ceil((N+2-b)/q) - 1, as a q x p table
// indexed [b-1][a-1].
inline std::vector<std::vector<int>> degrees_of_precision(int p, int q, int N) {
  if (p < 1 || q < 1) throw Error(ErrorCode::ShapeViolation, "p and q must be at least 1");
  if (N < std::max(p, q)) throw Error(ErrorCode::AssumptionViolated, "quadrature degrees need N >= max(p, q)");
  std::vector<std::vector<int>> d(static_cast<std::size_t>(q), std::vector<int>(static_cast<std::size_t>(p)));
  for (int b = 1; b <= q; ++b)
    for (int a = 1; a <= p; ++a) d[static_cast<std::size_t>(b - 1)][static_cast<std::size_t>(a - 1)] = ceil_div(N + 2 - a, p) + ceil_div(N + 2 - b, q) - 1;
  return d;
}

template <class S>
struct QuadratureRule {
  int N = 0;
  DiscreteMeasureMatrix<S> measure;  // weights are the per-node rho_{k,b} mu_{k,a}
  std::vector<std::vector<int>> degrees;

  int p() const { return measure.p; }
  int q() const { return measure.q; }
  const std::vector<S>& nodes() const { return measure.nodes; }
  S weight(int k, int b, int a) const { return measure.mass(k, b, a); }
  int degree(int b, int a) const { return degrees[static_cast<std::size_t>(b - 1)][static_cast<std::size_t>(a - 1)]; }

  S apply(int b, int a, int n) const { return discrete_moment(measure, b, a, n); }
};

template <class S>
QuadratureRule<S> build_rule(const SpectralData<S>& sd) {
  QuadratureRule<S> rule;
  rule.N = sd.N;
  rule.measure = build_measures(sd);
  rule.degrees = degrees_of_precision(sd.p, sd.q, sd.N);
  for (int k = 0; k < rule.measure.size(); ++k)
    for (int b = 1; b <= sd.q; ++b)
      for (int a = 1; a <= sd.p; ++a)
        if (!(rule.weight(k, b, a) > S(0)))
          throw Error(ErrorCode::NonPositiveWeight, "weight (" + std::to_string(b) + "," + std::to_string(a) + ") at node " +
                                                        std::to_string(k + 1) + " is not positive");
  return rule;
}

struct ExactnessReport {
  int b = 1;
  int a = 1;
  int degree = 0;
  std::vector<double> residuals;  // |oracle - rule| for n = 0..degree
  double max_exact_residual = 0.0;
  double remainder = 0.0;  // oracle - rule at degree + 1
  std::string remainder_text;
  bool exact = false;      // residuals are exact zeros and the remainder exact
  bool exactness_ok = false;
  bool optimality_ok = false;
  bool pass() const { return exactness_ok && optimality_ok; }
};

// Semi-infinite moment (e^xi_b)^T T^n e^nu_a, on the truncation given by the
// reach bound for that power.
template <class S>
S semi_infinite_moment(const BandedMatrix<S>& T, const InitialConditions<S>& ic, int b, int a, int n) {
  const int p = T.p(), q = T.q();
  const int width = std::max(p, q) - 1;
  auto en = e_nu(ic, width);
  auto ex = e_xi(ic, width);
  const auto& left = ex[static_cast<std::size_t>(b - 1)];
  const auto& right = en[static_cast<std::size_t>(a - 1)];
  return power_bracket(T, n, left, right, reach_bound(width, n, p, q));
}

namespace detail {

// Shared exactness/optimality logic; rule_moment(n) gives the rule's value.
template <class S, class F>
ExactnessReport exactness_report(const BandedMatrix<S>& T, const InitialConditions<S>& ic, int b, int a, int d,
                                 F rule_moment, double tol) {
  ExactnessReport rep;
  rep.b = b;
  rep.a = a;
  rep.degree = d;
  rep.exact = is_exact_v<S>;
  rep.exactness_ok = true;
  for (int n = 0; n <= d; ++n) {
    S oracle = semi_infinite_moment(T, ic, b, a, n);
    S diff = oracle - rule_moment(n);
    double r = magnitude(diff);
    rep.residuals.push_back(r);
    if constexpr (is_exact_v<S>) {
      if (diff != S(0)) rep.exactness_ok = false;
    } else {
      double scaled = r / std::max(1.0, magnitude(oracle));
      rep.max_exact_residual = std::max(rep.max_exact_residual, scaled);
      if (scaled > tol) rep.exactness_ok = false;
    }
    if constexpr (is_exact_v<S>) rep.max_exact_residual = std::max(rep.max_exact_residual, r);
  }
  S oracle = semi_infinite_moment(T, ic, b, a, d + 1);
  S rem = oracle - rule_moment(d + 1);
  rep.remainder = to_double(rem);
  rep.remainder_text = format_scalar(rem);
  if constexpr (is_exact_v<S>) {
    rep.optimality_ok = rem > S(0);
  } else {
    double scaled = rep.remainder / std::max(1.0, magnitude(oracle));
    rep.optimality_ok = scaled > 0.0 && scaled > 100.0 * rep.max_exact_residual;
  }
  return rep;
}

}  // namespace detail

// Checks the rule against the semi-infinite oracle for n = 0..d_{b,a}(N) and
// requires a strictly positive remainder at d_{b,a}(N) + 1. In floating
// point, residuals are relative to max(1, |oracle|) and the remainder must
// exceed 100 times the largest of them.
template <class S>
ExactnessReport verify_exactness(const QuadratureRule<S>& rule, const BandedMatrix<S>& T, const InitialConditions<S>& ic,
                                 int b, int a, double tol = 1e-8) {
  return detail::exactness_report(T, ic, b, a, rule.degree(b, a), [&](int n) { return rule.apply(b, a, n); }, tol);
}

// Exact variant for operators whose eigenvalues are not rational: the rule's
// value sum_k w_k lambda_k^n equals (e^xi_b)^T (T^{[N]})^n e^nu_a, which is
// computed in exact arithmetic.
template <class S>
ExactnessReport verify_exactness_by_truncation(const BandedMatrix<S>& T, const InitialConditions<S>& ic, int N, int b,
                                               int a) {
  auto d = degrees_of_precision(T.p(), T.q(), N)[static_cast<std::size_t>(b - 1)][static_cast<std::size_t>(a - 1)];
  auto moments = truncation_moments(T, ic, N, d + 2);
  const auto& seq = moments[static_cast<std::size_t>(b - 1)][static_cast<std::size_t>(a - 1)];
  return detail::exactness_report(T, ic, b, a, d, [&](int n) { return seq[static_cast<std::size_t>(n)]; }, 0.0);
}

}  // namespace specband
