#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <vector>

#include "specband/spectral.hpp"

namespace specband {

// Atomic measures psi_{b,a} = sum_k rho_{k,b} mu_{k,a} delta(x - lambda_k).
// Masses are kept as the two factor vectors so each node block stays rank one.
template <class S>
struct DiscreteMeasureMatrix {
  int p = 1;
  int q = 1;
  std::vector<S> nodes;  // descending
  Matrix<S> rho;         // nodes x q
  Matrix<S> mu;          // nodes x p

  int size() const { return static_cast<int>(nodes.size()); }

  // b, a are 1-based.
  S mass(int k, int b, int a) const {
    return rho(static_cast<std::size_t>(k), static_cast<std::size_t>(b - 1)) * mu(static_cast<std::size_t>(k), static_cast<std::size_t>(a - 1));
  }

  Matrix<S> total_mass() const {
    Matrix<S> out(static_cast<std::size_t>(q), static_cast<std::size_t>(p), S(0));
    for (int k = 0; k < size(); ++k)
      for (int b = 1; b <= q; ++b)
        for (int a = 1; a <= p; ++a) out(static_cast<std::size_t>(b - 1), static_cast<std::size_t>(a - 1)) += mass(k, b, a);
    return out;
  }
};

template <class S>
DiscreteMeasureMatrix<S> build_measures(const SpectralData<S>& sd) {
  DiscreteMeasureMatrix<S> dm;
  dm.p = sd.p;
  dm.q = sd.q;
  dm.nodes = sd.eigenvalues;
  dm.rho = sd.rho;
  dm.mu = sd.mu;
  return dm;
}

// e^nu_a: column a of nu^{-T} padded with zeros; e^xi_b: row b of xi^{-1}.
template <class S>
std::vector<std::vector<S>> e_nu(const InitialConditions<S>& ic, int N) {
  auto inv = inverse(ic.nu).transpose();
  const int p = ic.p();
  std::vector<std::vector<S>> out(static_cast<std::size_t>(p), std::vector<S>(static_cast<std::size_t>(N) + 1, S(0)));
  for (int a = 0; a < p; ++a)
    for (int i = 0; i < p && i <= N; ++i) out[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] = inv(static_cast<std::size_t>(i), static_cast<std::size_t>(a));
  return out;
}

template <class S>
std::vector<std::vector<S>> e_xi(const InitialConditions<S>& ic, int N) {
  auto inv = inverse(ic.xi);
  const int q = ic.q();
  std::vector<std::vector<S>> out(static_cast<std::size_t>(q), std::vector<S>(static_cast<std::size_t>(N) + 1, S(0)));
  for (int b = 0; b < q; ++b)
    for (int i = 0; i < q && i <= N; ++i) out[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)] = inv(static_cast<std::size_t>(b), static_cast<std::size_t>(i));
  return out;
}

// xi^{-1} I_{q,p} nu^{-T}
template <class S>
Matrix<S> expected_total_mass(const InitialConditions<S>& ic) {
  const auto p = static_cast<std::size_t>(ic.p()), q = static_cast<std::size_t>(ic.q());
  Matrix<S> I(q, p, S(0));
  for (std::size_t i = 0; i < std::min(p, q); ++i) I(i, i) = S(1);
  return inverse(ic.xi) * I * inverse(ic.nu).transpose();
}

template <class S>
S discrete_moment(const DiscreteMeasureMatrix<S>& dm, int b, int a, int n) {
  S acc(0);
  for (int k = 0; k < dm.size(); ++k) {
    S x = dm.nodes[static_cast<std::size_t>(k)], pw(1);
    for (int i = 0; i < n; ++i) pw *= x;
    acc += dm.mass(k, b, a) * pw;
  }
  return acc;
}

// moments[b-1][a-1][n] = (e^xi_b)^T (T^{[N]})^n e^nu_a for n = 0..K-1.
template <class S>
std::vector<std::vector<std::vector<S>>> truncation_moments(const BandedMatrix<S>& T, const InitialConditions<S>& ic,
                                                             int N, int K) {
  const int p = T.p(), q = T.q();
  auto t = T.truncate(N);
  auto en = e_nu(ic, N);
  auto ex = e_xi(ic, N);
  std::vector<std::vector<std::vector<S>>> out(static_cast<std::size_t>(q),
                                               std::vector<std::vector<S>>(static_cast<std::size_t>(p)));
  for (int a = 0; a < p; ++a) {
    auto v = en[static_cast<std::size_t>(a)];
    for (int n = 0; n < K; ++n) {
      for (int b = 0; b < q; ++b) {
        S acc(0);
        for (std::size_t i = 0; i < v.size(); ++i) acc += ex[static_cast<std::size_t>(b)][i] * v[i];
        out[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)].push_back(acc);
      }
      v = t.apply(v);
    }
  }
  return out;
}

template <class S>
std::vector<std::vector<std::vector<S>>> discrete_moments(const DiscreteMeasureMatrix<S>& dm, int K) {
  std::vector<std::vector<std::vector<S>>> out(static_cast<std::size_t>(dm.q),
                                               std::vector<std::vector<S>>(static_cast<std::size_t>(dm.p),
                                                                           std::vector<S>(static_cast<std::size_t>(K), S(0))));
  for (int k = 0; k < dm.size(); ++k) {
    S pw(1);
    for (int n = 0; n < K; ++n) {
      for (int b = 1; b <= dm.q; ++b)
        for (int a = 1; a <= dm.p; ++a)
          out[static_cast<std::size_t>(b - 1)][static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(n)] += dm.mass(k, b, a) * pw;
      pw *= dm.nodes[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

// Family values at every node, computed by running the recurrences pointwise.
template <class S>
std::vector<FamilyValues<S>> node_values(const BandedMatrix<S>& T, const InitialConditions<S>& ic,
                                         const DiscreteMeasureMatrix<S>& dm, int length) {
  std::vector<FamilyValues<S>> out;
  for (const auto& x : dm.nodes) out.push_back(family_values(T, ic, length, x));
  return out;
}

// Family values evaluated exactly at rational approximations of the nodes
// and rounded once; forward recurrences in floating point excite the growing
// solutions as soon as p or q exceeds one.
inline std::vector<FamilyValues<double>> refined_node_values(const BandedMatrix<Rational>& T,
                                                             const InitialConditions<Rational>& ic,
                                                             const std::vector<Rational>& nodes, int length) {
  std::vector<FamilyValues<double>> out;
  for (const auto& x : nodes) out.push_back(family_values(T, ic, length, x).convert<double>());
  return out;
}

// sum_b sum_a int B^{(b)}_n dpsi_{b,a} A^{(a)}_m - delta_{n,m}
template <class S>
S discrete_biorthogonality(const DiscreteMeasureMatrix<S>& dm, const std::vector<FamilyValues<S>>& vals, int n, int m) {
  const int N = dm.size() - 1;
  if (n < 0 || m < 0 || n > N || m > N) throw Error(ErrorCode::IndexOutOfRange, "biorthogonality index beyond N");
  S acc(0);
  for (int k = 0; k < dm.size(); ++k) {
    const auto& v = vals[static_cast<std::size_t>(k)];
    S left(0), right(0);
    for (int b = 0; b < dm.q; ++b) left += v.B[static_cast<std::size_t>(b)][static_cast<std::size_t>(n)] * dm.rho(static_cast<std::size_t>(k), static_cast<std::size_t>(b));
    for (int a = 0; a < dm.p; ++a) right += dm.mu(static_cast<std::size_t>(k), static_cast<std::size_t>(a)) * v.A[static_cast<std::size_t>(a)][static_cast<std::size_t>(m)];
    acc += left * right;
  }
  return n == m ? S(acc - S(1)) : acc;
}

// Same residual with the families given as polynomials.
template <class S>
S discrete_biorthogonality(const DiscreteMeasureMatrix<S>& dm, const RecursionFamilies<S>& fam, int n, int m) {
  std::vector<FamilyValues<S>> vals;
  for (const auto& x : dm.nodes) vals.push_back(evaluate(fam, x));
  return discrete_biorthogonality(dm, vals, n, m);
}

template <class S>
Matrix<S> biorthogonality_table(const DiscreteMeasureMatrix<S>& dm, const std::vector<FamilyValues<S>>& vals) {
  const auto n = static_cast<std::size_t>(dm.size());
  Matrix<S> out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = discrete_biorthogonality(dm, vals, static_cast<int>(i), static_cast<int>(j));
  return out;
}

// Largest |sum_a int x^k dpsi_{b,a} A^{(a)}_m| over k <= deg B^{(b)}_{m-1}, and
// the dual with the roles of A and B swapped, for all m <= N.
template <class S>
double mixed_orthogonality_residual(const DiscreteMeasureMatrix<S>& dm, const std::vector<FamilyValues<S>>& vals) {
  const int N = dm.size() - 1;
  double worst = 0.0;
  for (int m = 1; m <= N; ++m) {
    for (int b = 1; b <= dm.q; ++b) {
      int top = recursion_degree(m - 1, b, dm.q);
      for (int k = 0; k <= top; ++k) {
        S acc(0);
        for (int j = 0; j <= N; ++j) {
          S x = dm.nodes[static_cast<std::size_t>(j)], pw(1);
          for (int i = 0; i < k; ++i) pw *= x;
          S inner(0);
          for (int a = 1; a <= dm.p; ++a) inner += dm.mass(j, b, a) * vals[static_cast<std::size_t>(j)].A[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(m)];
          acc += pw * inner;
        }
        worst = std::max(worst, magnitude(acc));
      }
    }
    for (int a = 1; a <= dm.p; ++a) {
      int top = recursion_degree(m - 1, a, dm.p);
      for (int k = 0; k <= top; ++k) {
        S acc(0);
        for (int j = 0; j <= N; ++j) {
          S x = dm.nodes[static_cast<std::size_t>(j)], pw(1);
          for (int i = 0; i < k; ++i) pw *= x;
          S inner(0);
          for (int b = 1; b <= dm.q; ++b) inner += vals[static_cast<std::size_t>(j)].B[static_cast<std::size_t>(b - 1)][static_cast<std::size_t>(m)] * dm.mass(j, b, a);
          acc += pw * inner;
        }
        worst = std::max(worst, magnitude(acc));
      }
    }
  }
  return worst;
}

template <class S>
struct SecondKindPolys {
  int p = 1;
  int q = 1;
  Matrix<Polynomial<S>> table;  // q x p

  const Polynomial<S>& operator()(int b, int a) const { return table(static_cast<std::size_t>(b - 1), static_cast<std::size_t>(a - 1)); }
};

// P^{(b,a)}_{N+1}(z) = sum_k rho_{k,b} mu_{k,a} P_{N+1}(z) / (z - lambda_k).
template <class S>
SecondKindPolys<S> second_kind(const DiscreteMeasureMatrix<S>& dm, const Polynomial<S>& P_N1) {
  SecondKindPolys<S> sk;
  sk.p = dm.p;
  sk.q = dm.q;
  sk.table = Matrix<Polynomial<S>>(static_cast<std::size_t>(dm.q), static_cast<std::size_t>(dm.p));
  std::vector<Polynomial<S>> pi;
  for (const auto& x : dm.nodes) pi.push_back(poly_divided_difference(P_N1, x));
  for (int b = 1; b <= dm.q; ++b)
    for (int a = 1; a <= dm.p; ++a) {
      Polynomial<S> acc;
      for (int k = 0; k < dm.size(); ++k) acc = acc + pi[static_cast<std::size_t>(k)] * dm.mass(k, b, a);
      sk.table(static_cast<std::size_t>(b - 1), static_cast<std::size_t>(a - 1)) = acc;
    }
  return sk;
}

template <class S>
SecondKindPolys<S> second_kind(const DiscreteMeasureMatrix<S>& dm, const DeterminantalBlocks<S>& blk) {
  return second_kind(dm, blk.P_N1);
}

// (e^xi_b)^T adj(zI - T^{[N]}) e^nu_a, interpolated from N+1 values of
// det(zI - T) (zI - T)^{-1} at integer z past the row-sum bound.
template <class S>
SecondKindPolys<S> second_kind_adjugate(const BandedMatrix<S>& T, const InitialConditions<S>& ic, int N) {
  const int p = T.p(), q = T.q();
  auto t = T.truncate(N);
  auto en = e_nu(ic, N);
  auto ex = e_xi(ic, N);
  const auto n = static_cast<std::size_t>(N) + 1;
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j) r += magnitude(t(i, j));
    bound = std::max(bound, r);
  }
  const int start = static_cast<int>(std::ceil(bound)) + 1;
  std::vector<S> xs;
  std::vector<std::vector<std::vector<S>>> ys(static_cast<std::size_t>(q), std::vector<std::vector<S>>(static_cast<std::size_t>(p)));
  for (std::size_t j = 0; j < n; ++j) {
    S z(start + static_cast<int>(j));
    Matrix<S> m(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) m(r, c) = (r == c ? z : S(0)) - t(r, c);
    Matrix<S> rhs(n, static_cast<std::size_t>(p));
    for (int a = 0; a < p; ++a)
      for (std::size_t r = 0; r < n; ++r) rhs(r, static_cast<std::size_t>(a)) = en[static_cast<std::size_t>(a)][r];
    S d = det(m);
    auto x = solve(m, rhs);
    xs.push_back(z);
    for (int b = 0; b < q; ++b)
      for (int a = 0; a < p; ++a) {
        S acc(0);
        for (std::size_t r = 0; r < n; ++r) acc += ex[static_cast<std::size_t>(b)][r] * x(r, static_cast<std::size_t>(a));
        ys[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)].push_back(d * acc);
      }
  }
  SecondKindPolys<S> sk;
  sk.p = p;
  sk.q = q;
  sk.table = Matrix<Polynomial<S>>(static_cast<std::size_t>(q), static_cast<std::size_t>(p));
  for (int b = 0; b < q; ++b)
    for (int a = 0; a < p; ++a)
      sk.table(static_cast<std::size_t>(b), static_cast<std::size_t>(a)) = interpolate(xs, ys[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)]);
  return sk;
}

// S^{[N]}_{b,a}(z) = sum_k rho_{k,b} mu_{k,a} / (z - lambda_k), q x p.
template <class S, class V>
Matrix<V> weyl(const DiscreteMeasureMatrix<S>& dm, const V& z, double tol = 0.0) {
  Matrix<V> out(static_cast<std::size_t>(dm.q), static_cast<std::size_t>(dm.p), lift<V>(S(0)));
  for (int k = 0; k < dm.size(); ++k) {
    V d = z - lift<V>(dm.nodes[static_cast<std::size_t>(k)]);
    if (magnitude(d) <= tol || d == lift<V>(S(0))) throw Error(ErrorCode::EvaluationOnSpectrum, "Weyl function evaluated at a node");
    for (int b = 1; b <= dm.q; ++b)
      for (int a = 1; a <= dm.p; ++a) out(static_cast<std::size_t>(b - 1), static_cast<std::size_t>(a - 1)) += lift<V>(dm.mass(k, b, a)) / d;
  }
  return out;
}

// P^{(b,a)}_{N+1}(z) / P_{N+1}(z)
template <class S, class V>
Matrix<V> weyl_ratio(const SecondKindPolys<S>& sk, const Polynomial<S>& P_N1, const V& z, double tol = 0.0) {
  V den = P_N1(z);
  if (magnitude(den) <= tol || den == lift<V>(S(0))) throw Error(ErrorCode::EvaluationOnSpectrum, "Weyl function evaluated at a zero of P_{N+1}");
  Matrix<V> out(static_cast<std::size_t>(sk.q), static_cast<std::size_t>(sk.p));
  for (int b = 1; b <= sk.q; ++b)
    for (int a = 1; a <= sk.p; ++a) out(static_cast<std::size_t>(b - 1), static_cast<std::size_t>(a - 1)) = sk(b, a)(z) / den;
  return out;
}

// Residue of S_{b,a} at a simple zero of P_{N+1}: P^{(b,a)}(x) / P'_{N+1}(x).
template <class S>
Matrix<S> weyl_residue(const SecondKindPolys<S>& sk, const Polynomial<S>& P_N1, const S& node) {
  S dp = P_N1.derivative()(node);
  if (dp == S(0)) throw Error(ErrorCode::DegenerateEigenvalue, "node is not a simple zero");
  Matrix<S> out(static_cast<std::size_t>(sk.q), static_cast<std::size_t>(sk.p));
  for (int b = 1; b <= sk.q; ++b)
    for (int a = 1; a <= sk.p; ++a) out(static_cast<std::size_t>(b - 1), static_cast<std::size_t>(a - 1)) = sk(b, a)(node) / dp;
  return out;
}

// (e^xi_b)^T (zI - T^{[N]})^{-1} e^nu_a for complex z, by a dense solve.
template <class S>
Matrix<std::complex<double>> resolvent_weyl(const BandedMatrix<S>& T, const InitialConditions<S>& ic, int N,
                                            std::complex<double> z) {
  using C = std::complex<double>;
  const int p = T.p(), q = T.q();
  auto t = T.truncate(N);
  auto en = e_nu(ic, N);
  auto ex = e_xi(ic, N);
  const auto n = static_cast<std::size_t>(N) + 1;
  Matrix<C> m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = (r == c ? z : C(0.0)) - C(to_double(t(r, c)));
  Matrix<C> rhs(n, static_cast<std::size_t>(p), C(0.0));
  for (int a = 0; a < p; ++a)
    for (std::size_t r = 0; r < n; ++r) rhs(r, static_cast<std::size_t>(a)) = C(to_double(en[static_cast<std::size_t>(a)][r]));
  Matrix<C> x;
  try {
    x = solve(m, rhs);
  } catch (const Error&) {
    throw Error(ErrorCode::EvaluationOnSpectrum, "resolvent is singular at z");
  }
  Matrix<C> out(static_cast<std::size_t>(q), static_cast<std::size_t>(p), C(0.0));
  for (int b = 0; b < q; ++b)
    for (int a = 0; a < p; ++a)
      for (std::size_t r = 0; r < n; ++r)
        out(static_cast<std::size_t>(b), static_cast<std::size_t>(a)) += C(to_double(ex[static_cast<std::size_t>(b)][r])) * x(r, static_cast<std::size_t>(a));
  return out;
}

// max_{b,a} |S^{[2N]}_{b,a}(z) - S^{[N]}_{b,a}(z)| for each N in Ns.
template <class S>
std::vector<double> weyl_telescoping(const BandedMatrix<S>& T, const InitialConditions<S>& ic, const std::vector<int>& Ns,
                                     std::complex<double> z) {
  std::vector<double> out;
  for (int N : Ns) {
    auto s1 = resolvent_weyl(T, ic, N, z);
    auto s2 = resolvent_weyl(T, ic, 2 * N, z);
    out.push_back(max_abs(s2 - s1));
  }
  return out;
}

inline constexpr int kInfiniteOrder = std::numeric_limits<int>::max();

// Orders at infinity of the Hermite-Pade residuals. The residual of
// sum_b B^{(b)}_n(z) psihat_{b,a}(z) is sum_{j>=0} c_j z^{-(j+1)} with
// c_j = sum_b sum_i [z^i]B^{(b)}_n m^{(b,a)}_{i+j}; its order is the first j
// with c_j != 0, plus one. The series is scanned up to `depth` terms and
// kInfiniteOrder reported when all vanish.
struct HermitePadeOrders {
  int n = 0;
  std::vector<int> type2;           // per a: order of sum_b B_n psihat_{b,a} - R
  std::vector<int> type2_expected;  // n_a + 1
  std::vector<int> type1;           // per b: order of sum_a psihat_{b,a} A_n - R
  std::vector<int> type1_expected;  // m_b + 1
  bool pass() const {
    for (std::size_t i = 0; i < type2.size(); ++i)
      if (type2[i] < type2_expected[i]) return false;
    for (std::size_t i = 0; i < type1.size(); ++i)
      if (type1[i] < type1_expected[i]) return false;
    return true;
  }
};

inline int multi_index(int n, int index, int width) { return ceil_div(n + 1 - index, width); }

template <class S>
HermitePadeOrders hermite_pade_order(const RecursionFamilies<S>& fam, const std::vector<std::vector<std::vector<S>>>& moments,
                                     int n, int depth, double tol = 0.0) {
  const int p = fam.p, q = fam.q;
  if (n > fam.length) throw Error(ErrorCode::InsufficientLength, "families shorter than n");
  HermitePadeOrders out;
  out.n = n;
  auto moment = [&](int b, int a, int k) -> const S& {
    const auto& seq = moments[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
    if (k >= static_cast<int>(seq.size())) throw Error(ErrorCode::InsufficientLength, "not enough moments for the requested depth");
    return seq[static_cast<std::size_t>(k)];
  };
  auto order_of = [&](auto coefficient) {
    for (int j = 0; j < depth; ++j)
      if (magnitude(coefficient(j)) > tol) return j + 1;
    return kInfiniteOrder;
  };
  for (int a = 0; a < p; ++a) {
    out.type2.push_back(order_of([&](int j) {
      S c(0);
      for (int b = 0; b < q; ++b) {
        const auto& B = fam.B[static_cast<std::size_t>(b)][static_cast<std::size_t>(n)];
        for (int i = 0; i <= B.degree(); ++i) c += B[static_cast<std::size_t>(i)] * moment(b, a, i + j);
      }
      return c;
    }));
    out.type2_expected.push_back(multi_index(n, a + 1, p) + 1);
  }
  for (int b = 0; b < q; ++b) {
    out.type1.push_back(order_of([&](int j) {
      S c(0);
      for (int a = 0; a < p; ++a) {
        const auto& A = fam.A[static_cast<std::size_t>(a)][static_cast<std::size_t>(n)];
        for (int i = 0; i <= A.degree(); ++i) c += A[static_cast<std::size_t>(i)] * moment(b, a, i + j);
      }
      return c;
    }));
    out.type1_expected.push_back(multi_index(n, b + 1, q) + 1);
  }
  return out;
}

// Right-continuous step function: value(x) is the total mass of nodes <= x.
template <class S>
struct StepFunction {
  std::vector<S> jumps_at;  // ascending
  std::vector<S> values;    // value on [jumps_at[i], jumps_at[i+1])

  S operator()(const S& x) const {
    S v(0);
    for (std::size_t i = 0; i < jumps_at.size(); ++i)
      if (!(x < jumps_at[i])) v = values[i];
    return v;
  }
  S total() const { return values.empty() ? S(0) : values.back(); }
  bool nondecreasing() const {
    S prev(0);
    for (const auto& v : values) {
      if (v < prev) return false;
      prev = v;
    }
    return true;
  }
};

template <class S>
struct MarginalSteps {
  std::vector<StepFunction<S>> phi;        // per b, from rho
  std::vector<StepFunction<S>> phi_tilde;  // per a, from mu
};

template <class S>
StepFunction<S> step_function(const std::vector<S>& nodes, const std::vector<S>& weights) {
  std::vector<std::size_t> order(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return nodes[x] < nodes[y]; });
  StepFunction<S> f;
  S acc(0);
  for (auto i : order) {
    acc += weights[i];
    f.jumps_at.push_back(nodes[i]);
    f.values.push_back(acc);
  }
  return f;
}

template <class S>
MarginalSteps<S> marginal_step_functions(const SpectralData<S>& sd) {
  MarginalSteps<S> out;
  for (int b = 0; b < sd.q; ++b) out.phi.push_back(step_function(sd.eigenvalues, sd.rho.col(static_cast<std::size_t>(b))));
  for (int a = 0; a < sd.p; ++a) out.phi_tilde.push_back(step_function(sd.eigenvalues, sd.mu.col(static_cast<std::size_t>(a))));
  return out;
}

// psi_{b,a} as a step function of the measure itself.
template <class S>
StepFunction<S> measure_step_function(const DiscreteMeasureMatrix<S>& dm, int b, int a) {
  std::vector<S> w;
  for (int k = 0; k < dm.size(); ++k) w.push_back(dm.mass(k, b, a));
  return step_function(dm.nodes, w);
}

}  // namespace specband
