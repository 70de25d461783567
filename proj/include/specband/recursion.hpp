#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "specband/banded.hpp"

namespace specband {

// Lower unitriangular initial-condition matrices: column a of nu holds
// A^{(a)}_0..A^{(a)}_{p-1}, column b of xi holds B^{(b)}_0..B^{(b)}_{q-1}.
template <class S>
struct InitialConditions {
  Matrix<S> nu;
  Matrix<S> xi;

  static InitialConditions identity(int p, int q) {
    return {Matrix<S>::identity(static_cast<std::size_t>(p)), Matrix<S>::identity(static_cast<std::size_t>(q))};
  }

  int p() const { return static_cast<int>(nu.rows()); }
  int q() const { return static_cast<int>(xi.rows()); }

  void validate(double tol = 0.0) const {
    for (const auto* m : {&nu, &xi}) {
      if (!m->is_square()) throw Error(ErrorCode::ShapeViolation, "initial condition matrix must be square");
      for (std::size_t i = 0; i < m->rows(); ++i) {
        if (magnitude((*m)(i, i) - S(1)) > tol) throw Error(ErrorCode::ShapeViolation, "initial condition diagonal must be 1");
        for (std::size_t j = i + 1; j < m->cols(); ++j)
          if (magnitude((*m)(i, j)) > tol) throw Error(ErrorCode::ShapeViolation, "initial condition must be lower triangular");
      }
    }
  }

  template <class To>
  InitialConditions<To> convert() const {
    return {matrix_cast<To>(nu), matrix_cast<To>(xi)};
  }
};

inline int ceil_div(int a, int b) {
  // b > 0
  return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

// deg A^{(a)}_n = ceil((n+2-a)/p) - 1 and the same law for B with q.
inline int recursion_degree(int n, int index, int width) { return ceil_div(n + 2 - index, width) - 1; }

namespace detail {

// Runs the left and right recurrences for any value type V that supports
// addition, multiplication by entries of T and a "times x" map.
template <class V, class S, class MulX>
void run_recurrences(const BandedMatrix<S>& T, const InitialConditions<S>& ic, int length, MulX mulx,
                     std::vector<std::vector<V>>& A, std::vector<std::vector<V>>& B) {
  const int p = T.p(), q = T.q();
  if (ic.p() != p || ic.q() != q) throw Error(ErrorCode::ShapeViolation, "initial conditions do not match p, q");
  if (length < 0) throw Error(ErrorCode::IndexOutOfRange, "negative family length");
  if (length > T.horizon()) throw Error(ErrorCode::HorizonExceeded, "family length beyond horizon");
  const auto len = static_cast<std::size_t>(length) + 1;
  A.assign(static_cast<std::size_t>(p), std::vector<V>(len, V(S(0))));
  B.assign(static_cast<std::size_t>(q), std::vector<V>(len, V(S(0))));
  for (int a = 0; a < p; ++a)
    for (int n = 0; n < p && n <= length; ++n)
      A[static_cast<std::size_t>(a)][static_cast<std::size_t>(n)] = V(ic.nu(static_cast<std::size_t>(n), static_cast<std::size_t>(a)));
  for (int b = 0; b < q; ++b)
    for (int n = 0; n < q && n <= length; ++n)
      B[static_cast<std::size_t>(b)][static_cast<std::size_t>(n)] = V(ic.xi(static_cast<std::size_t>(n), static_cast<std::size_t>(b)));

  for (int n = 0; n + p <= length; ++n) {
    const S pivot = T(n + p, n);
    if (pivot == S(0)) throw Error(ErrorCode::ZeroExtremeDiagonal, "T_{n+p,n} vanishes");
    for (auto& seq : A) {
      V acc = mulx(seq[static_cast<std::size_t>(n)]);
      for (int j = std::max(0, n - q); j < n + p; ++j) acc -= seq[static_cast<std::size_t>(j)] * T(j, n);
      seq[static_cast<std::size_t>(n + p)] = acc / pivot;
    }
  }
  for (int n = 0; n + q <= length; ++n) {
    const S pivot = T(n, n + q);
    if (pivot == S(0)) throw Error(ErrorCode::ZeroExtremeDiagonal, "T_{n,n+q} vanishes");
    for (auto& seq : B) {
      V acc = mulx(seq[static_cast<std::size_t>(n)]);
      for (int j = std::max(0, n - p); j < n + q; ++j) acc -= T(n, j) * seq[static_cast<std::size_t>(j)];
      seq[static_cast<std::size_t>(n + q)] = acc / pivot;
    }
  }
}

}  // namespace detail

template <class S>
struct RecursionFamilies {
  int p = 1;
  int q = 1;
  int length = 0;  // largest generated index
  std::vector<std::vector<Polynomial<S>>> A;  // A[a-1][n]
  std::vector<std::vector<Polynomial<S>>> B;  // B[b-1][n]
  InitialConditions<S> ic;

  const Polynomial<S>& a(int index, int n) const { return A.at(static_cast<std::size_t>(index - 1)).at(static_cast<std::size_t>(n)); }
  const Polynomial<S>& b(int index, int n) const { return B.at(static_cast<std::size_t>(index - 1)).at(static_cast<std::size_t>(n)); }
};

// Values of every recursion polynomial at one abscissa.
template <class V>
struct FamilyValues {
  int p = 1;
  int q = 1;
  int length = 0;
  std::vector<std::vector<V>> A;
  std::vector<std::vector<V>> B;

  template <class To>
  FamilyValues<To> convert() const {
    FamilyValues<To> out{p, q, length, {}, {}};
    for (const auto& seq : A) {
      out.A.emplace_back();
      for (const auto& v : seq) out.A.back().push_back(scalar_cast<To>(v));
    }
    for (const auto& seq : B) {
      out.B.emplace_back();
      for (const auto& v : seq) out.B.back().push_back(scalar_cast<To>(v));
    }
    return out;
  }
};

template <class S>
RecursionFamilies<S> generate_families(const BandedMatrix<S>& T, const InitialConditions<S>& ic, int length) {
  RecursionFamilies<S> fam;
  fam.p = T.p();
  fam.q = T.q();
  fam.length = length;
  fam.ic = ic;
  detail::run_recurrences<Polynomial<S>>(T, ic, length, [](const Polynomial<S>& v) { return v.shifted(1); }, fam.A, fam.B);
  return fam;
}

// Pointwise evaluation of the recurrences, without forming coefficients.
template <class S>
FamilyValues<S> family_values(const BandedMatrix<S>& T, const InitialConditions<S>& ic, int length, const S& x) {
  FamilyValues<S> out;
  out.p = T.p();
  out.q = T.q();
  out.length = length;
  detail::run_recurrences<S>(T, ic, length, [&x](const S& v) { return S(v * x); }, out.A, out.B);
  return out;
}

template <class S>
FamilyValues<S> evaluate(const RecursionFamilies<S>& fam, const S& x) {
  FamilyValues<S> out;
  out.p = fam.p;
  out.q = fam.q;
  out.length = fam.length;
  for (const auto& seq : fam.A) {
    out.A.emplace_back();
    for (const auto& P : seq) out.A.back().push_back(P(x));
  }
  for (const auto& seq : fam.B) {
    out.B.emplace_back();
    for (const auto& P : seq) out.B.back().push_back(P(x));
  }
  return out;
}

// P_0..P_{N_max+1}, P_{N+1}(x) = det(xI - T^{[N]}). Each P_k is interpolated
// from values at integer points beyond the row-sum bound, where xI - T is
// strictly diagonally dominant so all leading minors come from one
// fraction-free pass per point.
template <class S>
std::vector<Polynomial<S>> characteristic_polys(const BandedMatrix<S>& T, int N_max) {
  static_assert(is_exact_v<S>, "characteristic_polys needs exact scalars");
  if (N_max < 0) throw Error(ErrorCode::IndexOutOfRange, "negative N_max");
  if (N_max > T.horizon()) throw Error(ErrorCode::HorizonExceeded, "N_max beyond horizon");
  const Matrix<S> t = T.window(N_max);
  const std::size_t n = t.rows();
  S bound(0);
  for (std::size_t i = 0; i < n; ++i) {
    S row(0);
    for (std::size_t j = 0; j < n; ++j) row += scalar_abs(t(i, j));
    if (row > bound) bound = row;
  }
  mpz_class start;
  mpz_fdiv_q(start.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
  start += 1;

  std::vector<S> xs;
  std::vector<std::vector<S>> minors;  // minors[j][k] = P_{k+1}(x_j)
  for (std::size_t j = 0; j <= n; ++j) {
    mpz_class xi = start + static_cast<long>(j);
    S x(xi);
    Matrix<S> m(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) m(r, c) = (r == c ? x : S(0)) - t(r, c);
    auto lm = leading_minors(m);
    if (!lm) throw Error(ErrorCode::SingularLeadingMinor, "unexpected zero minor at dominant point");
    xs.push_back(x);
    minors.push_back(std::move(*lm));
  }
  std::vector<Polynomial<S>> P{Polynomial<S>(S(1))};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<S> px(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(k) + 2);
    std::vector<S> py;
    for (std::size_t j = 0; j < k + 2; ++j) py.push_back(minors[j][k]);
    P.push_back(interpolate(px, py));
  }
  return P;
}

// Sign of P_k(x) = det(xI - T^{[k-1]}) at a floating point abscissa.
inline int char_poly_sign(const Matrix<double>& t, int k, double x) {
  if (k == 0) return 1;
  auto m = t.block(0, 0, static_cast<std::size_t>(k), static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = (i == j ? x : 0.0) - m(i, j);
  double d = det(m);
  return d > 0 ? 1 : (d < 0 ? -1 : 0);
}

template <class V>
struct DeterminantalValues {
  std::vector<V> Q;  // Q_{n,N}, n = 0..N+p
  std::vector<V> R;  // R_{n,N}, n = 0..N+q
};

// Q_{n,N} = det[A_n; A_{N+1}; ...; A_{N+p-1}] with rows indexed by a, and
// R_{n,N} likewise from B. Works for polynomial or scalar tables.
template <class V>
DeterminantalValues<V> determinantal_table(const std::vector<std::vector<V>>& A, const std::vector<std::vector<V>>& B,
                                           int N) {
  const int p = static_cast<int>(A.size()), q = static_cast<int>(B.size());
  const int length = static_cast<int>(A.front().size()) - 1;
  if (length < N + std::max(p, q)) throw Error(ErrorCode::InsufficientLength, "families too short for N");
  auto build = [N](const std::vector<std::vector<V>>& F, int w) {
    std::vector<V> out;
    Matrix<V> m(static_cast<std::size_t>(w), static_cast<std::size_t>(w));
    for (int i = 1; i < w; ++i)
      for (int a = 0; a < w; ++a)
        m(static_cast<std::size_t>(i), static_cast<std::size_t>(a)) = F[static_cast<std::size_t>(a)][static_cast<std::size_t>(N + i)];
    for (int n = 0; n <= N + w; ++n) {
      for (int a = 0; a < w; ++a) m(0, static_cast<std::size_t>(a)) = F[static_cast<std::size_t>(a)][static_cast<std::size_t>(n)];
      out.push_back(det(m));
    }
    return out;
  };
  return {build(A, p), build(B, q)};
}

template <class S>
struct DeterminantalBlocks {
  int N = 0;
  int p = 1;
  int q = 1;
  S alpha_N, beta_N, alpha_N1, beta_N1;
  Matrix<Polynomial<S>> A_N;  // [a][j] = A^{(a)}_{N+j}
  Matrix<Polynomial<S>> B_N;  // [j][b] = B^{(b)}_{N+j}
  Polynomial<S> det_A, det_B;
  Polynomial<S> P_N;   // alpha_N det A_N
  Polynomial<S> P_N1;  // (-1)^{p-1} alpha_{N+1} Q_{N+p,N}
  std::vector<Polynomial<S>> Q;
  std::vector<Polynomial<S>> R;
};

template <class S>
DeterminantalBlocks<S> determinantal_blocks(const RecursionFamilies<S>& fam, const BandedMatrix<S>& T, int N) {
  const int p = fam.p, q = fam.q;
  if (fam.length < N + std::max(p, q)) throw Error(ErrorCode::InsufficientLength, "families too short for N");
  DeterminantalBlocks<S> blk;
  blk.N = N;
  blk.p = p;
  blk.q = q;
  auto ep = extreme_products(T, N + 1);
  blk.alpha_N = ep.alpha[static_cast<std::size_t>(N)];
  blk.beta_N = ep.beta[static_cast<std::size_t>(N)];
  blk.alpha_N1 = ep.alpha[static_cast<std::size_t>(N) + 1];
  blk.beta_N1 = ep.beta[static_cast<std::size_t>(N) + 1];
  blk.A_N = Matrix<Polynomial<S>>(static_cast<std::size_t>(p), static_cast<std::size_t>(p));
  for (int a = 0; a < p; ++a)
    for (int j = 0; j < p; ++j) blk.A_N(static_cast<std::size_t>(a), static_cast<std::size_t>(j)) = fam.A[static_cast<std::size_t>(a)][static_cast<std::size_t>(N + j)];
  blk.B_N = Matrix<Polynomial<S>>(static_cast<std::size_t>(q), static_cast<std::size_t>(q));
  for (int j = 0; j < q; ++j)
    for (int b = 0; b < q; ++b) blk.B_N(static_cast<std::size_t>(j), static_cast<std::size_t>(b)) = fam.B[static_cast<std::size_t>(b)][static_cast<std::size_t>(N + j)];
  blk.det_A = det(blk.A_N);
  blk.det_B = det(blk.B_N);
  auto table = determinantal_table(fam.A, fam.B, N);
  blk.Q = std::move(table.Q);
  blk.R = std::move(table.R);
  blk.P_N = blk.det_A * blk.alpha_N;
  S sign_p = (p - 1) % 2 == 0 ? S(1) : S(-1);
  blk.P_N1 = blk.Q[static_cast<std::size_t>(N + p)] * (sign_p * blk.alpha_N1);
  return blk;
}

// Sum_{n<=N} Q_{n,N}(x) R_{n,N}(y) minus the Christoffel-Darboux closed form.
template <class S, class V = S>
V christoffel_darboux_check(const DeterminantalBlocks<S>& blk, const V& x, const V& y) {
  if (x == y) throw Error(ErrorCode::CoincidentPoints, "non-confluent form needs x != y");
  V sum = lift<V>(S(0));
  for (int n = 0; n <= blk.N; ++n) sum += blk.Q[static_cast<std::size_t>(n)](x) * blk.R[static_cast<std::size_t>(n)](y);
  V rhs = (blk.P_N1(x) * blk.P_N(y) - blk.P_N(x) * blk.P_N1(y)) / (lift<V>(S(blk.alpha_N * blk.beta_N)) * (x - y));
  return sum - rhs;
}

// Confluent form: Sum Q_{n,N}(x) R_{n,N}(x) against the Wronskian-type
// combination P'_{N+1}P_N - P'_N P_{N+1}.
template <class S, class V = S>
V christoffel_darboux_confluent(const DeterminantalBlocks<S>& blk, const V& x) {
  V sum = lift<V>(S(0));
  for (int n = 0; n <= blk.N; ++n) sum += blk.Q[static_cast<std::size_t>(n)](x) * blk.R[static_cast<std::size_t>(n)](x);
  V w = blk.P_N1.derivative()(x) * blk.P_N(x) - blk.P_N.derivative()(x) * blk.P_N1(x);
  return sum - w / lift<V>(S(blk.alpha_N * blk.beta_N));
}

}  // namespace specband
