#pragma once

#include <algorithm>
#include <vector>

#include "specband/measures.hpp"

namespace specband {

// Scalar-indexed block-Hankel moment matrix: entry (n q + b - 1, m p + a - 1)
// is the moment of order n + m of psi_{b,a}.
template <class S>
struct MomentMatrix {
  int p = 1;
  int q = 1;
  Matrix<S> m;

  int size() const { return static_cast<int>(m.rows()); }
};

// moments[b-1][a-1][k] must reach k = 2 (size - 1) / min(p, q).
template <class S>
MomentMatrix<S> moment_matrix(const std::vector<std::vector<std::vector<S>>>& moments, int p, int q, int size) {
  MomentMatrix<S> out;
  out.p = p;
  out.q = q;
  out.m = Matrix<S>(static_cast<std::size_t>(size), static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) {
      const auto& seq = moments[static_cast<std::size_t>(i % q)][static_cast<std::size_t>(j % p)];
      const auto k = static_cast<std::size_t>(i / q + j / p);
      if (k >= seq.size()) throw Error(ErrorCode::InsufficientLength, "not enough moments for the moment matrix");
      out.m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = seq[k];
    }
  return out;
}

template <class S>
MomentMatrix<S> moment_matrix(const DiscreteMeasureMatrix<S>& dm, int size) {
  const int K = 2 * ((size - 1) / std::min(dm.p, dm.q)) + 1;
  return moment_matrix(discrete_moments(dm, K), dm.p, dm.q, size);
}

// Largest violation of the block-Hankel law M_{n+1,m} = M_{n,m+1}, i.e.
// entry (i + q, j) against entry (i, j + p).
template <class S>
double hankel_defect(const MomentMatrix<S>& mm) {
  double worst = 0.0;
  const int s = mm.size();
  for (int i = 0; i + mm.q < s; ++i)
    for (int j = 0; j + mm.p < s; ++j)
      worst = std::max(worst, magnitude(mm.m(static_cast<std::size_t>(i + mm.q), static_cast<std::size_t>(j)) -
                                        mm.m(static_cast<std::size_t>(i), static_cast<std::size_t>(j + mm.p))));
  return worst;
}

// M = L^{-1} U^{-1} with L lower and U upper triangular.
template <class S>
struct GaussBorelFactors {
  int p = 1;
  int q = 1;
  Matrix<S> L;
  Matrix<S> U;
  Matrix<S> L_inv;  // unit lower triangular Doolittle factor
  Matrix<S> U_inv;  // upper triangular Doolittle factor

  int size() const { return static_cast<int>(L.rows()); }
};

namespace detail {

template <class S>
Matrix<S> invert_triangular(const Matrix<S>& t, bool lower) {
  const std::size_t n = t.rows();
  Matrix<S> out(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    if (lower) {
      for (std::size_t i = c; i < n; ++i) {
        S acc = i == c ? S(1) : S(0);
        for (std::size_t k = c; k < i; ++k) acc -= t(i, k) * out(k, c);
        out(i, c) = acc / t(i, i);
      }
    } else {
      for (std::size_t ii = c + 1; ii-- > 0;) {
        S acc = ii == c ? S(1) : S(0);
        for (std::size_t k = ii + 1; k <= c; ++k) acc -= t(ii, k) * out(k, c);
        out(ii, c) = acc / t(ii, ii);
      }
    }
  }
  return out;
}

}  // namespace detail

// Doolittle LU without pivoting. In floating point a pivot is treated as zero
// when it falls below tol times the original diagonal entry, since the
// Schur complement has then lost every significant digit.
template <class S>
GaussBorelFactors<S> gauss_borel(const MomentMatrix<S>& mm, double tol = 1e-15) {
  const auto n = static_cast<std::size_t>(mm.size());
  Matrix<S> lo = Matrix<S>::identity(n), up = mm.m;
  for (std::size_t k = 0; k < n; ++k) {
    const S& piv = up(k, k);
    bool singular = is_exact_v<S> ? piv == S(0) : magnitude(piv) <= tol * magnitude(mm.m(k, k));
    if (singular) throw Error(ErrorCode::SingularLeadingMinor, "leading principal minor " + std::to_string(k + 1) + " vanishes");
    for (std::size_t i = k + 1; i < n; ++i) {
      S f = up(i, k) / piv;
      lo(i, k) = f;
      for (std::size_t j = k; j < n; ++j) up(i, j) -= f * up(k, j);
    }
  }
  GaussBorelFactors<S> out;
  out.p = mm.p;
  out.q = mm.q;
  out.L_inv = lo;
  out.U_inv = up;
  out.L = detail::invert_triangular(lo, true);
  out.U = detail::invert_triangular(up, false);
  return out;
}

// Recovered recursion matrix from both factors: rows 0..S-1-q come from
// L shift_q L^{-1} and columns 0..S-1-p from U^{-1} shift_p^T U; entries
// outside both ranges are left at zero and flagged in `known`.
template <class S>
struct RecoveredMatrix {
  int p = 1;
  int q = 1;
  Matrix<S> from_L;
  Matrix<S> from_U;
  Matrix<S> t;          // merged
  Matrix<int> known;    // 1 where at least one formula applies
  double factor_disagreement = 0.0;
  double band_violation = 0.0;
};

template <class S>
RecoveredMatrix<S> recover_recursion_matrix(const GaussBorelFactors<S>& f) {
  const int p = f.p, q = f.q, s = f.size();
  if (s < p + q + 2) throw Error(ErrorCode::WindowTooSmall, "window must be at least p + q + 2");
  const auto n = static_cast<std::size_t>(s);
  RecoveredMatrix<S> out;
  out.p = p;
  out.q = q;
  out.from_L = Matrix<S>(n, n);
  out.from_U = Matrix<S>(n, n);
  out.t = Matrix<S>(n, n);
  out.known = Matrix<int>(n, n, 0);
  for (int i = 0; i + q < s; ++i)
    for (int j = 0; j < s; ++j) {
      S acc(0);
      for (int k = 0; k <= i; ++k) acc += f.L(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) * f.L_inv(static_cast<std::size_t>(k + q), static_cast<std::size_t>(j));
      out.from_L(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = acc;
    }
  for (int i = 0; i < s; ++i)
    for (int j = 0; j + p < s; ++j) {
      S acc(0);
      for (int k = 0; k <= j; ++k) acc += f.U_inv(static_cast<std::size_t>(i), static_cast<std::size_t>(k + p)) * f.U(static_cast<std::size_t>(k), static_cast<std::size_t>(j));
      out.from_U(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = acc;
    }
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      const auto r = static_cast<std::size_t>(i), c = static_cast<std::size_t>(j);
      bool byL = i + q < s, byU = j + p < s;
      if (byL && byU) out.factor_disagreement = std::max(out.factor_disagreement, magnitude(out.from_L(r, c) - out.from_U(r, c)));
      if (byL) out.t(r, c) = out.from_L(r, c);
      else if (byU) out.t(r, c) = out.from_U(r, c);
      out.known(r, c) = byL || byU;
      if ((byL || byU) && (j - i > q || i - j > p)) out.band_violation = std::max(out.band_violation, magnitude(out.t(r, c)));
    }
  return out;
}

// B = L X_{[q]} and A = X_{[p]}^T U: B^{(b)}_n collects L_{n,j} x^{j/q} over
// j = b-1 mod q, and A^{(a)}_m collects U_{j,m} x^{j/p} over j = a-1 mod p.
template <class S>
RecursionFamilies<S> recovered_polynomials(const GaussBorelFactors<S>& f) {
  const int p = f.p, q = f.q, s = f.size();
  if (s < std::max(p, q)) throw Error(ErrorCode::WindowTooSmall, "window smaller than max(p, q)");
  RecursionFamilies<S> fam;
  fam.p = p;
  fam.q = q;
  fam.length = s - 1;
  fam.A.assign(static_cast<std::size_t>(p), {});
  fam.B.assign(static_cast<std::size_t>(q), {});
  for (int b = 0; b < q; ++b)
    for (int n = 0; n < s; ++n) {
      std::vector<S> c(static_cast<std::size_t>(n / q + 1), S(0));
      for (int j = b; j <= n; j += q) c[static_cast<std::size_t>(j / q)] = f.L(static_cast<std::size_t>(n), static_cast<std::size_t>(j));
      fam.B[static_cast<std::size_t>(b)].push_back(Polynomial<S>(c));
    }
  for (int a = 0; a < p; ++a)
    for (int m = 0; m < s; ++m) {
      std::vector<S> c(static_cast<std::size_t>(m / p + 1), S(0));
      for (int j = a; j <= m; j += p) c[static_cast<std::size_t>(j / p)] = f.U(static_cast<std::size_t>(j), static_cast<std::size_t>(m));
      fam.A[static_cast<std::size_t>(a)].push_back(Polynomial<S>(c));
    }
  fam.ic.nu = Matrix<S>(static_cast<std::size_t>(p), static_cast<std::size_t>(p));
  fam.ic.xi = Matrix<S>(static_cast<std::size_t>(q), static_cast<std::size_t>(q));
  for (int n = 0; n < p; ++n)
    for (int a = 0; a < p; ++a) fam.ic.nu(static_cast<std::size_t>(n), static_cast<std::size_t>(a)) = fam.A[static_cast<std::size_t>(a)][static_cast<std::size_t>(n)][0];
  for (int n = 0; n < q; ++n)
    for (int b = 0; b < q; ++b) fam.ic.xi(static_cast<std::size_t>(n), static_cast<std::size_t>(b)) = fam.B[static_cast<std::size_t>(b)][static_cast<std::size_t>(n)][0];
  return fam;
}

// The factorization fixes the diagonal of L to one, which makes every
// recovered extreme superdiagonal entry equal to one. The original operator in
// that gauge is D^{-1} T D with D_n = 1 for n < q and D_{n+q} = D_n / T_{n,n+q}.
template <class S>
std::vector<S> favard_gauge(const BandedMatrix<S>& T, int size) {
  const int q = T.q();
  std::vector<S> D(static_cast<std::size_t>(size), S(1));
  for (int n = q; n < size; ++n) D[static_cast<std::size_t>(n)] = D[static_cast<std::size_t>(n - q)] / T(n - q, n);
  return D;
}

template <class S>
struct FavardReport {
  int N = 0;
  int window = 0;  // interior window compared: indices < window
  int agreement_width = 0;  // largest w such that the leading w x w blocks agree
  double max_error = 0.0;   // over the interior window
  double factor_disagreement = 0.0;
  double band_violation = 0.0;
  double hankel_defect = 0.0;
  RecoveredMatrix<S> recovered;
  Matrix<S> expected;  // gauge-normalized original on the recovered size
  bool pass = false;
};

// Recovers the operator from the moments of the discrete measures of size N
// and compares it with the gauge-normalized original on the interior window
// of size N + 1 - max(p, q).
template <class S>
FavardReport<S> favard_round_trip(const BandedMatrix<S>& T, const std::vector<std::vector<std::vector<S>>>& moments, int N,
                                  double tol = 0.0) {
  const int p = T.p(), q = T.q();
  const int size = N + 1;
  FavardReport<S> rep;
  rep.N = N;
  auto mm = moment_matrix(moments, p, q, size);
  rep.hankel_defect = hankel_defect(mm);
  auto gb = gauss_borel(mm);
  rep.recovered = recover_recursion_matrix(gb);
  rep.factor_disagreement = rep.recovered.factor_disagreement;
  rep.band_violation = rep.recovered.band_violation;
  auto D = favard_gauge(T, size);
  const auto n = static_cast<std::size_t>(size);
  rep.expected = Matrix<S>(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rep.expected(i, j) = T(static_cast<int>(i), static_cast<int>(j)) * D[j] / D[i];
  rep.window = size - std::max(p, q);
  auto err = [&](std::size_t i, std::size_t j) {
    S e = rep.recovered.t(i, j) - rep.expected(i, j);
    return magnitude(e) / std::max(1.0, magnitude(rep.expected(i, j)));
  };
  for (std::size_t i = 0; i < static_cast<std::size_t>(rep.window); ++i)
    for (std::size_t j = 0; j < static_cast<std::size_t>(rep.window); ++j) rep.max_error = std::max(rep.max_error, err(i, j));
  rep.agreement_width = 0;
  for (int w = 1; w <= size; ++w) {
    bool ok = true;
    for (int i = 0; i < w && ok; ++i)
      for (int j = 0; j < w && ok; ++j) {
        const auto r = static_cast<std::size_t>(i), c = static_cast<std::size_t>(j);
        if (!rep.recovered.known(r, c) || err(r, c) > tol) ok = false;
      }
    if (!ok) break;
    rep.agreement_width = w;
  }
  rep.pass = rep.max_error <= tol && rep.factor_disagreement <= std::max(tol, 0.0) * std::max(1.0, max_abs(rep.expected)) &&
             rep.band_violation <= tol;
  return rep;
}

template <class S>
FavardReport<S> favard_round_trip(const BandedMatrix<S>& T, const DiscreteMeasureMatrix<S>& dm, double tol = 0.0) {
  const int N = dm.size() - 1;
  const int K = 2 * (N / std::min(T.p(), T.q())) + 1;
  return favard_round_trip(T, discrete_moments(dm, K), N, tol);
}

}  // namespace specband
