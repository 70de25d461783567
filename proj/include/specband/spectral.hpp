#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "specband/factorization.hpp"
#include "specband/recursion.hpp"

namespace specband {

template <class X>
using CharSignFn = std::function<int(int, const X&)>;

// Bracket [lo, hi] around one root of P_k, with the sign of P_k at lo; an
// exact hit collapses it to a point.
template <class X>
struct RootBracket {
  X lo, hi;
  int sign_lo = 0;
  bool exact = false;

  X mid() const { return exact ? lo : X((lo + hi) / X(2)); }
};

template <class X>
struct IsolatedRoots {
  // levels[k-1]: brackets of the k roots of P_k, descending.
  std::vector<std::vector<RootBracket<X>>> levels;
  X lower, upper;

  std::vector<X> roots(int k) const {
    std::vector<X> out;
    for (const auto& b : levels.at(static_cast<std::size_t>(k - 1))) out.push_back(b.mid());
    return out;
  }
  std::vector<double> roots_double(int k) const {
    std::vector<double> out;
    for (const auto& b : levels.at(static_cast<std::size_t>(k - 1))) out.push_back(to_double(b.mid()));
    return out;
  }
  const std::vector<RootBracket<X>>& final_level() const { return levels.back(); }
};

namespace detail {

template <class X>
bool halve(RootBracket<X>& b, int k, const CharSignFn<X>& sign) {
  if (b.exact) return false;
  X m = b.mid();
  if (!(m > b.lo && m < b.hi)) return false;
  int s = sign(k, m);
  if (s == 0) {
    b.lo = b.hi = m;
    b.exact = true;
  } else if (s == b.sign_lo) {
    b.lo = m;
  } else {
    b.hi = m;
  }
  return true;
}

inline bool narrow_enough(const RootBracket<double>&) { return false; }

inline double separator(const RootBracket<double>& b) { return b.mid(); }

// Shortest dyadic inside the bracket, so that cut points do not inherit the
// full bit length of the bracket endpoints.
inline Rational separator(const RootBracket<Rational>& b) {
  if (b.exact) return b.lo;
  for (long e = -64;; ++e) {
    Rational scale = e >= 0 ? Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(e))
                            : Rational(1, mpz_class(1) << static_cast<mp_bitcnt_t>(-e));
    Rational t = b.lo * scale;
    mpz_class m;
    mpz_cdiv_q(m.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
    Rational cand = Rational(m) / scale;
    if (cand <= b.hi) return cand;
  }
}

// Relative width 2^-90, or absolute width 2^-1100 for roots near zero.
inline bool narrow_enough(const RootBracket<Rational>& b) {
  if (b.exact) return true;
  Rational width = b.hi - b.lo;
  Rational alo = ::abs(b.lo), ahi = ::abs(b.hi);
  Rational scale = std::max(alo, ahi);
  mpz_class big = mpz_class(1) << 90;
  if (width * Rational(big) <= scale) return true;
  mpz_class tiny = mpz_class(1) << 1100;
  return width * Rational(tiny) <= Rational(1);
}

}  // namespace detail

inline constexpr int kMaxBisectionSteps = 4000;

// Roots of P_1..P_{N+1} by bisection seeded with the previous level: the
// roots of P_k cut [lower, upper] into k+1 intervals across which the monic
// P_{k+1} must alternate in sign. A cut that lands on the wrong side of a
// nearby root of P_{k+1} triggers further refinement of the P_k bracket
// before interlacing is declared violated.
template <class X>
IsolatedRoots<X> interlaced_roots(const CharSignFn<X>& sign, int N, const X& lower, const X& upper) {
  if (!(lower < upper)) throw Error(ErrorCode::NotBracketed, "empty search interval");
  IsolatedRoots<X> out;
  out.lower = lower;
  out.upper = upper;
  std::vector<RootBracket<X>> prev;
  for (int k = 1; k <= N + 1; ++k) {
    // Going down from above every root the sign starts at +1 and flips at each cut.
    auto expected = [](std::size_t c) { return c % 2 == 0 ? 1 : -1; };
    const std::size_t ncuts = prev.size() + 2;
    if (sign(k, upper) != 1 || sign(k, lower) != expected(ncuts - 1))
      throw Error(ErrorCode::NotBracketed, "roots of P_" + std::to_string(k) + " escape the search interval");
    std::vector<X> cuts{upper};
    for (std::size_t c = 1; c + 1 < ncuts; ++c) {
      auto& br = prev[c - 1];
      int steps = 0;
      while (sign(k, detail::separator(br)) != expected(c)) {
        if (++steps > kMaxBisectionSteps || !detail::halve(br, k - 1, sign))
          throw Error(ErrorCode::InterlacingViolated,
                      "P_" + std::to_string(k) + " does not alternate at the roots of P_" + std::to_string(k - 1));
      }
      cuts.push_back(detail::separator(br));
    }
    cuts.push_back(lower);
    std::vector<RootBracket<X>> level;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      RootBracket<X> br{cuts[c + 1], cuts[c], expected(c + 1), false};
      for (int steps = 0; steps < kMaxBisectionSteps && !detail::narrow_enough(br); ++steps)
        if (!detail::halve(br, k, sign)) break;
      level.push_back(br);
    }
    for (std::size_t i = 0; i + 1 < level.size(); ++i)
      if (!(level[i].mid() > level[i + 1].mid())) throw Error(ErrorCode::DegenerateEigenvalue, "roots are not simple");
    out.levels.push_back(level);
    prev = level;
  }
  return out;
}

// Search interval from the absolute row sums of the truncation.
template <class S>
double gershgorin_bound(const Matrix<S>& t) {
  double bound = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < t.cols(); ++j) s += magnitude(t(i, j));
    bound = std::max(bound, s);
  }
  return bound + 1.0;
}

// Cauchy bound for the roots of a monic polynomial, as an integer.
inline Rational cauchy_bound(const Polynomial<Rational>& P) {
  Rational bound(1);
  for (int i = 0; i < P.degree(); ++i) bound = std::max(bound, Rational(1 + ::abs(P[i])));
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
  return Rational(c);
}

// Sign of a rational polynomial at dyadic points m / 2^e, evaluated with
// integer arithmetic on denominator-cleared coefficients.
class DyadicSignEvaluator {
 public:
  explicit DyadicSignEvaluator(const Polynomial<Rational>& P) {
    mpz_class l = 1;
    for (const auto& c : P.coefficients()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    for (const auto& c : P.coefficients()) {
      mpz_class v = c.get_num() * (l / c.get_den());
      c_.push_back(v);
    }
  }

  int operator()(const Rational& x) const {
    if (c_.empty()) return 0;
    const mpz_class& den = x.get_den();
    if (mpz_popcount(den.get_mpz_t()) != 1) return sgn(evaluate_general(x));
    const auto e = static_cast<mp_bitcnt_t>(mpz_sizeinbase(den.get_mpz_t(), 2) - 1);
    const mpz_class& m = x.get_num();
    const std::size_t n = c_.size() - 1;
    mpz_class acc = c_[n], term;
    for (std::size_t i = n; i-- > 0;) {
      acc *= m;
      mpz_mul_2exp(term.get_mpz_t(), c_[i].get_mpz_t(), e * static_cast<mp_bitcnt_t>(n - i));
      acc += term;
    }
    return sgn(acc);
  }

 private:
  Rational evaluate_general(const Rational& x) const {
    Rational acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + Rational(c_[i]);
    return acc;
  }

  std::vector<mpz_class> c_;
};

// Root isolation for P_1..P_{N+1} from exact coefficients (Ps[k] = P_k),
// using exact signs at dyadic rational abscissae.
inline IsolatedRoots<Rational> isolate_eigenvalues(const std::vector<Polynomial<Rational>>& Ps, int N) {
  if (static_cast<int>(Ps.size()) < N + 2) throw Error(ErrorCode::InsufficientLength, "too few characteristic polynomials");
  Rational bound(1);
  std::vector<DyadicSignEvaluator> evals;
  for (int k = 0; k <= N + 1; ++k) {
    evals.emplace_back(Ps[static_cast<std::size_t>(k)]);
    if (k > 0) bound = std::max(bound, cauchy_bound(Ps[static_cast<std::size_t>(k)]));
  }
  CharSignFn<Rational> sign = [&evals](int k, const Rational& x) { return evals[static_cast<std::size_t>(k)](x); };
  return interlaced_roots<Rational>(sign, N, Rational(-bound), bound);
}

// Eigenvalues of T^{[N]} (descending) from exact characteristic polynomials.
inline std::vector<double> eigenvalues(const std::vector<Polynomial<Rational>>& Ps, int N) {
  return isolate_eigenvalues(Ps, N).roots_double(N + 1);
}

// Floating point path: signs of leading minors of xI - T^{[N]} by LU.
inline IsolatedRoots<double> isolate_eigenvalues(const Matrix<double>& t) {
  int N = static_cast<int>(t.rows()) - 1;
  double bound = gershgorin_bound(t);
  CharSignFn<double> sign = [&t](int k, const double& x) { return char_poly_sign(t, k, x); };
  return interlaced_roots<double>(sign, N, -bound, bound);
}

// Simplest rational inside [lo, hi] by continued fractions.
inline Rational simplest_rational(Rational lo, Rational hi) {
  if (lo > hi) std::swap(lo, hi);
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  if (Rational(fl) == lo) return lo;
  if (Rational(fl + 1) <= hi) return Rational(fl + 1);
  Rational fl_q(fl);
  Rational inner = simplest_rational(Rational(1) / (hi - fl_q), Rational(1) / (lo - fl_q));
  return fl_q + Rational(1) / inner;
}

// Exact roots when every root of P is rational with a small denominator:
// the simplest rational in each bracket must annihilate P.
inline std::optional<std::vector<Rational>> exact_rational_roots(const Polynomial<Rational>& P,
                                                                 const std::vector<RootBracket<Rational>>& brackets) {
  std::vector<Rational> out;
  for (const auto& b : brackets) {
    Rational r = b.exact ? b.lo : simplest_rational(b.lo, b.hi);
    if (sgn(P(r)) != 0) return std::nullopt;
    out.push_back(r);
  }
  return out;
}

template <class S>
struct SpectralData {
  int N = 0;
  int p = 1;
  int q = 1;
  std::vector<S> eigenvalues;  // descending
  Matrix<S> mu;                // (N+1) x p
  Matrix<S> rho;               // (N+1) x q
  Matrix<S> W;                 // row k: left eigenvector w_k
  Matrix<S> U;                 // column k: right eigenvector u_k
  Matrix<S> kernel;            // (N+1) x 1: confluent kernel sum at each node
  InitialConditions<S> ic;
  S alpha_N, beta_N;

  template <class To>
  SpectralData<To> convert() const {
    SpectralData<To> out;
    out.N = N;
    out.p = p;
    out.q = q;
    for (const auto& v : eigenvalues) out.eigenvalues.push_back(scalar_cast<To>(v));
    out.mu = matrix_cast<To>(mu);
    out.rho = matrix_cast<To>(rho);
    out.W = matrix_cast<To>(W);
    out.U = matrix_cast<To>(U);
    out.kernel = matrix_cast<To>(kernel);
    out.ic = ic.template convert<To>();
    out.alpha_N = scalar_cast<To>(alpha_N);
    out.beta_N = scalar_cast<To>(beta_N);
    return out;
  }
};

namespace detail {

// Solves the unit lower triangular system m y = rhs.
template <class S>
std::vector<S> forward_substitute(const Matrix<S>& m, const std::vector<S>& rhs) {
  std::vector<S> y(rhs.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    S acc = rhs[i];
    for (std::size_t j = 0; j < i; ++j) acc -= m(i, j) * y[j];
    y[i] = acc / m(i, i);
  }
  return y;
}

}  // namespace detail

// Left/right eigenvectors and Christoffel numbers of T^{[N]} at the given
// (descending, simple) eigenvalues. u_k = beta_N R_{.,N}(lambda_k) and
// w_k = Q_{.,N}(lambda_k) / (beta_N K(lambda_k)) with K the confluent kernel
// sum; mu and rho come from triangular solves against nu and xi.
template <class S>
SpectralData<S> build_spectral_data(const BandedMatrix<S>& T, const InitialConditions<S>& ic, int N,
                                    const std::vector<S>& eig) {
  const int p = T.p(), q = T.q();
  if (static_cast<int>(eig.size()) != N + 1) throw Error(ErrorCode::ShapeViolation, "need N+1 eigenvalues");
  for (std::size_t k = 0; k + 1 < eig.size(); ++k)
    if (!(eig[k] > eig[k + 1])) throw Error(ErrorCode::DegenerateEigenvalue, "eigenvalues must be simple and descending");
  SpectralData<S> sd;
  sd.N = N;
  sd.p = p;
  sd.q = q;
  sd.eigenvalues = eig;
  sd.ic = ic;
  auto ep = extreme_products(T, N);
  sd.alpha_N = ep.alpha.back();
  sd.beta_N = ep.beta.back();
  const auto n = static_cast<std::size_t>(N) + 1;
  sd.mu = Matrix<S>(n, static_cast<std::size_t>(p));
  sd.rho = Matrix<S>(n, static_cast<std::size_t>(q));
  sd.W = Matrix<S>(n, n);
  sd.U = Matrix<S>(n, n);
  sd.kernel = Matrix<S>(n, 1);
  for (std::size_t k = 0; k < n; ++k) {
    auto vals = family_values(T, ic, N + std::max(p, q), eig[k]);
    auto dv = determinantal_table(vals.A, vals.B, N);
    S K(0);
    for (std::size_t i = 0; i < n; ++i) K += dv.Q[i] * dv.R[i];
    if (is_zero(K, 0.0)) throw Error(ErrorCode::DegenerateEigenvalue, "confluent kernel vanishes at an eigenvalue");
    sd.kernel(k, 0) = K;
    S scale = S(1) / (sd.beta_N * K);
    for (std::size_t i = 0; i < n; ++i) {
      sd.W(k, i) = dv.Q[i] * scale;
      sd.U(i, k) = sd.beta_N * dv.R[i];
    }
    std::vector<S> wp, uq;
    for (int a = 0; a < p; ++a) wp.push_back(a < static_cast<int>(n) ? sd.W(k, static_cast<std::size_t>(a)) : S(0));
    for (int b = 0; b < q; ++b) uq.push_back(b < static_cast<int>(n) ? sd.U(static_cast<std::size_t>(b), k) : S(0));
    auto mu = detail::forward_substitute(ic.nu, wp);
    auto rho = detail::forward_substitute(ic.xi, uq);
    for (int a = 0; a < p; ++a) sd.mu(k, static_cast<std::size_t>(a)) = mu[static_cast<std::size_t>(a)];
    for (int b = 0; b < q; ++b) sd.rho(k, static_cast<std::size_t>(b)) = rho[static_cast<std::size_t>(b)];
  }
  return sd;
}

// Christoffel numbers from cofactors of the bordered determinants: mu_{k,a}
// is the cofactor of A^{(a)}_n in Q_{n,N} over beta_N K, rho_{k,b} is beta_N
// times the cofactor of B^{(b)}_n in R_{n,N}.
template <class S>
std::pair<Matrix<S>, Matrix<S>> christoffel_by_cofactors(const BandedMatrix<S>& T, const InitialConditions<S>& ic,
                                                         int N, const std::vector<S>& eig) {
  const int p = T.p(), q = T.q();
  auto ep = extreme_products(T, N);
  const S beta = ep.beta.back();
  const auto n = static_cast<std::size_t>(N) + 1;
  Matrix<S> mu(n, static_cast<std::size_t>(p)), rho(n, static_cast<std::size_t>(q));
  auto cofactor = [N](const std::vector<std::vector<S>>& F, int w, int col) {
    Matrix<S> m(static_cast<std::size_t>(w - 1), static_cast<std::size_t>(w - 1));
    for (int i = 1; i < w; ++i)
      for (int a = 0, c = 0; a < w; ++a) {
        if (a == col) continue;
        m(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(c++)) = F[static_cast<std::size_t>(a)][static_cast<std::size_t>(N + i)];
      }
    S d = det(m);
    return col % 2 == 0 ? d : S(-d);
  };
  for (std::size_t k = 0; k < n; ++k) {
    auto vals = family_values(T, ic, N + std::max(p, q), eig[k]);
    auto dv = determinantal_table(vals.A, vals.B, N);
    S K(0);
    for (std::size_t i = 0; i < n; ++i) K += dv.Q[i] * dv.R[i];
    for (int a = 0; a < p; ++a) mu(k, static_cast<std::size_t>(a)) = cofactor(vals.A, p, a) / (beta * K);
    for (int b = 0; b < q; ++b) rho(k, static_cast<std::size_t>(b)) = beta * cofactor(vals.B, q, b);
  }
  return {mu, rho};
}

// Spectral data of a rational operator: every formula is evaluated exactly
// at the isolated root approximations (relative accuracy 2^-90), or at the
// exact roots when they are rational, and rounded once at the end.
inline SpectralData<double> build_spectral_data_refined(const BandedMatrix<Rational>& T,
                                                       const InitialConditions<Rational>& ic, int N,
                                                       const IsolatedRoots<Rational>& roots) {
  return build_spectral_data(T, ic, N, roots.roots(N + 1)).convert<double>();
}

template <class S>
struct AdmissibleIC {
  Matrix<S> Lambda;   // p x p upper unitriangular, positive
  Matrix<S> Upsilon;  // q x q lower unitriangular, positive
  Matrix<S> Acal;
  Matrix<S> Bcal;
  InitialConditions<S> ic;
};

// Lambda column k is (1/r_k) L_1 ... L_{k-1} e_1 on size p, normalized by
// its last nonzero entry r_k = L_{k-1|0} L_{k-2|1} ... L_{1|k-2}; Upsilon
// row k is (1/s_k) e_1^T U_{k-1} ... U_1 on size q with the matching s_k.
// Then nu = (Lambda Acal)^{-T} and xi = (Bcal Upsilon)^{-1}.
template <class S>
AdmissibleIC<S> admissible_ic(const BidiagonalFactorization<S>& f, const Matrix<S>& Acal, const Matrix<S>& Bcal) {
  const int p = f.p, q = f.q;
  auto check = [](const Matrix<S>& m, std::size_t size, bool upper, const char* what) {
    if (m.rows() != size || m.cols() != size) throw Error(ErrorCode::ShapeViolation, std::string(what) + " has the wrong size");
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j) {
        const S& v = m(i, j);
        bool wrong = (i == j && v != S(1)) || (upper ? (i > j && v != S(0)) : (i < j && v != S(0))) || v < S(0);
        if (wrong) throw Error(ErrorCode::ShapeViolation, std::string(what) + " must be nonnegative unitriangular");
      }
  };
  check(Acal, static_cast<std::size_t>(p), true, "Acal");
  check(Bcal, static_cast<std::size_t>(q), false, "Bcal");
  f.validate();

  AdmissibleIC<S> out;
  out.Acal = Acal;
  out.Bcal = Bcal;
  const int np = p - 1, nq = q - 1;
  out.Lambda = Matrix<S>::identity(static_cast<std::size_t>(p));
  for (int k = 2; k <= p; ++k) {
    std::vector<S> v(static_cast<std::size_t>(p), S(0));
    v[0] = S(1);
    for (int j = k - 1; j >= 1; --j) v = f.lower_factor(j, np).apply(v);
    S r = v[static_cast<std::size_t>(k - 1)];
    for (int i = 0; i < p; ++i) out.Lambda(static_cast<std::size_t>(i), static_cast<std::size_t>(k - 1)) = v[static_cast<std::size_t>(i)] / r;
  }
  out.Upsilon = Matrix<S>::identity(static_cast<std::size_t>(q));
  for (int k = 2; k <= q; ++k) {
    Matrix<S> row(1, static_cast<std::size_t>(q));
    row(0, 0) = S(1);
    for (int j = k - 1; j >= 1; --j) row = row * f.upper_factor(j, nq);
    S s = row(0, static_cast<std::size_t>(k - 1));
    for (int i = 0; i < q; ++i) out.Upsilon(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(i)) = row(0, static_cast<std::size_t>(i)) / s;
  }
  out.ic.nu = inverse(Matrix<S>(out.Lambda * Acal)).transpose();
  out.ic.xi = inverse(Matrix<S>(Bcal * out.Upsilon));
  out.ic.validate(is_exact_v<S> ? 0.0 : 1e-12);
  return out;
}

struct SignProfile {
  int variations_min = 0;  // sign changes ignoring zeros
  int variations_max = 0;  // largest count over sign choices for zeros
  bool first_nonzero = false;
  bool last_nonzero = false;
  bool pass = false;
};

// Sign-variation counts of an eigenvector; the k-th largest eigenvalue of an
// oscillatory matrix has exactly k-1 variations with nonzero end entries.
template <class S>
SignProfile eigenvector_sign_profile(const std::vector<S>& v, int k, double tol = 0.0) {
  std::vector<int> s;
  for (const auto& x : v) {
    double m = to_double(x);
    s.push_back(std::fabs(m) <= tol ? 0 : (m > 0 ? 1 : -1));
  }
  if (std::all_of(s.begin(), s.end(), [](int x) { return x == 0; }))
    throw Error(ErrorCode::ZeroVector, "eigenvector vanishes");
  SignProfile out;
  int last = 0;
  for (int x : s) {
    if (x == 0) continue;
    if (last != 0 && x != last) ++out.variations_min;
    last = x;
  }
  // best[t]: most changes so far with the last entry having sign t (0: -, 1: +).
  const int NEG = -1000000;
  int best[2] = {NEG, NEG};
  for (std::size_t i = 0; i < s.size(); ++i) {
    int next[2] = {NEG, NEG};
    for (int t = 0; t < 2; ++t) {
      int sign = t == 0 ? -1 : 1;
      if (s[i] != 0 && s[i] != sign) continue;
      if (i == 0) {
        next[t] = 0;
        continue;
      }
      next[t] = std::max(best[t], best[1 - t] + 1);
    }
    best[0] = next[0];
    best[1] = next[1];
  }
  out.variations_max = std::max(best[0], best[1]);
  out.first_nonzero = s.front() != 0;
  out.last_nonzero = s.back() != 0;
  out.pass = out.variations_min == k - 1 && out.variations_max == k - 1 && out.first_nonzero && out.last_nonzero;
  return out;
}

}  // namespace specband
