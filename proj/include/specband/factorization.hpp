#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "specband/banded.hpp"

namespace specband {

// Ordered factors L_1..L_p, Delta, U_q..U_1 of a PBF. lower[k-1][i] holds
// L_{k|i}, the (i+1,i) entry of L_k; upper[k-1][i] holds U_{k|i}, the
// (i,i+1) entry of U_k. Sequences repeat cyclically past their length.
template <class S>
struct BidiagonalFactorization {
  int p = 1;
  int q = 1;
  std::vector<std::vector<S>> lower;
  std::vector<S> delta;
  std::vector<std::vector<S>> upper;
  int horizon = kUnboundedHorizon;

  S L(int k, int i) const { return cyclic(lower.at(static_cast<std::size_t>(k - 1)), i); }
  S U(int k, int i) const { return cyclic(upper.at(static_cast<std::size_t>(k - 1)), i); }
  S D(int i) const { return cyclic(delta, i); }

  void validate() const {
    if (p < 1 || q < 1) throw Error(ErrorCode::ShapeViolation, "p and q must be at least 1");
    if (lower.size() != static_cast<std::size_t>(p) || upper.size() != static_cast<std::size_t>(q))
      throw Error(ErrorCode::ShapeViolation, "factor count does not match p, q");
    auto check = [](const std::vector<S>& seq, const char* what) {
      if (seq.empty()) throw Error(ErrorCode::NonPositiveParameter, std::string(what) + " sequence is empty");
      for (const auto& v : seq)
        if (!(v > S(0))) throw Error(ErrorCode::NonPositiveParameter, std::string(what) + " parameter not positive");
    };
    for (const auto& seq : lower) check(seq, "L");
    for (const auto& seq : upper) check(seq, "U");
    check(delta, "delta");
  }

  Matrix<S> lower_factor(int k, int N) const {
    auto m = Matrix<S>::identity(static_cast<std::size_t>(N) + 1);
    for (int i = 0; i < N; ++i) m(static_cast<std::size_t>(i) + 1, static_cast<std::size_t>(i)) = L(k, i);
    return m;
  }
  Matrix<S> upper_factor(int k, int N) const {
    auto m = Matrix<S>::identity(static_cast<std::size_t>(N) + 1);
    for (int i = 0; i < N; ++i) m(static_cast<std::size_t>(i), static_cast<std::size_t>(i) + 1) = U(k, i);
    return m;
  }
  Matrix<S> delta_factor(int N) const {
    Matrix<S> m(static_cast<std::size_t>(N) + 1, static_cast<std::size_t>(N) + 1);
    for (int i = 0; i <= N; ++i) m(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = D(i);
    return m;
  }

  // Truncated product L_1..L_p Delta U_q..U_1, equal to T^{[N]}.
  Matrix<S> product(int N) const {
    auto m = Matrix<S>::identity(static_cast<std::size_t>(N) + 1);
    for (int k = 1; k <= p; ++k) m = m * lower_factor(k, N);
    m = m * delta_factor(N);
    for (int k = q; k >= 1; --k) m = m * upper_factor(k, N);
    return m;
  }

 private:
  static S cyclic(const std::vector<S>& seq, int i) {
    if (seq.empty() || i < 0) throw Error(ErrorCode::IndexOutOfRange, "factor parameter index");
    return seq[static_cast<std::size_t>(i) % seq.size()];
  }
};

// True when both factorizations carry the same parameters for the leading
// block of size N+1 (L, U indices < N, Delta indices <= N).
template <class S>
bool same_parameters(const BidiagonalFactorization<S>& a, const BidiagonalFactorization<S>& b, int N,
                     double tol = 0.0) {
  if (a.p != b.p || a.q != b.q) return false;
  auto eq = [tol](const S& x, const S& y) {
    if constexpr (is_exact_v<S>) return x == y;
    else return magnitude(x - y) <= tol;
  };
  for (int i = 0; i <= N; ++i) {
    if (!eq(a.D(i), b.D(i))) return false;
    if (i == N) break;
    for (int k = 1; k <= a.p; ++k)
      if (!eq(a.L(k, i), b.L(k, i))) return false;
    for (int k = 1; k <= a.q; ++k)
      if (!eq(a.U(k, i), b.U(k, i))) return false;
  }
  return true;
}

// Entry generator for the semi-infinite product: row i of the product is
// e_i^T pushed through every factor from the left.
template <class S>
BandedMatrix<S> assemble(const BidiagonalFactorization<S>& f, S shift = S(0)) {
  f.validate();
  auto gen = [f](int i, int j) -> S {
    const int lo = std::max(0, i - f.p);
    const int hi = i + f.q;
    std::vector<S> v(static_cast<std::size_t>(hi - lo + 1), S(0));
    auto at = [&](int c) -> S& { return v[static_cast<std::size_t>(c - lo)]; };
    at(i) = S(1);
    for (int k = 1; k <= f.p; ++k)
      for (int c = lo; c < hi; ++c) at(c) += at(c + 1) * f.L(k, c);
    for (int c = lo; c <= hi; ++c) at(c) *= f.D(c);
    for (int k = f.q; k >= 1; --k)
      for (int c = hi; c > lo; --c) at(c) += at(c - 1) * f.U(k, c - 1);
    return at(j);
  };
  int horizon = f.horizon >= kUnboundedHorizon ? kUnboundedHorizon : std::max(0, f.horizon - f.p - f.q);
  return BandedMatrix<S>::from_generator(f.p, f.q, horizon, gen, shift);
}

struct FactorizeFailure {
  std::string stage;  // "delta", "lower" or "upper"
  int factor = 0;     // 1-based factor number for lower/upper stages
  int index = 0;      // pivot or parameter index
  double value = 0.0;
  std::string value_text;
};

template <class S>
struct FactorizeOutcome {
  std::optional<BidiagonalFactorization<S>> factors;
  std::optional<FactorizeFailure> failure;
  explicit operator bool() const { return factors.has_value(); }
};

// The leading parameters L_{k|i}, i < p-k (and U_{k|i}, i < q-k) are not
// determined by the product; a gauge fixes them.
template <class S>
struct FactorizationGauge {
  std::vector<std::vector<S>> lower;
  std::vector<std::vector<S>> upper;
};

template <class S>
FactorizationGauge<S> gauge_of(const BidiagonalFactorization<S>& f) {
  FactorizationGauge<S> g;
  for (int k = 1; k <= f.p; ++k) {
    g.lower.emplace_back();
    for (int i = 0; i < f.p - k; ++i) g.lower.back().push_back(f.L(k, i));
  }
  for (int k = 1; k <= f.q; ++k) {
    g.upper.emplace_back();
    for (int i = 0; i < f.q - k; ++i) g.upper.back().push_back(f.U(k, i));
  }
  return g;
}

inline constexpr double kPivotTolerance = 1e-12;

namespace detail {

template <class S>
bool positive(const S& v) {
  if constexpr (is_exact_v<S>) return v > S(0);
  else return v > kPivotTolerance;
}

template <class S>
FactorizeFailure make_failure(std::string stage, int factor, int index, const S& value) {
  return FactorizeFailure{std::move(stage), factor, index, to_double(value), format_scalar(value)};
}

// Splits a unit lower triangular matrix with r subdiagonals into r unit
// lower bidiagonal factors, peeling from the left. gauge[k-1] supplies the
// free leading parameters of factor k, or a halving exponent picks them.
template <class S>
std::optional<FactorizeFailure> split_unit_lower(Matrix<S> M, int r, const std::vector<std::vector<S>>* gauge,
                                                 int halving, const char* stage, std::vector<std::vector<S>>& out) {
  const int n = static_cast<int>(M.rows());
  out.assign(static_cast<std::size_t>(r), std::vector<S>(static_cast<std::size_t>(std::max(0, n - 1)), S(0)));
  for (int k = 1; k < r; ++k) {
    const int width = r - k + 1;  // current number of subdiagonals of M
    auto& ell = out[static_cast<std::size_t>(k - 1)];
    Matrix<S> Mp = M;
    for (int i = 0; i + 1 < n; ++i) {
      if (i < width - 1) {
        if (gauge) {
          const auto& g = (*gauge)[static_cast<std::size_t>(k - 1)];
          if (static_cast<std::size_t>(i) >= g.size()) throw Error(ErrorCode::ShapeViolation, "gauge too short");
          ell[static_cast<std::size_t>(i)] = g[static_cast<std::size_t>(i)];
        } else {
          S g = M(static_cast<std::size_t>(i) + 1, static_cast<std::size_t>(i));
          for (int h = 0; h < halving; ++h) g /= S(2);
          ell[static_cast<std::size_t>(i)] = g;
        }
      } else {
        const auto col = static_cast<std::size_t>(i - width + 1);
        const S& den = Mp(static_cast<std::size_t>(i), col);
        if (!positive(den)) return make_failure(stage, k, i, den);
        ell[static_cast<std::size_t>(i)] = M(static_cast<std::size_t>(i) + 1, col) / den;
      }
      if (!positive(ell[static_cast<std::size_t>(i)])) return make_failure(stage, k, i, ell[static_cast<std::size_t>(i)]);
      // Row i+1 of the remaining factor.
      const auto row = static_cast<std::size_t>(i) + 1;
      for (std::size_t c = 0; c <= static_cast<std::size_t>(i); ++c) Mp(row, c) = M(row, c) - ell[static_cast<std::size_t>(i)] * Mp(row - 1, c);
    }
    M = std::move(Mp);
  }
  auto& last = out[static_cast<std::size_t>(r - 1)];
  for (int i = 0; i + 1 < n; ++i) {
    last[static_cast<std::size_t>(i)] = M(static_cast<std::size_t>(i) + 1, static_cast<std::size_t>(i));
    if (!positive(last[static_cast<std::size_t>(i)])) return make_failure(stage, r, i, last[static_cast<std::size_t>(i)]);
  }
  return std::nullopt;
}

}  // namespace detail

// Positive bidiagonal factorization of a (p,q)-banded truncation: LDU
// without pivoting, then each unit triangular part split into bidiagonal
// factors. Without an explicit gauge the free leading parameters are set to
// half the current first subdiagonal entry, halved again until the split
// succeeds or 60 attempts are exhausted.
template <class S>
FactorizeOutcome<S> neville_factorize(const Matrix<S>& t, int p, int q,
                                      const std::optional<FactorizationGauge<S>>& gauge = std::nullopt) {
  detail::require_square(t);
  if (p < 1 || q < 1) throw Error(ErrorCode::ShapeViolation, "p and q must be at least 1");
  const std::size_t n = t.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      bool outside = static_cast<long>(j) - static_cast<long>(i) > q || static_cast<long>(i) - static_cast<long>(j) > p;
      if (outside && !is_zero(t(i, j), kPivotTolerance)) throw Error(ErrorCode::ShapeViolation, "matrix is not (p,q)-banded");
    }

  FactorizeOutcome<S> result;
  Matrix<S> a = t;
  auto Lfull = Matrix<S>::identity(n);
  auto UfullT = Matrix<S>::identity(n);
  std::vector<S> delta(n);
  for (std::size_t k = 0; k < n; ++k) {
    const S pivot = a(k, k);
    if (!detail::positive(pivot)) {
      result.failure = detail::make_failure("delta", 0, static_cast<int>(k), pivot);
      return result;
    }
    delta[k] = pivot;
    for (std::size_t i = k + 1; i < n; ++i) {
      Lfull(i, k) = a(i, k) / pivot;
      UfullT(i, k) = a(k, i) / pivot;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= Lfull(i, k) * a(k, j);
  }

  const int attempts = gauge ? 1 : 60;
  for (int h = 1; h <= attempts; ++h) {
    BidiagonalFactorization<S> f;
    f.p = p;
    f.q = q;
    f.delta = delta;
    f.horizon = static_cast<int>(n) - 1;
    auto fail = detail::split_unit_lower(Lfull, p, gauge ? &gauge->lower : nullptr, h, "lower", f.lower);
    if (!fail) fail = detail::split_unit_lower(UfullT, q, gauge ? &gauge->upper : nullptr, h, "upper", f.upper);
    if (!fail) {
      if (n == 1) {
        // No off-diagonal parameters exist; store a placeholder so cyclic
        // access stays well defined.
        for (auto& seq : f.lower) seq = {S(1)};
        for (auto& seq : f.upper) seq = {S(1)};
      }
      result.factors = std::move(f);
      result.failure.reset();
      return result;
    }
    result.failure = fail;
  }
  return result;
}

template <class S>
struct DarbouxChain {
  Matrix<S> base;
  std::vector<Matrix<S>> plus;   // T^{[N,+a]}, a = 1..p
  std::vector<Matrix<S>> minus;  // T^{[N,-b]}, b = 1..q
  Polynomial<S> char_poly;       // det(xI - base)
  bool shares_char_poly = true;
};

// Cyclic permutations of the bidiagonal factors of a truncation.
template <class S>
DarbouxChain<S> darboux_chain(const Matrix<S>& t, const BidiagonalFactorization<S>& f, double tol = 1e-9) {
  detail::require_square(t);
  const int N = static_cast<int>(t.rows()) - 1;
  auto prod = f.product(N);
  bool match = true;
  if constexpr (is_exact_v<S>) match = prod == t;
  else match = max_abs(prod - t) <= tol * std::max(1.0, max_abs(t));
  if (!match) throw Error(ErrorCode::MismatchedFactorization, "factors do not reproduce the truncation");

  std::vector<Matrix<S>> factors;  // L_1..L_p, Delta, U_q..U_1
  for (int k = 1; k <= f.p; ++k) factors.push_back(f.lower_factor(k, N));
  factors.push_back(f.delta_factor(N));
  for (int k = f.q; k >= 1; --k) factors.push_back(f.upper_factor(k, N));

  auto rotated = [&](std::size_t start) {
    auto m = Matrix<S>::identity(static_cast<std::size_t>(N) + 1);
    for (std::size_t s = 0; s < factors.size(); ++s) m = m * factors[(start + s) % factors.size()];
    return m;
  };

  DarbouxChain<S> chain;
  chain.base = t;
  const auto P = static_cast<std::size_t>(f.p);
  for (std::size_t a = 1; a <= P; ++a) chain.plus.push_back(rotated(a));
  for (std::size_t b = 1; b <= static_cast<std::size_t>(f.q); ++b) chain.minus.push_back(rotated(factors.size() - b));

  chain.char_poly = characteristic_polynomial(t);
  auto same = [&](const Polynomial<S>& a) {
    if constexpr (is_exact_v<S>) return a == chain.char_poly;
    else return (a - chain.char_poly).max_abs_coefficient() <= tol * std::max(1.0, chain.char_poly.max_abs_coefficient());
  };
  for (const auto& m : chain.plus) chain.shares_char_poly = chain.shares_char_poly && same(characteristic_polynomial(m));
  for (const auto& m : chain.minus) chain.shares_char_poly = chain.shares_char_poly && same(characteristic_polynomial(m));
  return chain;
}

enum class TNVerdict { TotallyNonnegative, Oscillatory, NotTN, Inconclusive };

inline const char* to_string(TNVerdict v) {
  switch (v) {
    case TNVerdict::TotallyNonnegative: return "TotallyNonnegative";
    case TNVerdict::Oscillatory: return "Oscillatory";
    case TNVerdict::NotTN: return "NotTN";
    case TNVerdict::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

struct MinorWitness {
  std::vector<int> rows;  // 1-based
  std::vector<int> cols;  // 1-based
  double value = 0.0;
  std::string value_text;
};

struct TNCertificate {
  TNVerdict verdict = TNVerdict::Inconclusive;
  std::optional<MinorWitness> witness;
  std::string note;
};

enum class TNMode { Exhaustive, Criterion };

namespace detail {

inline bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

template <class S>
MinorWitness witness_of(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs, const S& v) {
  MinorWitness w;
  for (auto r : rs) w.rows.push_back(static_cast<int>(r) + 1);
  for (auto c : cs) w.cols.push_back(static_cast<int>(c) + 1);
  w.value = to_double(v);
  w.value_text = format_scalar(v);
  return w;
}

}  // namespace detail

inline constexpr int kExhaustiveMaxN = 7;

// Exhaustive mode enumerates every minor by increasing size (N <= 7).
// Criterion mode certifies through a successful positive factorization; a
// nonpositive elimination pivot means a nonpositive leading minor.
template <class S>
TNCertificate tn_certify(const Matrix<S>& t, TNMode mode, int p = 1, int q = 1, double tol = kPivotTolerance) {
  detail::require_square(t);
  const std::size_t n = t.rows();
  TNCertificate cert;
  if (mode == TNMode::Exhaustive) {
    if (n > static_cast<std::size_t>(kExhaustiveMaxN) + 1)
      throw Error(ErrorCode::SizeTooLarge, "exhaustive certification limited to N <= 7");
    auto negative = [tol](const S& v) {
      if constexpr (is_exact_v<S>) return v < S(0);
      else return v < -tol;
    };
    for (std::size_t k = 1; k <= n; ++k) {
      std::vector<std::size_t> rs(k);
      for (std::size_t i = 0; i < k; ++i) rs[i] = i;
      do {
        std::vector<std::size_t> cs(k);
        for (std::size_t i = 0; i < k; ++i) cs[i] = i;
        do {
          S v = det(t.select(rs, cs));
          if (negative(v)) {
            cert.verdict = TNVerdict::NotTN;
            cert.witness = detail::witness_of(rs, cs, v);
            cert.note = "negative minor";
            return cert;
          }
        } while (detail::next_combination(cs, n));
      } while (detail::next_combination(rs, n));
    }
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    S d = det(t);
    if (is_zero(d, tol)) {
      cert.verdict = TNVerdict::NotTN;
      cert.witness = detail::witness_of(all, all, d);
      cert.note = "singular";
      return cert;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      auto pos = [tol](const S& v) {
        if constexpr (is_exact_v<S>) return v > S(0);
        else return v > tol;
      };
      if (!pos(t(i + 1, i)) || !pos(t(i, i + 1))) {
        cert.verdict = TNVerdict::TotallyNonnegative;
        cert.note = "first sub- or superdiagonal not positive";
        return cert;
      }
    }
    cert.verdict = TNVerdict::Oscillatory;
    return cert;
  }

  auto outcome = neville_factorize(t, p, q);
  if (outcome) {
    cert.verdict = TNVerdict::Oscillatory;
    cert.note = "positive bidiagonal factorization";
    return cert;
  }
  const auto& fail = *outcome.failure;
  if (fail.stage == "delta") {
    std::vector<std::size_t> lead(static_cast<std::size_t>(fail.index) + 1);
    for (std::size_t i = 0; i < lead.size(); ++i) lead[i] = i;
    cert.verdict = TNVerdict::NotTN;
    cert.witness = detail::witness_of(lead, lead, det(t.select(lead, lead)));
    cert.note = "nonpositive leading principal minor";
  } else {
    cert.verdict = TNVerdict::Inconclusive;
    cert.note = "no positive bidiagonal factorization found at stage " + fail.stage;
  }
  return cert;
}

template <class S>
struct ShiftOutcome {
  std::optional<S> shift;
  std::optional<S> s_max_tried;
  explicit operator bool() const { return shift.has_value(); }
};

inline constexpr long kShiftGridSteps = 1L << 20;

// Smallest grid shift s = s_max * j / 2^20 for which T+sI truncated at
// N_probe factors positively; bisection assumes success is monotone in s.
template <class S>
ShiftOutcome<S> shift_to_pbf(const BandedMatrix<S>& T, int N_probe, const S& s_max) {
  if (s_max < S(0)) throw Error(ErrorCode::ShapeViolation, "s_max must be nonnegative");
  auto base = T.with_shift(S(0));
  auto works = [&](long j) {
    S s = s_max * S(j) / S(kShiftGridSteps);
    return static_cast<bool>(neville_factorize(base.with_shift(s).truncate(N_probe), T.p(), T.q()));
  };
  ShiftOutcome<S> out;
  if (works(0)) {
    out.shift = S(0);
    return out;
  }
  if (!works(kShiftGridSteps)) {
    out.s_max_tried = s_max;
    return out;
  }
  long lo = 0, hi = kShiftGridSteps;  // works(lo) false, works(hi) true
  while (hi - lo > 1) {
    long mid = lo + (hi - lo) / 2;
    if (works(mid)) hi = mid;
    else lo = mid;
  }
  out.shift = s_max * S(hi) / S(kShiftGridSteps);
  return out;
}

}  // namespace specband
