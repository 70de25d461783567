#pragma once

#include <algorithm>
#include <climits>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "specband/numerics.hpp"

namespace specband {

// Horizon used when a generator is defined for every index (cyclic bands).
inline constexpr int kUnboundedHorizon = INT_MAX / 4;

// Semi-infinite (p,q)-banded matrix. Entries come from either explicit
// per-diagonal sequences or an on-demand generator; sequences shorter than
// needed repeat cyclically. Entries with max(i,j) <= horizon are defined.
// A shift s is stored separately and added to the diagonal on access.
template <class S>
class BandedMatrix {
 public:
  // Unshifted entry (i,j) for |i-j| inside the band.
  using Generator = std::function<S(int, int)>;
  // Diagonal offset k = j - i in [-p, q] -> sequence indexed by min(i,j).
  using BandMap = std::map<int, std::vector<S>>;

  BandedMatrix() = default;

  static BandedMatrix from_bands(int p, int q, BandMap bands, int horizon = kUnboundedHorizon, S shift = S(0)) {
    check_shape(p, q, horizon, shift);
    for (const auto& [k, seq] : bands) {
      if (k < -p || k > q) throw Error(ErrorCode::ShapeViolation, "band offset outside [-p, q]");
      if (seq.empty()) throw Error(ErrorCode::ShapeViolation, "empty band sequence");
    }
    for (int k : {-p, q}) {
      auto it = bands.find(k);
      if (it == bands.end()) throw Error(ErrorCode::ZeroExtremeDiagonal, "missing extreme diagonal");
      for (const auto& v : it->second)
        if (v == S(0)) throw Error(ErrorCode::ZeroExtremeDiagonal, "extreme diagonal entry is zero");
    }
    auto shared = std::make_shared<const BandMap>(std::move(bands));
    BandedMatrix m;
    m.p_ = p;
    m.q_ = q;
    m.horizon_ = horizon;
    m.shift_ = shift;
    m.bands_ = shared;
    m.gen_ = [shared](int i, int j) -> S {
      auto it = shared->find(j - i);
      if (it == shared->end()) return S(0);
      const auto& seq = it->second;
      return seq[static_cast<std::size_t>(std::min(i, j)) % seq.size()];
    };
    return m;
  }

  static BandedMatrix from_generator(int p, int q, int horizon, Generator gen, S shift = S(0)) {
    check_shape(p, q, horizon, shift);
    BandedMatrix m;
    m.p_ = p;
    m.q_ = q;
    m.horizon_ = horizon;
    m.shift_ = shift;
    m.gen_ = std::move(gen);
    return m;
  }

  int p() const { return p_; }
  int q() const { return q_; }
  int horizon() const { return horizon_; }
  const S& shift() const { return shift_; }
  bool has_explicit_bands() const { return static_cast<bool>(bands_); }
  const BandMap& bands() const { return *bands_; }

  BandedMatrix with_shift(const S& s) const {
    if (s < S(0)) throw Error(ErrorCode::ShapeViolation, "shift must be nonnegative");
    BandedMatrix m = *this;
    m.shift_ = s;
    return m;
  }

  S unshifted(int i, int j) const {
    check_index(i, j);
    if (j - i > q_ || i - j > p_) return S(0);
    return gen_(i, j);
  }

  S operator()(int i, int j) const {
    S v = unshifted(i, j);
    if (i == j) v += shift_;
    return v;
  }

  // Leading (N+1)x(N+1) block including the shift.
  Matrix<S> truncate(int N) const {
    if (N < 0) throw Error(ErrorCode::IndexOutOfRange, "negative truncation size");
    if (static_cast<long>(N) + p_ > horizon_) throw Error(ErrorCode::HorizonExceeded, "N + p exceeds horizon");
    return window(N);
  }

  Matrix<S> window(int N) const {
    auto n = static_cast<std::size_t>(N) + 1;
    Matrix<S> t(n, n);
    for (int i = 0; i <= N; ++i)
      for (int j = std::max(0, i - p_); j <= std::min(N, i + q_); ++j)
        t(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = (*this)(i, j);
    return t;
  }

  // y = T^{[M]} x for a vector x of length M+1.
  std::vector<S> apply_truncated(const std::vector<S>& x) const {
    int M = static_cast<int>(x.size()) - 1;
    std::vector<S> y(x.size(), S(0));
    for (int i = 0; i <= M; ++i) {
      S acc(0);
      for (int j = std::max(0, i - p_); j <= std::min(M, i + q_); ++j) acc += (*this)(i, j) * x[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
  }

  // Crude boundedness proxy: largest absolute row sum over the first rows.
  double row_sum_bound(int max_rows = 512) const {
    int last = std::min(horizon_ - q_, max_rows);
    double best = 0.0;
    for (int i = 0; i <= last; ++i) {
      double s = 0.0;
      for (int j = std::max(0, i - p_); j <= i + q_; ++j) s += magnitude((*this)(i, j));
      best = std::max(best, s);
    }
    return best;
  }

  template <class To>
  BandedMatrix<To> convert() const {
    if (bands_) {
      typename BandedMatrix<To>::BandMap out;
      for (const auto& [k, seq] : *bands_) {
        std::vector<To> v;
        for (const auto& x : seq) v.push_back(scalar_cast<To>(x));
        out[k] = std::move(v);
      }
      return BandedMatrix<To>::from_bands(p_, q_, std::move(out), horizon_, scalar_cast<To>(shift_));
    }
    auto gen = gen_;
    return BandedMatrix<To>::from_generator(
        p_, q_, horizon_, [gen](int i, int j) { return scalar_cast<To>(gen(i, j)); }, scalar_cast<To>(shift_));
  }

 private:
  static void check_shape(int p, int q, int horizon, const S& shift) {
    if (p < 1 || q < 1) throw Error(ErrorCode::ShapeViolation, "p and q must be at least 1");
    if (horizon < 0) throw Error(ErrorCode::ShapeViolation, "negative horizon");
    if (shift < S(0)) throw Error(ErrorCode::ShapeViolation, "shift must be nonnegative");
  }
  void check_index(int i, int j) const {
    if (i < 0 || j < 0) throw Error(ErrorCode::IndexOutOfRange, "negative matrix index");
    if (std::max(i, j) > horizon_) throw Error(ErrorCode::HorizonExceeded, "entry beyond horizon");
  }

  int p_ = 1;
  int q_ = 1;
  int horizon_ = 0;
  S shift_ = S(0);
  std::shared_ptr<const BandMap> bands_;
  Generator gen_;
};

template <class S>
struct ExtremeProducts {
  std::vector<S> alpha;
  std::vector<S> beta;
};

// alpha_N = (-1)^{(p-1)N} T_{p,0}...T_{N+p-1,N-1}, beta_N likewise with T_{n,n+q}.
template <class S>
ExtremeProducts<S> extreme_products(const BandedMatrix<S>& T, int N_max) {
  const int p = T.p(), q = T.q();
  if (static_cast<long>(N_max) + std::max(p, q) - 1 > T.horizon())
    throw Error(ErrorCode::HorizonExceeded, "extreme products beyond horizon");
  ExtremeProducts<S> out;
  out.alpha.push_back(S(1));
  out.beta.push_back(S(1));
  for (int N = 0; N < N_max; ++N) {
    S a = T(N + p, N) * out.alpha.back();
    S b = T(N, N + q) * out.beta.back();
    if (p % 2 == 0) a = -a;
    if (q % 2 == 0) b = -b;
    out.alpha.push_back(a);
    out.beta.push_back(b);
  }
  return out;
}

// Smallest truncation index whose leading block contains every walk of
// length n between the supports of two vectors.
inline int reach_bound(int support, int n, int p, int q) { return support + n * std::max(p, q); }

// left^T T^n right for the semi-infinite T, evaluated on truncation M.
template <class S>
S power_bracket(const BandedMatrix<S>& T, int n, const std::vector<S>& left, const std::vector<S>& right, int M) {
  if (n < 0) throw Error(ErrorCode::IndexOutOfRange, "negative power");
  int support = static_cast<int>(std::max(left.size(), right.size())) - 1;
  if (support < 0) return S(0);
  if (M < reach_bound(support, n, T.p(), T.q()))
    throw Error(ErrorCode::InsufficientTruncation, "truncation below reach bound");
  if (M > T.horizon()) throw Error(ErrorCode::HorizonExceeded, "bracket truncation beyond horizon");
  std::vector<S> v(static_cast<std::size_t>(M) + 1, S(0));
  std::copy(right.begin(), right.end(), v.begin());
  for (int k = 0; k < n; ++k) v = T.apply_truncated(v);
  S acc(0);
  for (std::size_t i = 0; i < left.size(); ++i) acc += left[i] * v[i];
  return acc;
}

}  // namespace specband
