#pragma once

#include <algorithm>
#include <complex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "specband/scalar.hpp"

namespace specband {

// Converts a coefficient of type S into the value type V used for evaluation.
template <class V, class S>
V lift(const S& s) {
  if constexpr (std::is_same_v<V, S>) {
    return s;
  } else if constexpr (std::is_same_v<V, std::complex<double>>) {
    return std::complex<double>(to_double(s), 0.0);
  } else {
    return scalar_cast<V>(s);
  }
}

// Dense univariate polynomial with ascending coefficients. The zero
// polynomial has no coefficients and degree -1.
template <class S>
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(const S& constant) : c_{constant} { trim(); }
  Polynomial(int constant) : c_{S(constant)} { trim(); }
  explicit Polynomial(std::vector<S> coefficients) : c_(std::move(coefficients)) { trim(); }

  static Polynomial monomial(int degree, const S& coefficient = S(1)) {
    std::vector<S> c(static_cast<std::size_t>(degree) + 1, S(0));
    c.back() = coefficient;
    return Polynomial(std::move(c));
  }
  static Polynomial x() { return monomial(1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<S>& coefficients() const { return c_; }

  S operator[](int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return S(0);
    return c_[static_cast<std::size_t>(k)];
  }
  S leading() const { return c_.empty() ? S(0) : c_.back(); }

  template <class V = S>
  V operator()(const V& x) const {
    V acc = lift<V>(S(0));
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + lift<V>(*it);
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<S> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * S(static_cast<long>(k));
    return Polynomial(std::move(d));
  }

  // Multiplication by x^k.
  Polynomial shifted(int k = 1) const {
    if (c_.empty()) return {};
    std::vector<S> c(static_cast<std::size_t>(k), S(0));
    c.insert(c.end(), c_.begin(), c_.end());
    return Polynomial(std::move(c));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), S(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), S(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator*=(const S& s) {
    for (auto& v : c_) v *= s;
    trim();
    return *this;
  }
  Polynomial& operator/=(const S& s) {
    for (auto& v : c_) v /= s;
    trim();
    return *this;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend Polynomial operator*(Polynomial a, const S& s) { return a *= s; }
  friend Polynomial operator*(const S& s, Polynomial a) { return a *= s; }
  friend Polynomial operator/(Polynomial a, const S& s) { return a /= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<S> c(a.c_.size() + b.c_.size() - 1, S(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  // Euclidean division; exact over a field.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
    if (d.is_zero()) throw Error(ErrorCode::IndexOutOfRange, "polynomial division by zero");
    std::vector<S> r = c_;
    int dd = d.degree();
    int qd = degree() - dd;
    if (qd < 0) return {Polynomial(), *this};
    std::vector<S> q(static_cast<std::size_t>(qd) + 1, S(0));
    for (int k = qd; k >= 0; --k) {
      S coef = r[static_cast<std::size_t>(k + dd)] / d.leading();
      q[static_cast<std::size_t>(k)] = coef;
      for (int j = 0; j <= dd; ++j) r[static_cast<std::size_t>(k + j)] -= coef * d.c_[static_cast<std::size_t>(j)];
    }
    r.resize(static_cast<std::size_t>(dd));
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
  }

  // Largest absolute coefficient, as a double.
  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& v : c_) m = std::max(m, magnitude(v));
    return m;
  }

  std::string to_string(const std::string& var = "x") const {
    if (c_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
      const S& v = c_[static_cast<std::size_t>(k)];
      if (is_zero_exact(v)) continue;
      if (!first) out << " + ";
      first = false;
      out << "(" << format_scalar(v) << ")";
      if (k >= 1) out << "*" << var;
      if (k >= 2) out << "^" << k;
    }
    return out.str();
  }

 private:
  static bool is_zero_exact(const S& v) { return v == S(0); }
  void trim() {
    while (!c_.empty() && is_zero_exact(c_.back())) c_.pop_back();
  }

  std::vector<S> c_;
};

// (P(z) - P(x0)) / (z - x0) by synthetic division.
template <class S>
Polynomial<S> poly_divided_difference(const Polynomial<S>& P, const S& x0) {
  int n = P.degree();
  if (n <= 0) return {};
  std::vector<S> q(static_cast<std::size_t>(n), S(0));
  S carry = P[n];
  for (int k = n - 1; k >= 0; --k) {
    q[static_cast<std::size_t>(k)] = carry;
    carry = P[k] + carry * x0;
  }
  return Polynomial<S>(std::move(q));
}

// Newton-form interpolation through (xs[i], ys[i]); exact for Rational.
template <class S>
Polynomial<S> interpolate(const std::vector<S>& xs, std::vector<S> ys) {
  std::size_t n = xs.size();
  if (ys.size() != n) throw Error(ErrorCode::ShapeViolation, "interpolation data size mismatch");
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i) {
      S dx = xs[i] - xs[i - level];
      if (dx == S(0)) throw Error(ErrorCode::CoincidentPoints, "repeated interpolation node");
      ys[i] = (ys[i] - ys[i - 1]) / dx;
    }
  Polynomial<S> result;
  for (std::size_t i = n; i-- > 0;) {
    result = result * Polynomial<S>(std::vector<S>{-xs[i], S(1)});
    result += Polynomial<S>(ys[i]);
  }
  return result;
}

}  // namespace specband
