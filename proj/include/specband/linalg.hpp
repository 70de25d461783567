#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "specband/matrix.hpp"
#include "specband/polynomial.hpp"

namespace specband {

template <class T>
struct is_polynomial : std::false_type {};
template <class S>
struct is_polynomial<Polynomial<S>> : std::true_type {
  using scalar = S;
};

template <class To, class From>
Matrix<To> matrix_cast(const Matrix<From>& m) {
  return m.map([](const From& v) { return lift<To>(v); });
}

inline constexpr std::size_t kMaxDeterminantSize = 64;

namespace detail {

template <class S>
void require_square(const Matrix<S>& m) {
  if (!m.is_square()) throw Error(ErrorCode::NonSquare, "matrix must be square");
}

// Fraction-free Bareiss elimination with row exchanges.
inline Rational bareiss_determinant(Matrix<Rational> a) {
  std::size_t n = a.rows();
  if (n == 0) return Rational(1);
  int sign = 1;
  Rational prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(a(k, k)) == 0) {
      std::size_t r = k + 1;
      while (r < n && sgn(a(r, k)) == 0) ++r;
      if (r == n) return Rational(0);
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(r, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign > 0 ? a(n - 1, n - 1) : Rational(-a(n - 1, n - 1));
}

template <class V>
V pivoted_lu_determinant(Matrix<V> a) {
  std::size_t n = a.rows();
  V det(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = magnitude(a(k, k));
    for (std::size_t r = k + 1; r < n; ++r)
      if (magnitude(a(r, k)) > best) {
        best = magnitude(a(r, k));
        piv = r;
      }
    if (best == 0.0) return V(0);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      V f = a(i, k) / a(k, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

template <class T>
T laplace_determinant(const Matrix<T>& m) {
  std::size_t n = m.rows();
  if (n == 0) return T(1);
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  T acc(0);
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j) == T(0)) continue;
    T term = m(0, j) * laplace_determinant(m.minor_matrix(0, j));
    if (j % 2 == 0) acc += term;
    else acc -= term;
  }
  return acc;
}

}  // namespace detail

template <class S>
Polynomial<S> polynomial_determinant(const Matrix<Polynomial<S>>& m);

// Determinant of a square matrix of scalars or polynomials. Exact scalars use
// fraction-free elimination, floating point uses LU with partial pivoting.
template <class T>
T det(const Matrix<T>& m) {
  detail::require_square(m);
  if (m.rows() > kMaxDeterminantSize) throw Error(ErrorCode::SizeTooLarge, "determinant size above 64");
  if constexpr (is_polynomial<T>::value) {
    return polynomial_determinant(m);
  } else if constexpr (std::is_same_v<T, Rational>) {
    return detail::bareiss_determinant(m);
  } else {
    return detail::pivoted_lu_determinant(m);
  }
}

// Polynomial determinants: direct expansion for tiny sizes, otherwise values
// at deg+1 distinct points followed by exact interpolation.
template <class S>
Polynomial<S> polynomial_determinant(const Matrix<Polynomial<S>>& m) {
  detail::require_square(m);
  std::size_t n = m.rows();
  if (n <= 3) return detail::laplace_determinant(m);
  int bound = 0;
  for (std::size_t i = 0; i < n; ++i) {
    int row_max = -1;
    for (std::size_t j = 0; j < n; ++j) row_max = std::max(row_max, m(i, j).degree());
    if (row_max < 0) return {};
    bound += row_max;
  }
  std::vector<S> xs, ys;
  for (int k = 0; k <= bound; ++k) {
    S x(k);
    xs.push_back(x);
    ys.push_back(det(m.map([&](const Polynomial<S>& p) { return p(x); })));
  }
  return interpolate(xs, ys);
}

// Solves A X = B; exact pivot choice for Rational, partial pivoting otherwise.
template <class V>
Matrix<V> solve(Matrix<V> a, Matrix<V> b) {
  detail::require_square(a);
  std::size_t n = a.rows();
  if (b.rows() != n) throw Error(ErrorCode::ShapeViolation, "right-hand side shape mismatch");
  std::size_t m = b.cols();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = n;
    if constexpr (std::is_same_v<V, Rational>) {
      for (std::size_t r = k; r < n; ++r)
        if (sgn(a(r, k)) != 0) {
          piv = r;
          break;
        }
    } else {
      double best = 0.0;
      for (std::size_t r = k; r < n; ++r)
        if (magnitude(a(r, k)) > best) {
          best = magnitude(a(r, k));
          piv = r;
        }
    }
    if (piv == n) throw Error(ErrorCode::SingularLeadingMinor, "singular system");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      for (std::size_t j = 0; j < m; ++j) std::swap(b(k, j), b(piv, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == V(0)) continue;
      V f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < m; ++j) b(i, j) -= f * b(k, j);
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = 0; j < m; ++j) {
      V acc = b(i, j);
      for (std::size_t k = i + 1; k < n; ++k) acc -= a(i, k) * b(k, j);
      b(i, j) = acc / a(i, i);
    }
  }
  return b;
}

template <class V>
std::vector<V> solve(const Matrix<V>& a, const std::vector<V>& rhs) {
  Matrix<V> b(rhs.size(), 1);
  for (std::size_t i = 0; i < rhs.size(); ++i) b(i, 0) = rhs[i];
  return solve(a, b).col(0);
}

template <class V>
Matrix<V> inverse(const Matrix<V>& a) {
  return solve(a, Matrix<V>::identity(a.rows()));
}

// Transpose of the cofactor matrix. Nonsingular scalar matrices go through
// det * inverse; singular ones and polynomial matrices use cofactors.
template <class T>
Matrix<T> adjugate(const Matrix<T>& m) {
  detail::require_square(m);
  std::size_t n = m.rows();
  if (n == 0) return m;
  if (n == 1) return Matrix<T>::identity(1);
  if constexpr (!is_polynomial<T>::value) {
    T d = det(m);
    bool nonsingular;
    if constexpr (std::is_same_v<T, Rational>) nonsingular = sgn(d) != 0;
    else nonsingular = magnitude(d) > 0.0;
    if (nonsingular) return d * inverse(m);
  }
  Matrix<T> adj(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      T c = det(m.minor_matrix(i, j));
      adj(j, i) = (i + j) % 2 == 0 ? c : T(-c);
    }
  return adj;
}

// All leading principal minors det(A[0..k,0..k]) for k = 0..n-1 from one
// fraction-free pass without pivoting. Returns nullopt when a pivot vanishes.
inline std::optional<std::vector<Rational>> leading_minors(Matrix<Rational> a) {
  detail::require_square(a);
  std::size_t n = a.rows();
  std::vector<Rational> minors;
  minors.reserve(n);
  Rational prev(1);
  for (std::size_t k = 0; k < n; ++k) {
    minors.push_back(a(k, k));
    if (k + 1 == n) break;
    if (sgn(a(k, k)) == 0) return std::nullopt;
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return minors;
}

template <class V>
double max_abs(const Matrix<V>& m) {
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r = std::max(r, magnitude(m(i, j)));
  return r;
}

}  // namespace specband

namespace specband {

// det(xI - A) for a dense scalar matrix, exact for Rational entries.
template <class S>
Polynomial<S> characteristic_polynomial(const Matrix<S>& a) {
  detail::require_square(a);
  std::size_t n = a.rows();
  Matrix<Polynomial<S>> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Polynomial<S>(S(-a(i, j)));
  for (std::size_t i = 0; i < n; ++i) m(i, i) += Polynomial<S>::x();
  return polynomial_determinant(m);
}

}  // namespace specband
