#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>

#include "specband/error.hpp"

namespace specband {

using Rational = mpq_class;

inline constexpr double kDefaultTolerance = 1e-10;

namespace detail {

inline std::string trim_copy(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// Accepts "p/q", "p", and plain decimals such as "-0.25", all with optional sign.
inline Rational parse_rational(std::string_view text) {
  std::string s = trim_copy(text);
  auto fail = [&]() -> Rational { throw Error(ErrorCode::ParseError, "bad rational literal '" + s + "'"); };
  if (s.empty()) return fail();
  bool negative = false;
  std::string body = s;
  if (body[0] == '+' || body[0] == '-') {
    negative = body[0] == '-';
    body = body.substr(1);
  }
  Rational value;
  if (auto slash = body.find('/'); slash != std::string::npos) {
    std::string num = body.substr(0, slash), den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return fail();
    mpz_class d(den, 10);
    if (d == 0) return fail();
    value = Rational(mpz_class(num, 10), d);
  } else if (auto dot = body.find('.'); dot != std::string::npos) {
    std::string whole = body.substr(0, dot), frac = body.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || (!frac.empty() && !all_digits(frac))) return fail();
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    value = Rational(mpz_class(whole + frac, 10), scale);
  } else {
    if (!all_digits(body)) return fail();
    value = Rational(mpz_class(body, 10));
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace detail

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "rational";

  static Rational parse(std::string_view text) { return detail::parse_rational(text); }
  static std::string format(const Rational& v) { return v.get_str(); }
  static double to_double(const Rational& v) { return v.get_d(); }
  static Rational from_double(double d) {
    if (!std::isfinite(d)) throw Error(ErrorCode::ParseError, "non-finite value");
    return Rational(d);
  }
  static Rational abs(const Rational& v) { return ::abs(v); }
  static int sign(const Rational& v, double = 0.0) { return sgn(v); }
  static bool is_zero(const Rational& v, double = 0.0) { return sgn(v) == 0; }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";

  static double parse(std::string_view text) {
    std::string s = detail::trim_copy(text);
    if (s.find('/') != std::string::npos) return detail::parse_rational(s).get_d();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad float literal '" + s + "'");
    }
    if (used != s.size()) throw Error(ErrorCode::ParseError, "bad float literal '" + s + "'");
    return v;
  }
  static std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
  static double to_double(double v) { return v; }
  static double from_double(double d) { return d; }
  static double abs(double v) { return std::fabs(v); }
  static int sign(double v, double tol = 0.0) { return v > tol ? 1 : (v < -tol ? -1 : 0); }
  static bool is_zero(double v, double tol = kDefaultTolerance) { return std::fabs(v) <= tol; }
};

template <class S>
inline constexpr bool is_exact_v = scalar_traits<S>::exact;

template <class S>
double to_double(const S& v) {
  return scalar_traits<S>::to_double(v);
}

template <class S>
S scalar_abs(const S& v) {
  return scalar_traits<S>::abs(v);
}

template <class S>
bool is_zero(const S& v, double tol = kDefaultTolerance) {
  return scalar_traits<S>::is_zero(v, tol);
}

// Conversions between the two scalar modes; Rational from double is exact.
template <class To, class From>
To scalar_cast(const From& v) {
  if constexpr (std::is_same_v<To, From>) {
    return v;
  } else if constexpr (std::is_same_v<To, double>) {
    return scalar_traits<From>::to_double(v);
  } else {
    return scalar_traits<To>::from_double(scalar_traits<From>::to_double(v));
  }
}

template <>
inline Rational scalar_cast<Rational, Rational>(const Rational& v) {
  return v;
}

template <class S>
S parse_scalar(std::string_view text) {
  return scalar_traits<S>::parse(text);
}

template <class S>
std::string format_scalar(const S& v) {
  return scalar_traits<S>::format(v);
}

// Magnitude used for tolerance-based comparisons, also for complex values.
inline double magnitude(double v) { return std::fabs(v); }
inline double magnitude(const Rational& v) { return std::fabs(v.get_d()); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

}  // namespace specband
