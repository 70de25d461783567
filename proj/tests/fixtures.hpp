#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "specband/specband.hpp"

namespace specband::testing {

using R = Rational;

inline R q(long num, long den = 1) {
  R r(num, den);
  r.canonicalize();
  return r;
}

// Tridiagonal: subdiagonal 1/4, diagonal 0, superdiagonal 1, shifted by 1.
// Its N = 1 truncation [[1,1],[1/4,1]] has eigenvalues 3/2 and 1/2.
inline BandedMatrix<R> fixture_f1() {
  return BandedMatrix<R>::from_bands(1, 1, {{-1, {q(1, 4)}}, {0, {q(0)}}, {1, {q(1)}}}, kUnboundedHorizon, q(1));
}

inline BidiagonalFactorization<R> constant_factorization(int p, int q_, R value = R(1)) {
  BidiagonalFactorization<R> f;
  f.p = p;
  f.q = q_;
  f.lower.assign(static_cast<std::size_t>(p), {value});
  f.upper.assign(static_cast<std::size_t>(q_), {value});
  f.delta = {value};
  return f;
}

// p = 2, q = 1 with every bidiagonal parameter equal to one.
inline BidiagonalFactorization<R> fixture_f2_factors() { return constant_factorization(2, 1); }
inline BandedMatrix<R> fixture_f2() { return assemble(fixture_f2_factors()); }

// p = 2, q = 1 factorization whose N = 2 truncation [[2,1,0],[3,9/2,3],[2,7,9]]
// has the rational eigenvalues 12, 3 and 1/2.
inline BidiagonalFactorization<R> hand3_factors() {
  BidiagonalFactorization<R> f;
  f.p = 2;
  f.q = 1;
  f.lower = {{q(1, 2), q(1)}, {q(1), q(1)}};
  f.delta = {q(2), q(3), q(3)};
  f.upper = {{q(1, 2), q(1)}};
  return f;
}

// Period-3 parameters drawn from {2/3, 1, 4/3}.
inline BidiagonalFactorization<R> periodic_factorization(int p, int q_) {
  BidiagonalFactorization<R> f;
  f.p = p;
  f.q = q_;
  auto seq = [](int k) {
    std::vector<R> s;
    for (int i = 0; i < 3; ++i) s.push_back(q(2 + (i + k) % 3, 3));
    return s;
  };
  for (int k = 0; k < p; ++k) f.lower.push_back(seq(k));
  for (int k = 0; k < q_; ++k) f.upper.push_back(seq(k + 1));
  f.delta = seq(2);
  return f;
}

struct PbfFixture {
  std::string name;
  BidiagonalFactorization<R> factors;
  BandedMatrix<R> T;
  InitialConditions<R> ic;  // admissible, Acal = Bcal = I
};

inline PbfFixture make_fixture(std::string name, BidiagonalFactorization<R> f) {
  auto T = assemble(f);
  auto adm = admissible_ic(f, Matrix<R>::identity(static_cast<std::size_t>(f.p)), Matrix<R>::identity(static_cast<std::size_t>(f.q)));
  return PbfFixture{std::move(name), std::move(f), std::move(T), adm.ic};
}

// Every (p, q) in {1,2,3}^2, constant and periodic, plus F2 and the hand case.
inline std::vector<PbfFixture> pbf_fixtures() {
  std::vector<PbfFixture> out;
  for (int p = 1; p <= 3; ++p)
    for (int q_ = 1; q_ <= 3; ++q_) {
      auto tag = std::to_string(p) + "x" + std::to_string(q_);
      out.push_back(make_fixture("ones-" + tag, constant_factorization(p, q_)));
      out.push_back(make_fixture("periodic-" + tag, periodic_factorization(p, q_)));
    }
  out.push_back(make_fixture("hand3", hand3_factors()));
  return out;
}

inline BidiagonalFactorization<R> random_factorization(std::mt19937_64& rng, int p, int q_, int length) {
  std::uniform_int_distribution<int> num(1, 9), den(1, 6);
  auto draw = [&] { return q(num(rng), den(rng)); };
  BidiagonalFactorization<R> f;
  f.p = p;
  f.q = q_;
  f.lower.assign(static_cast<std::size_t>(p), {});
  f.upper.assign(static_cast<std::size_t>(q_), {});
  for (auto& s : f.lower)
    for (int i = 0; i < length; ++i) s.push_back(draw());
  for (auto& s : f.upper)
    for (int i = 0; i < length; ++i) s.push_back(draw());
  for (int i = 0; i < length; ++i) f.delta.push_back(draw());
  return f;
}

}  // namespace specband::testing
