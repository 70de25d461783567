#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "specband/specband.hpp"

namespace specband::io {

using Json = nlohmann::ordered_json;

// Everything a command needs about the operator. Literals are always read
// into exact rationals; float literals convert exactly.
struct OperatorSpec {
  BandedMatrix<Rational> T;
  std::optional<BidiagonalFactorization<Rational>> factors;
  std::optional<InitialConditions<Rational>> ic;
  std::string literal_mode = "rational";
};

inline Error parse_error(const std::string& what) { return Error(ErrorCode::ParseError, what); }

inline Rational read_scalar(const Json& v) {
  if (v.is_string()) return parse_scalar<Rational>(v.get<std::string>());
  if (v.is_number_integer()) return Rational(mpz_class(v.dump(), 10));
  if (v.is_number_float()) return scalar_traits<Rational>::from_double(v.get<double>());
  throw parse_error("expected a number or a rational literal, got " + v.dump());
}

inline std::vector<Rational> read_vector(const Json& v) {
  if (!v.is_array()) throw parse_error("expected an array, got " + v.dump());
  std::vector<Rational> out;
  for (const auto& x : v) out.push_back(read_scalar(x));
  return out;
}

inline Matrix<Rational> read_matrix(const Json& v) {
  if (!v.is_array() || v.empty()) throw parse_error("expected a nonempty array of rows");
  const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
  Matrix<Rational> m(v.size(), cols);
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto row = read_vector(v[i]);
    if (row.size() != cols) throw parse_error("ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = row[j];
  }
  return m;
}

inline int read_int(const Json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number_integer()) throw parse_error(std::string("missing integer field '") + key + "'");
  return obj[key].get<int>();
}

inline BidiagonalFactorization<Rational> read_factorization(const Json& j) {
  if (!j.is_object() || !j.contains("L") || !j.contains("delta") || !j.contains("U"))
    throw parse_error("factorization needs fields L, delta and U");
  BidiagonalFactorization<Rational> f;
  for (const auto& seq : j["L"]) f.lower.push_back(read_vector(seq));
  for (const auto& seq : j["U"]) f.upper.push_back(read_vector(seq));
  f.delta = read_vector(j["delta"]);
  f.p = static_cast<int>(f.lower.size());
  f.q = static_cast<int>(f.upper.size());
  if (j.contains("horizon")) f.horizon = read_int(j, "horizon");
  f.validate();
  return f;
}

inline InitialConditions<Rational> read_ic(const Json& j) {
  if (!j.is_object() || !j.contains("nu") || !j.contains("xi")) throw parse_error("initial conditions need nu and xi");
  InitialConditions<Rational> ic{read_matrix(j["nu"]), read_matrix(j["xi"])};
  try {
    ic.validate();
  } catch (const Error& e) {
    throw parse_error(e.what());
  }
  return ic;
}

inline OperatorSpec read_operator(const Json& j) {
  if (!j.is_object()) throw parse_error("input must be a JSON object");
  OperatorSpec spec;
  if (j.contains("scalar")) {
    spec.literal_mode = j["scalar"].get<std::string>();
    if (spec.literal_mode != "rational" && spec.literal_mode != "float") throw parse_error("scalar must be rational or float");
  }
  const int p = read_int(j, "p"), q = read_int(j, "q");
  if (j.contains("factors")) {
    auto f = read_factorization(j["factors"]);
    if (f.p != p || f.q != q) throw parse_error("factor counts do not match p and q");
    Rational shift = j.contains("shift") ? read_scalar(j["shift"]) : Rational(0);
    spec.T = assemble(f, shift);
    spec.factors = std::move(f);
  } else if (j.contains("bands")) {
    typename BandedMatrix<Rational>::BandMap bands;
    for (const auto& [key, seq] : j["bands"].items()) {
      int offset = 0;
      try {
        std::size_t used = 0;
        offset = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw parse_error("band key '" + key + "' is not an integer offset");
      }
      bands[offset] = read_vector(seq);
    }
    int horizon = j.contains("horizon") ? read_int(j, "horizon") : kUnboundedHorizon;
    Rational shift = j.contains("shift") ? read_scalar(j["shift"]) : Rational(0);
    spec.T = BandedMatrix<Rational>::from_bands(p, q, std::move(bands), horizon, shift);
  } else {
    throw parse_error("input needs either bands or factors");
  }
  if (j.contains("ic")) {
    spec.ic = read_ic(j["ic"]);
    if (spec.ic->p() != p || spec.ic->q() != q) throw parse_error("initial conditions do not match p and q");
  }
  return spec;
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(path + ": " + e.what());
  }
}

// A matrix given inline as JSON text or as the path of a JSON file.
inline Matrix<Rational> read_matrix_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '[') {
    try {
      return read_matrix(Json::parse(arg));
    } catch (const nlohmann::json::exception& e) {
      throw parse_error(std::string("matrix literal: ") + e.what());
    }
  }
  return read_matrix(load_json(arg));
}

template <class S>
Json scalar_json(const S& v) {
  if constexpr (is_exact_v<S>) return v.get_str();
  else return v;
}

template <class S>
Json vector_json(const std::vector<S>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(scalar_json(x));
  return out;
}

template <class S>
Json matrix_json(const Matrix<S>& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i)));
  return out;
}

template <class S>
Json factorization_json(const BidiagonalFactorization<S>& f) {
  Json out;
  out["L"] = Json::array();
  for (const auto& seq : f.lower) out["L"].push_back(vector_json(seq));
  out["delta"] = vector_json(f.delta);
  out["U"] = Json::array();
  for (const auto& seq : f.upper) out["U"].push_back(vector_json(seq));
  out["horizon"] = f.horizon;
  return out;
}

// Writes through a temporary file in the same directory and renames it.
inline void write_atomic(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline void write_json(const std::filesystem::path& path, const Json& j) { write_atomic(path, j.dump(2) + "\n"); }

}  // namespace specband::io
