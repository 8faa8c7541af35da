#pragma once

// Text file formats.
//
//   HMX-1  {"kind":"hermitian","n":N,"entries":[[re,im],...]}   row-major, N^2 pairs
//          ("kind":"matrix" carries a general square complex matrix in the same layout)
//   SOP-1  {"kind":"superop","shape":[...],"basis":"gm-v1","matrix":[[...row...],...]}
//   SEP-1  {"shape":[...],"weights":[...],"factors":[[[[re,im],...] per slot] per point]}
//   answer {"kind":"canonical-answer","shape":[...],"perm":[...],"tflags":[...],
//           "unitaries":[HMX-style entries per slot]}
//
// Readers go through nlohmann::json; writers emit every real with 17
// significant digits so a write-then-read cycle is exact.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sepauto/superop.hpp"

namespace sepauto::io {

using nlohmann::json;

/// %.17g; non-finite values have no JSON form and are rejected.
inline std::string fmt_real(double v) {
  if (!std::isfinite(v)) throw Error("cannot serialize non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_complex(cplx z) { return "[" + fmt_real(z.real()) + "," + fmt_real(z.imag()) + "]"; }

inline std::string fmt_ints(const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

inline std::string fmt_entries(const CMatrix& m) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += ((i || j) ? "," : "") + fmt_complex(m(i, j));
  return s + "]";
}

inline std::string fmt_vector(const CVector& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt_complex(v(i));
  return s + "]";
}

inline std::string fmt_real_matrix(const RMatrix& m) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    s += i ? ",\n  [" : "\n  [";
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += (j ? "," : "") + fmt_real(m(i, j));
    s += "]";
  }
  return s + "\n]";
}

// ---------------------------------------------------------------------------
// parsing helpers

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputMissingError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw OutputError("write to '" + path + "' failed");
}

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline double as_real(const json& j) {
  if (!j.is_number()) throw ParseError("expected a number");
  return j.get<double>();
}

inline int as_int(const json& j) {
  if (!j.is_number_integer()) throw ParseError("expected an integer");
  return j.get<int>();
}

inline cplx as_complex(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("complex entries must be [re, im] pairs");
  return {as_real(j[0]), as_real(j[1])};
}

inline std::vector<int> as_ints(const json& j) {
  if (!j.is_array()) throw ParseError("expected an integer array");
  std::vector<int> v;
  for (const auto& e : j) v.push_back(as_int(e));
  return v;
}

inline CMatrix as_entries(const json& j, int n) {
  if (!j.is_array() || static_cast<long>(j.size()) != static_cast<long>(n) * n)
    throw ParseError("expected " + std::to_string(n * n) + " complex entries");
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) m(i, k) = as_complex(j[static_cast<std::size_t>(i) * n + k]);
  return m;
}

inline TensorShape as_shape(const json& j) {
  try {
    return TensorShape(as_ints(j));
  } catch (const ShapeError& e) {
    throw ParseError(std::string("invalid shape: ") + e.what());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// HMX-1

inline std::string write_hmx(const CMatrix& m, bool hermitian = true) {
  return std::string("{\"kind\":\"") + (hermitian ? "hermitian" : "matrix") + "\",\"n\":" + std::to_string(m.rows()) +
         ",\"entries\":" + fmt_entries(m) + "}\n";
}

inline std::string write_hmx(const HermitianOperator& x) { return write_hmx(x.matrix(), true); }

struct MatrixFile {
  bool hermitian = true;
  CMatrix matrix;
};

inline MatrixFile read_matrix(const std::string& text) {
  const json j = parse_json(text);
  const json& kind = detail::field(j, "kind");
  if (kind != "hermitian" && kind != "matrix") throw ParseError("HMX-1 kind must be 'hermitian' or 'matrix'");
  const int n = detail::as_int(detail::field(j, "n"));
  if (n < 1) throw ParseError("HMX-1 n must be positive");
  MatrixFile f{kind == "hermitian", detail::as_entries(detail::field(j, "entries"), n)};
  return f;
}

inline HermitianOperator read_hmx(const std::string& text) {
  const MatrixFile f = read_matrix(text);
  if (!f.hermitian) throw ParseError("expected a 'hermitian' HMX-1 file");
  try {
    return HermitianOperator(f.matrix);
  } catch (const NotHermitianError& e) {
    throw ParseError(e.what());
  }
}

// ---------------------------------------------------------------------------
// SOP-1

inline std::string write_sop(const Superoperator& s) {
  return "{\"kind\":\"superop\",\"shape\":" + fmt_ints(s.shape().dims()) + ",\"basis\":\"" + basis_name +
         "\",\"matrix\":" + fmt_real_matrix(s.matrix()) + "}\n";
}

inline Superoperator read_sop(const std::string& text) {
  const json j = parse_json(text);
  if (detail::field(j, "kind") != "superop") throw ParseError("SOP-1 kind must be 'superop'");
  if (detail::field(j, "basis") != basis_name) throw ParseError("SOP-1 basis must be 'gm-v1'");
  const TensorShape shape = detail::as_shape(detail::field(j, "shape"));
  const json& rows = detail::field(j, "matrix");
  const long d = static_cast<long>(shape.total()) * shape.total();
  if (!rows.is_array() || static_cast<long>(rows.size()) != d)
    throw ParseError("SOP-1 matrix must have " + std::to_string(d) + " rows");
  RMatrix m(d, d);
  for (long i = 0; i < d; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<long>(row.size()) != d)
      throw ParseError("SOP-1 row " + std::to_string(i) + " must have " + std::to_string(d) + " entries");
    for (long k = 0; k < d; ++k) m(i, k) = detail::as_real(row[static_cast<std::size_t>(k)]);
  }
  return {shape, m};
}

// ---------------------------------------------------------------------------
// SEP-1

inline std::string write_sep(const SeparableEnsemble& e) {
  std::string s = "{\"shape\":" + fmt_ints(e.shape().dims()) + ",\"weights\":[";
  for (std::size_t i = 0; i < e.weights().size(); ++i) s += (i ? "," : "") + fmt_real(e.weights()[i]);
  s += "],\"factors\":[";
  for (std::size_t p = 0; p < e.points().size(); ++p) {
    s += p ? ",[" : "[";
    const auto& f = e.points()[p].factors();
    for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + fmt_vector(f[i]);
    s += "]";
  }
  return s + "]}\n";
}

inline SeparableEnsemble read_sep(const std::string& text) {
  const json j = parse_json(text);
  const TensorShape shape = detail::as_shape(detail::field(j, "shape"));
  const json& w = detail::field(j, "weights");
  const json& f = detail::field(j, "factors");
  if (!w.is_array() || !f.is_array() || w.size() != f.size())
    throw ParseError("SEP-1 needs matching weights and factors arrays");
  std::vector<double> weights;
  std::vector<ProductPureState> points;
  for (std::size_t p = 0; p < f.size(); ++p) {
    weights.push_back(detail::as_real(w[p]));
    if (!f[p].is_array() || static_cast<int>(f[p].size()) != shape.factors())
      throw ParseError("SEP-1 point needs one factor per slot");
    std::vector<CVector> factors;
    for (int s = 0; s < shape.factors(); ++s) {
      const json& v = f[p][static_cast<std::size_t>(s)];
      if (!v.is_array() || static_cast<int>(v.size()) != shape.dim(s)) throw ParseError("SEP-1 factor has wrong length");
      CVector x(shape.dim(s));
      for (int a = 0; a < shape.dim(s); ++a) x(a) = detail::as_complex(v[static_cast<std::size_t>(a)]);
      factors.push_back(x);
    }
    try {
      points.emplace_back(shape, std::move(factors));
    } catch (const ShapeError& e) {
      throw ParseError(e.what());
    }
  }
  try {
    return SeparableEnsemble(std::move(weights), std::move(points));
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

// ---------------------------------------------------------------------------
// canonical answer sidecar

inline std::string write_answer(const CanonicalAutomorphism& a) {
  std::string s = "{\"kind\":\"canonical-answer\",\"shape\":" + fmt_ints(a.shape.dims()) +
                  ",\"perm\":" + fmt_ints(a.perm) + ",\"tflags\":[";
  for (std::size_t i = 0; i < a.tflags.size(); ++i) s += std::string(i ? "," : "") + (a.tflags[i] ? "true" : "false");
  s += "],\"unitaries\":[";
  for (std::size_t i = 0; i < a.unitaries.size(); ++i) s += (i ? ",\n  " : "\n  ") + fmt_entries(a.unitaries[i]);
  return s + "\n]}\n";
}

inline CanonicalAutomorphism read_answer(const std::string& text) {
  const json j = parse_json(text);
  if (detail::field(j, "kind") != "canonical-answer") throw ParseError("answer kind must be 'canonical-answer'");
  CanonicalAutomorphism a;
  a.shape = detail::as_shape(detail::field(j, "shape"));
  a.perm = detail::as_ints(detail::field(j, "perm"));
  const json& flags = detail::field(j, "tflags");
  const json& us = detail::field(j, "unitaries");
  if (!flags.is_array() || !us.is_array() || static_cast<int>(flags.size()) != a.shape.factors() ||
      static_cast<int>(us.size()) != a.shape.factors())
    throw ParseError("answer needs one flag and one unitary per slot");
  for (int i = 0; i < a.shape.factors(); ++i) {
    if (!flags[i].is_boolean()) throw ParseError("tflags must be booleans");
    a.tflags.push_back(flags[i].get<bool>());
    a.unitaries.push_back(detail::as_entries(us[i], a.shape.dim(i)));
  }
  try {
    a.validate();
  } catch (const InvalidAutomorphismError& e) {
    throw ParseError(e.what());
  }
  return a;
}

}  // namespace sepauto::io
