#pragma once

// Dense tensor-index kernel: mixed-radix shapes, Kronecker products, partial
// traces, partial transposes and slot permutations on N x N complex matrices.
//
// Slots are 0-based. Index convention is row-major over slots: slot 0 is the
// most significant digit, matching kron(A_0, A_1, ..., A_{k-1}).

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "sepauto/errors.hpp"

namespace sepauto {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

using Slots = std::vector<int>;

class TensorShape {
 public:
  TensorShape() = default;

  explicit TensorShape(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw ShapeError("tensor shape needs at least one factor");
    total_ = 1;
    for (int d : dims_) {
      if (d < 2) throw ShapeError("every factor dimension must be >= 2, got " + std::to_string(d));
      total_ *= d;
    }
  }

  TensorShape(std::initializer_list<int> dims) : TensorShape(std::vector<int>(dims)) {}

  /// Parses "2x2x3".
  static TensorShape parse(const std::string& text) {
    std::vector<int> dims;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, 'x')) {
      if (item.empty() || !std::all_of(item.begin(), item.end(), ::isdigit))
        throw ShapeError("malformed shape '" + text + "'");
      dims.push_back(std::stoi(item));
    }
    return TensorShape(std::move(dims));
  }

  [[nodiscard]] int factors() const { return static_cast<int>(dims_.size()); }
  [[nodiscard]] int dim(int slot) const { return dims_.at(static_cast<std::size_t>(slot)); }
  [[nodiscard]] const std::vector<int>& dims() const { return dims_; }
  [[nodiscard]] int total() const { return total_; }

  [[nodiscard]] std::vector<int> decode(int index) const {
    std::vector<int> digits(dims_.size());
    for (int s = factors() - 1; s >= 0; --s) {
      digits[s] = index % dims_[s];
      index /= dims_[s];
    }
    return digits;
  }

  [[nodiscard]] int encode(std::span<const int> digits) const {
    int index = 0;
    for (int s = 0; s < factors(); ++s) index = index * dims_[s] + digits[s];
    return index;
  }

  /// Shape restricted to the given slots (in the given order).
  [[nodiscard]] TensorShape sub(std::span<const int> slots) const {
    std::vector<int> d;
    for (int s : slots) d.push_back(dim(s));
    return TensorShape(std::move(d));
  }

  [[nodiscard]] std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (i) out += 'x';
      out += std::to_string(dims_[i]);
    }
    return out;
  }

  friend bool operator==(const TensorShape&, const TensorShape&) = default;

 private:
  std::vector<int> dims_;
  int total_ = 0;
};

namespace detail {

inline void require_dim(const CMatrix& x, const TensorShape& shape) {
  if (x.rows() != shape.total() || x.cols() != shape.total())
    throw ShapeError("operator of size " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                     " does not match shape " + shape.str());
}

inline void require_slots(const Slots& slots, const TensorShape& shape, bool strictly_increasing) {
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] < 0 || slots[i] >= shape.factors())
      throw ShapeError("slot " + std::to_string(slots[i]) + " out of range for shape " + shape.str());
    if (strictly_increasing && i > 0 && slots[i] <= slots[i - 1])
      throw ShapeError("slots must be strictly increasing");
  }
  if (!strictly_increasing) {
    Slots sorted = slots;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw ShapeError("repeated slot");
  }
}

}  // namespace detail

/// Row-major block Kronecker product: (i*nB+p, j*nB+q) -> A(i,j) B(p,q).
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CMatrix kron(std::span<const CMatrix> factors) {
  if (factors.empty()) return CMatrix::Identity(1, 1);
  CMatrix out = factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

inline CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Traces out every slot not listed in `keep` (strictly increasing).
inline CMatrix partial_trace(const CMatrix& x, const TensorShape& shape, const Slots& keep) {
  detail::require_dim(x, shape);
  detail::require_slots(keep, shape, true);

  Slots traced;
  for (int s = 0; s < shape.factors(); ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) traced.push_back(s);

  int kept_dim = 1;
  for (int s : keep) kept_dim *= shape.dim(s);

  const int n = shape.total();
  std::vector<int> kept_index(n), traced_index(n);
  for (int i = 0; i < n; ++i) {
    const auto d = shape.decode(i);
    int ki = 0, ti = 0;
    for (int s : keep) ki = ki * shape.dim(s) + d[s];
    for (int s : traced) ti = ti * shape.dim(s) + d[s];
    kept_index[i] = ki;
    traced_index[i] = ti;
  }

  CMatrix out = CMatrix::Zero(kept_dim, kept_dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (traced_index[i] == traced_index[j]) out(kept_index[i], kept_index[j]) += x(i, j);
  return out;
}

/// Transposes the listed slots (any order, no repeats).
inline CMatrix partial_transpose(const CMatrix& x, const TensorShape& shape, const Slots& slots) {
  detail::require_dim(x, shape);
  detail::require_slots(slots, shape, false);
  if (slots.empty()) return x;

  const int n = shape.total();
  std::vector<std::vector<int>> digits(n);
  for (int i = 0; i < n; ++i) digits[i] = shape.decode(i);

  CMatrix out(n, n);
  std::vector<int> di(shape.factors()), dj(shape.factors());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      di = digits[i];
      dj = digits[j];
      for (int s : slots) std::swap(di[s], dj[s]);
      out(shape.encode(di), shape.encode(dj)) = x(i, j);
    }
  }
  return out;
}

inline void require_permutation(const Slots& perm, int k) {
  if (static_cast<int>(perm.size()) != k) throw ShapeError("permutation has wrong length");
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  for (int p : perm) {
    if (p < 0 || p >= k || seen[p]) throw ShapeError("invalid permutation");
    seen[p] = true;
  }
}

inline Slots invert_permutation(const Slots& perm) {
  require_permutation(perm, static_cast<int>(perm.size()));
  Slots inv(perm.size());
  for (std::size_t j = 0; j < perm.size(); ++j) inv[perm[j]] = static_cast<int>(j);
  return inv;
}

/// Shape after moving input slot j to output slot perm[j].
inline TensorShape permuted_shape(const TensorShape& shape, const Slots& perm) {
  require_permutation(perm, shape.factors());
  std::vector<int> out(perm.size());
  for (std::size_t j = 0; j < perm.size(); ++j) out[perm[j]] = shape.dim(static_cast<int>(j));
  return TensorShape(std::move(out));
}

/// Index permutation matrix P with P (x_0 ⊗ ... ⊗ x_{k-1}) = ⊗_i x_{perm^-1(i)}.
inline Eigen::PermutationMatrix<Eigen::Dynamic> factor_permutation_matrix(const TensorShape& shape,
                                                                          const Slots& perm) {
  const TensorShape out_shape = permuted_shape(shape, perm);
  const int n = shape.total();
  Eigen::VectorXi target(n);
  std::vector<int> od(perm.size());
  for (int i = 0; i < n; ++i) {
    const auto d = shape.decode(i);
    for (std::size_t j = 0; j < perm.size(); ++j) od[perm[j]] = d[j];
    target(i) = out_shape.encode(od);
  }
  return Eigen::PermutationMatrix<Eigen::Dynamic>(target);
}

/// Conjugation by the factor permutation matrix: ⊗A_j ↦ ⊗A_{perm^-1(i)}.
inline CMatrix permute_factors(const CMatrix& x, const TensorShape& shape, const Slots& perm) {
  detail::require_dim(x, shape);
  const auto p = factor_permutation_matrix(shape, perm);
  return p * x * p.transpose();
}

inline CVector permute_factors(const CVector& v, const TensorShape& shape, const Slots& perm) {
  if (v.size() != shape.total()) throw ShapeError("vector length does not match shape " + shape.str());
  return factor_permutation_matrix(shape, perm) * v;
}

/// Places `a` on `slots` (increasing) and the identity on every other slot.
inline CMatrix embed(const CMatrix& a, const TensorShape& shape, const Slots& slots) {
  detail::require_slots(slots, shape, true);
  const TensorShape kept = shape.sub(slots);
  detail::require_dim(a, kept);

  const int n = shape.total();
  CMatrix out = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const auto di = shape.decode(i);
    for (int j = 0; j < n; ++j) {
      const auto dj = shape.decode(j);
      bool rest_equal = true;
      int ki = 0, kj = 0;
      for (int s = 0, pos = 0; s < shape.factors(); ++s) {
        if (pos < static_cast<int>(slots.size()) && slots[pos] == s) {
          ki = ki * shape.dim(s) + di[s];
          kj = kj * shape.dim(s) + dj[s];
          ++pos;
        } else if (di[s] != dj[s]) {
          rest_equal = false;
          break;
        }
      }
      if (rest_equal) out(i, j) = a(ki, kj);
    }
  }
  return out;
}

}  // namespace sepauto
