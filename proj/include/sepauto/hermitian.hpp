#pragma once

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>
#include <vector>

#include "sepauto/tensor.hpp"

namespace sepauto {

namespace tol {
inline constexpr double hermiticity_reject = 1e-8;
inline constexpr double trace = 1e-10;
inline constexpr double psd = 1e-10;
inline constexpr double purity = 1e-10;
}  // namespace tol

/// N x N complex Hermitian matrix. Construction symmetrizes (X + X*)/2 and
/// rejects inputs whose anti-Hermitian part exceeds 1e-8 entrywise.
class HermitianOperator {
 public:
  HermitianOperator() = default;

  explicit HermitianOperator(const CMatrix& m) {
    if (m.rows() != m.cols()) throw ShapeError("Hermitian operator must be square");
    const double defect = m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff() / 2.0;
    if (defect > tol::hermiticity_reject)
      throw NotHermitianError("matrix is not Hermitian (anti-Hermitian part " + std::to_string(defect) + ")");
    m_ = (m + m.adjoint()) / 2.0;
  }

  static HermitianOperator identity(int n) { return HermitianOperator(CMatrix::Identity(n, n)); }

  static HermitianOperator projector(const CVector& v) { return HermitianOperator(v * v.adjoint()); }

  [[nodiscard]] int dim() const { return static_cast<int>(m_.rows()); }
  [[nodiscard]] const CMatrix& matrix() const { return m_; }
  [[nodiscard]] double trace() const { return m_.trace().real(); }
  [[nodiscard]] double purity() const { return (m_ * m_).trace().real(); }
  [[nodiscard]] double frobenius() const { return m_.norm(); }

  [[nodiscard]] RVector eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

  [[nodiscard]] double min_eigenvalue() const { return eigenvalues()(0); }
  [[nodiscard]] double max_eigenvalue() const { return eigenvalues()(dim() - 1); }

  [[nodiscard]] bool is_density(double psd_tol = tol::psd, double trace_tol = tol::trace) const {
    return std::abs(trace() - 1.0) <= trace_tol && min_eigenvalue() >= -psd_tol;
  }

  [[nodiscard]] bool is_pure(double purity_tol = tol::purity) const {
    return is_density() && std::abs(purity() - 1.0) <= purity_tol;
  }

  HermitianOperator operator+(const HermitianOperator& o) const { return HermitianOperator(m_ + o.m_); }
  HermitianOperator operator-(const HermitianOperator& o) const { return HermitianOperator(m_ - o.m_); }
  HermitianOperator operator*(double s) const { return HermitianOperator(m_ * s); }

 private:
  CMatrix m_;
};

inline HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()));
}

inline HermitianOperator partial_trace(const HermitianOperator& x, const TensorShape& shape, const Slots& keep) {
  return HermitianOperator(partial_trace(x.matrix(), shape, keep));
}

inline HermitianOperator partial_transpose(const HermitianOperator& x, const TensorShape& shape,
                                           const Slots& slots) {
  return HermitianOperator(partial_transpose(x.matrix(), shape, slots));
}

inline HermitianOperator permute_factors(const HermitianOperator& x, const TensorShape& shape,
                                         const Slots& perm) {
  return HermitianOperator(permute_factors(x.matrix(), shape, perm));
}

/// tr(AB) for Hermitian A, B.
inline double inner(const HermitianOperator& a, const HermitianOperator& b) {
  return (a.matrix().cwiseProduct(b.matrix().transpose())).sum().real();
}

// gm-v1 orthonormal basis of H_n: E_00..E_{n-1,n-1}, then for each pair i<j in
// row-major pair order X_ij = (E_ij+E_ji)/sqrt2 followed by Y_ij = i(E_ij-E_ji)/sqrt2.
// Coordinates are c_k = tr(B_k X).

inline constexpr const char* basis_name = "gm-v1";

inline RVector to_coords(const CMatrix& x) {
  const Eigen::Index n = x.rows();
  RVector c(n * n);
  const double s2 = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < n; ++i) c(i) = x(i, i).real();
  Eigen::Index k = n;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      // Average the two triangles so near-Hermitian inputs project orthogonally.
      const cplx z = (x(i, j) + std::conj(x(j, i))) / 2.0;
      c(k++) = s2 * z.real();
      c(k++) = s2 * z.imag();
    }
  return c;
}

inline RVector to_coords(const HermitianOperator& x) { return to_coords(x.matrix()); }

inline int coords_dim(Eigen::Index len) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(len))));
  if (n * n != len || n < 1) throw ShapeError("coordinate vector length " + std::to_string(len) + " is not a square");
  return static_cast<int>(n);
}

inline HermitianOperator from_coords(const RVector& c) {
  const int n = coords_dim(c.size());
  CMatrix x = CMatrix::Zero(n, n);
  const double s2 = std::sqrt(2.0);
  for (int i = 0; i < n; ++i) x(i, i) = c(i);
  Eigen::Index k = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const cplx z(c(k) / s2, c(k + 1) / s2);
      x(i, j) = z;
      x(j, i) = std::conj(z);
      k += 2;
    }
  return HermitianOperator(x);
}

inline HermitianOperator from_coords(const RVector& c, int n) {
  if (c.size() != static_cast<Eigen::Index>(n) * n)
    throw ShapeError("expected " + std::to_string(n * n) + " coordinates, got " + std::to_string(c.size()));
  return from_coords(c);
}

/// k-th gm-v1 basis element of H_n.
inline HermitianOperator basis_element(int n, int k) {
  RVector c = RVector::Zero(static_cast<Eigen::Index>(n) * n);
  c(k) = 1.0;
  return from_coords(c);
}

/// Coordinate index of X_ij (or Y_ij when `imaginary`).
inline int offdiag_index(int n, int i, int j, bool imaginary) {
  int k = n;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (a == i && b == j) return k + (imaginary ? 1 : 0);
      k += 2;
    }
  throw ShapeError("off-diagonal index requires i < j < n");
}

struct HermitianBasis {
  int n = 0;
  std::vector<HermitianOperator> elements;

  explicit HermitianBasis(int dim) : n(dim) {
    elements.reserve(static_cast<std::size_t>(dim) * dim);
    for (int k = 0; k < dim * dim; ++k) elements.push_back(basis_element(dim, k));
  }

  [[nodiscard]] RMatrix gram() const {
    const auto m = static_cast<Eigen::Index>(elements.size());
    RMatrix g(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b) g(a, b) = inner(elements[a], elements[b]);
    return g;
  }
};

}  // namespace sepauto
