#pragma once

#include <cstdint>
#include <random>

#include "sepauto/tensor.hpp"

namespace sepauto {

/// All sampling draws from this engine; seeds are always explicit.
using Rng = std::mt19937_64;

/// Stream splitting: a well-mixed child seed for (base, stream).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline CMatrix complex_gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

inline RMatrix real_gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = normal(rng);
  return g;
}

/// Haar unitary: QR of a complex Ginibre matrix with R's diagonal phases fixed.
inline CMatrix random_unitary(int n, Rng& rng) {
  const CMatrix g = complex_gaussian(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const double a = std::abs(r(i, i));
    if (a > 0) q.col(i) *= r(i, i) / a;
  }
  return q;
}

/// Random Hermitian matrix with iid Gaussian entries (GUE-like, unnormalized).
inline CMatrix random_hermitian_matrix(int n, Rng& rng) {
  const CMatrix g = complex_gaussian(n, n, rng);
  return (g + g.adjoint()) / 2.0;
}

}  // namespace sepauto
