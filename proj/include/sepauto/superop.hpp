#pragma once

// Superoperators as real matrices acting on gm-v1 coordinates, the canonical
// automorphisms of the separable set, and the trace-preserving family
// L0 + t L1 whose members preserve separability without being automorphisms.

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "sepauto/hermitian.hpp"
#include "sepauto/random.hpp"
#include "sepauto/states.hpp"

namespace sepauto {

/// Real N^2 x N^2 matrix in gm-v1 coordinates; column k is the image of basis element k.
class Superoperator {
 public:
  Superoperator(TensorShape shape, RMatrix matrix) : shape_(std::move(shape)), m_(std::move(matrix)) {
    const Eigen::Index d = static_cast<Eigen::Index>(shape_.total()) * shape_.total();
    if (m_.rows() != d || m_.cols() != d)
      throw ShapeError("superoperator matrix must be " + std::to_string(d) + "x" + std::to_string(d) + " for shape " +
                       shape_.str());
  }

  static Superoperator identity(const TensorShape& shape) {
    const Eigen::Index d = static_cast<Eigen::Index>(shape.total()) * shape.total();
    return {shape, RMatrix::Identity(d, d)};
  }

  [[nodiscard]] const TensorShape& shape() const { return shape_; }
  [[nodiscard]] const RMatrix& matrix() const { return m_; }
  [[nodiscard]] Eigen::Index coord_dim() const { return m_.rows(); }

 private:
  TensorShape shape_;
  RMatrix m_;
};

inline HermitianOperator apply(const Superoperator& s, const HermitianOperator& x) {
  if (x.dim() != s.shape().total()) throw ShapeError("operator dimension does not match superoperator shape");
  return from_coords(RVector(s.matrix() * to_coords(x)));
}

/// Complex-linear extension to an arbitrary square matrix via T = H1 + i H2.
inline CMatrix apply_complex(const Superoperator& s, const CMatrix& t) {
  if (t.rows() != s.shape().total() || t.cols() != t.rows())
    throw ShapeError("matrix dimension does not match superoperator shape");
  const CMatrix h1 = (t + t.adjoint()) / 2.0;
  const CMatrix h2 = (t - t.adjoint()) / cplx(0.0, 2.0);
  return apply(s, HermitianOperator(h1)).matrix() + cplx(0.0, 1.0) * apply(s, HermitianOperator(h2)).matrix();
}

/// Transpose in the orthonormal basis, so tr(S(X) Y) = tr(X S*(Y)).
inline Superoperator adjoint(const Superoperator& s) { return {s.shape(), s.matrix().transpose()}; }

/// compose(s1, s2) applies s2 first.
inline Superoperator compose(const Superoperator& s1, const Superoperator& s2) {
  if (!(s1.shape() == s2.shape())) throw ShapeError("cannot compose superoperators on different shapes");
  return {s1.shape(), s1.matrix() * s2.matrix()};
}

inline constexpr double max_condition = 1e12;

/// Reciprocal condition estimate (1-norm) of the coordinate matrix.
inline double reciprocal_condition(const Superoperator& s) {
  Eigen::PartialPivLU<RMatrix> lu(s.matrix());
  return lu.rcond();
}

inline bool is_invertible(const Superoperator& s) {
  const double rc = reciprocal_condition(s);
  return std::isfinite(rc) && rc > 1.0 / max_condition;
}

inline Superoperator inverse(const Superoperator& s) {
  if (!is_invertible(s)) throw NonInvertibleError("superoperator is singular (condition estimate above 1e12)");
  return {s.shape(), Eigen::PartialPivLU<RMatrix>(s.matrix()).inverse()};
}

/// Unit coordinate vector of I_N / sqrt(N); tr(X) = sqrt(N) * (trace_direction . coords(X)).
inline RVector trace_direction(int n) {
  RVector u = to_coords(CMatrix::Identity(n, n));
  return u / u.norm();
}

/// Largest |tr(S(B)) - tr(B)| over basis elements B.
inline double trace_defect(const Superoperator& s) {
  const int n = s.shape().total();
  const RVector u = trace_direction(n);
  // tr(Y) = sqrt(N) u.c_Y, so S is trace preserving iff u^T S = u^T.
  const RVector row = s.matrix().transpose() * u - u;
  return std::sqrt(static_cast<double>(n)) * row.cwiseAbs().maxCoeff();
}

inline bool is_trace_preserving(const Superoperator& s, double tolerance = 1e-10) {
  return trace_defect(s) <= tolerance;
}

// ---------------------------------------------------------------------------
// Canonical automorphisms

inline constexpr double unitary_tol = 1e-10;

/// Ψ(⊗A_i) = ⊗ψ_i(A_{perm[i]}) with ψ_i(X) = U_i X U_i* or U_i X^T U_i*.
struct CanonicalAutomorphism {
  TensorShape shape;
  Slots perm;                     ///< output slot i is fed by input slot perm[i]
  std::vector<CMatrix> unitaries; ///< one per output slot
  std::vector<bool> tflags;       ///< transpose before conjugating, per output slot

  static CanonicalAutomorphism identity(const TensorShape& shape) {
    CanonicalAutomorphism a;
    a.shape = shape;
    for (int i = 0; i < shape.factors(); ++i) {
      a.perm.push_back(i);
      a.unitaries.push_back(CMatrix::Identity(shape.dim(i), shape.dim(i)));
      a.tflags.push_back(false);
    }
    return a;
  }

  void validate() const {
    const int k = shape.factors();
    if (static_cast<int>(unitaries.size()) != k || static_cast<int>(tflags.size()) != k)
      throw InvalidAutomorphismError("automorphism needs one unitary and one flag per slot");
    try {
      require_permutation(perm, k);
    } catch (const ShapeError& e) {
      throw InvalidAutomorphismError(e.what());
    }
    for (int i = 0; i < k; ++i) {
      if (shape.dim(perm[i]) != shape.dim(i))
        throw InvalidAutomorphismError("permutation maps slot " + std::to_string(perm[i]) + " (dim " +
                                       std::to_string(shape.dim(perm[i])) + ") onto slot " + std::to_string(i) +
                                       " (dim " + std::to_string(shape.dim(i)) + ")");
      const CMatrix& u = unitaries[i];
      if (u.rows() != shape.dim(i) || u.cols() != shape.dim(i))
        throw InvalidAutomorphismError("unitary for slot " + std::to_string(i) + " has wrong size");
      const double defect = (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
      if (defect > unitary_tol)
        throw InvalidAutomorphismError("matrix for slot " + std::to_string(i) + " is not unitary (defect " +
                                       std::to_string(defect) + ")");
    }
  }

  /// Action on a general N x N matrix (complex-linear).
  [[nodiscard]] CMatrix act(const CMatrix& x) const {
    CMatrix y = permute_factors(x, shape, invert_permutation(perm));
    Slots flipped;
    for (int i = 0; i < shape.factors(); ++i)
      if (tflags[i]) flipped.push_back(i);
    y = partial_transpose(y, shape, flipped);
    const CMatrix u = kron(std::span<const CMatrix>(unitaries));
    return u * y * u.adjoint();
  }
};

/// a∘b: apply b first, then a.
inline CanonicalAutomorphism compose(const CanonicalAutomorphism& a, const CanonicalAutomorphism& b) {
  if (!(a.shape == b.shape)) throw ShapeError("cannot compose automorphisms on different shapes");
  CanonicalAutomorphism c;
  c.shape = a.shape;
  for (int i = 0; i < a.shape.factors(); ++i) {
    const int j = a.perm[i];
    c.perm.push_back(b.perm[j]);
    c.tflags.push_back(a.tflags[i] != b.tflags[j]);
    c.unitaries.push_back(a.unitaries[i] * (a.tflags[i] ? CMatrix(b.unitaries[j].conjugate()) : b.unitaries[j]));
  }
  return c;
}

inline CanonicalAutomorphism inverse(const CanonicalAutomorphism& a) {
  CanonicalAutomorphism c;
  c.shape = a.shape;
  const int k = a.shape.factors();
  c.perm = invert_permutation(a.perm);
  c.unitaries.resize(k);
  c.tflags.resize(k);
  for (int i = 0; i < k; ++i) {
    const int j = a.perm[i];
    c.tflags[j] = a.tflags[i];
    c.unitaries[j] = a.tflags[i] ? CMatrix(a.unitaries[i].transpose()) : CMatrix(a.unitaries[i].adjoint());
  }
  return c;
}

/// Uniform over dimension-compatible permutations, Haar unitaries, fair flags.
inline CanonicalAutomorphism random_canonical(const TensorShape& shape, Rng& rng) {
  CanonicalAutomorphism a;
  a.shape = shape;
  const int k = shape.factors();
  a.perm.resize(k);
  // Shuffle within each dimension class.
  std::vector<bool> done(k, false);
  for (int i = 0; i < k; ++i) {
    if (done[i]) continue;
    Slots cls;
    for (int j = i; j < k; ++j)
      if (shape.dim(j) == shape.dim(i)) cls.push_back(j);
    Slots shuffled = cls;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (std::size_t m = 0; m < cls.size(); ++m) {
      a.perm[cls[m]] = shuffled[m];
      done[cls[m]] = true;
    }
  }
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < k; ++i) {
    a.unitaries.push_back(random_unitary(shape.dim(i), rng));
    a.tflags.push_back(coin(rng));
  }
  return a;
}

/// Column-by-column: each gm-v1 basis element pushed through permutation,
/// per-slot transpose and per-slot unitary conjugation.
inline Superoperator superop_of(const CanonicalAutomorphism& a) {
  a.validate();
  const int n = a.shape.total();
  const Eigen::Index d = static_cast<Eigen::Index>(n) * n;
  RMatrix m(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const HermitianOperator b = basis_element(n, static_cast<int>(k));
    m.col(k) = to_coords(a.act(b.matrix()));
  }
  return {a.shape, m};
}

// ---------------------------------------------------------------------------
// L0 + t L1

/// L0(A) = tr(A)/N I_N, i.e. the rank-one projector onto the identity direction.
inline Superoperator depolarizing_map(const TensorShape& shape) {
  const RVector u = trace_direction(shape.total());
  return {shape, u * u.transpose()};
}

/// Projects a seed matrix onto { L1 : tr(L1(A)) = 0 for all A } by zeroing
/// its component along the identity direction on the output side.
inline Superoperator depolarizing_direction(const TensorShape& shape, const RMatrix& seed_matrix) {
  const RVector u = trace_direction(shape.total());
  return {shape, seed_matrix - u * (u.transpose() * seed_matrix)};
}

inline Superoperator random_depolarizing_direction(const TensorShape& shape, Rng& rng) {
  const int d = shape.total() * shape.total();
  return depolarizing_direction(shape, real_gaussian(d, d, rng));
}

inline Superoperator lemma3_map(const Superoperator& l1, double t) {
  const Superoperator l0 = depolarizing_map(l1.shape());
  return {l1.shape(), l0.matrix() + t * l1.matrix()};
}

/// Largest |t| for which L0 + t L1 provably maps all of S into the inscribed ball:
/// τ = r / (2 σ_max(L1)). σ_max bounds ‖L1(P)‖_F over every pure P since ‖P‖_F = 1,
/// and the factor 1/2 is a safety margin. Returns +inf when L1 = 0.
inline double find_safe_t(const Superoperator& l1) {
  if (trace_defect(lemma3_map(l1, 1.0)) > 1e-9)
    throw ShapeError("find_safe_t requires a trace-annihilating L1");
  const double sigma = Eigen::JacobiSVD<RMatrix>(l1.matrix()).singularValues()(0);
  if (sigma == 0.0) return std::numeric_limits<double>::infinity();
  return inscribed_ball_radius(l1.shape()) / (2.0 * sigma);
}

struct DeterminantProfile {
  bool degenerate = false;
  double exponent = 0;        ///< least-squares slope of log|det| against log|t|
  double constant = 0;        ///< mean of det / t^(N^2-1)
  double constant_spread = 0; ///< max relative deviation of det / t^(N^2-1) from the mean
  std::vector<double> ts;
  std::vector<double> determinants;
};

/// det(L0 + t L1) should equal t^(N^2-1) f(L1).
inline DeterminantProfile determinant_profile(const Superoperator& l1, const std::vector<double>& ts) {
  std::vector<double> distinct = ts;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3 || std::any_of(ts.begin(), ts.end(), [](double t) { return t == 0.0; }))
    throw ShapeError("determinant_profile needs at least three distinct nonzero t samples");

  DeterminantProfile p;
  p.ts = ts;
  for (double t : ts) p.determinants.push_back(Eigen::PartialPivLU<RMatrix>(lemma3_map(l1, t).matrix()).determinant());
  if (std::all_of(p.determinants.begin(), p.determinants.end(), [](double d) { return std::abs(d) < 1e-300; })) {
    p.degenerate = true;
    return p;
  }

  const double power = static_cast<double>(l1.shape().total()) * l1.shape().total() - 1.0;
  const std::size_t m = ts.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(std::abs(ts[i]));
    const double y = std::log(std::abs(p.determinants[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  p.exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);

  std::vector<double> c;
  for (std::size_t i = 0; i < m; ++i) c.push_back(p.determinants[i] / std::pow(ts[i], power));
  double mean = 0;
  for (double v : c) mean += v;
  mean /= static_cast<double>(m);
  p.constant = mean;
  for (double v : c) p.constant_spread = std::max(p.constant_spread, std::abs(v - mean) / std::abs(mean));
  return p;
}

}  // namespace sepauto
