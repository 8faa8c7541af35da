#pragma once

// Pure and product pure states, separable ensembles, PPT tests and the
// inscribed separable ball around the maximally mixed state.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sepauto/hermitian.hpp"
#include "sepauto/random.hpp"

namespace sepauto {

inline constexpr double default_purity_tol = 1e-9;

/// Unit complex column; complex-Gaussian normalization, so unitarily invariant.
inline CVector random_pure(int n, Rng& rng) {
  if (n < 1) throw ShapeError("random_pure needs n >= 1");
  CVector v = complex_gaussian(n, 1, rng).col(0);
  return v / v.norm();
}

inline CVector random_pure(int n, std::uint64_t seed) {
  Rng rng(seed);
  return random_pure(n, rng);
}

class ProductPureState {
 public:
  ProductPureState(TensorShape shape, std::vector<CVector> factors)
      : shape_(std::move(shape)), factors_(std::move(factors)) {
    if (static_cast<int>(factors_.size()) != shape_.factors())
      throw ShapeError("product state needs one factor per slot");
    for (int s = 0; s < shape_.factors(); ++s) {
      if (factors_[s].size() != shape_.dim(s)) throw ShapeError("factor dimension does not match shape");
      if (std::abs(factors_[s].norm() - 1.0) > 1e-12) throw ShapeError("product state factors must be unit vectors");
    }
  }

  [[nodiscard]] const TensorShape& shape() const { return shape_; }
  [[nodiscard]] const std::vector<CVector>& factors() const { return factors_; }

  [[nodiscard]] CVector vector() const {
    CVector v = factors_[0];
    for (std::size_t i = 1; i < factors_.size(); ++i) v = kron(v, factors_[i]);
    return v;
  }

  [[nodiscard]] HermitianOperator projector() const { return HermitianOperator::projector(vector()); }

 private:
  TensorShape shape_;
  std::vector<CVector> factors_;
};

inline ProductPureState random_product_pure(const TensorShape& shape, Rng& rng) {
  std::vector<CVector> f;
  for (int d : shape.dims()) f.push_back(random_pure(d, rng));
  return ProductPureState(shape, std::move(f));
}

inline ProductPureState random_product_pure(const TensorShape& shape, std::uint64_t seed) {
  Rng rng(seed);
  return random_product_pure(shape, rng);
}

/// Basis product state e_{i_0} ⊗ ... ⊗ e_{i_{k-1}}.
inline ProductPureState basis_product_state(const TensorShape& shape, const std::vector<int>& digits) {
  std::vector<CVector> f;
  for (int s = 0; s < shape.factors(); ++s) f.push_back(CVector::Unit(shape.dim(s), digits.at(s)));
  return ProductPureState(shape, std::move(f));
}

class SeparableEnsemble {
 public:
  SeparableEnsemble(std::vector<double> weights, std::vector<ProductPureState> points)
      : weights_(std::move(weights)), points_(std::move(points)) {
    if (weights_.size() != points_.size() || points_.empty())
      throw ShapeError("ensemble needs one weight per point and at least one point");
    double sum = 0;
    for (double w : weights_) {
      if (w < 0) throw NotDensityError("ensemble weights must be nonnegative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw NotDensityError("ensemble weights must sum to 1");
    for (const auto& p : points_)
      if (!(p.shape() == points_.front().shape())) throw ShapeError("ensemble points have different shapes");
  }

  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
  [[nodiscard]] const std::vector<ProductPureState>& points() const { return points_; }
  [[nodiscard]] const TensorShape& shape() const { return points_.front().shape(); }

  [[nodiscard]] HermitianOperator mixture() const {
    const int n = shape().total();
    CMatrix m = CMatrix::Zero(n, n);
    for (std::size_t j = 0; j < points_.size(); ++j) {
      const CVector v = points_[j].vector();
      m += weights_[j] * (v * v.adjoint());
    }
    return HermitianOperator(m);
  }

 private:
  std::vector<double> weights_;
  std::vector<ProductPureState> points_;
};

/// Flat-Dirichlet weights over `count` random product pure states.
inline SeparableEnsemble random_separable_ensemble(const TensorShape& shape, int count, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(static_cast<std::size_t>(count));
  double sum = 0;
  for (auto& x : w) sum += (x = expo(rng));
  for (auto& x : w) x /= sum;
  // Exact renormalization keeps the sum within a few ulps of one.
  double s2 = 0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) s2 += w[i];
  w.back() = 1.0 - s2;
  std::vector<ProductPureState> pts;
  for (int i = 0; i < count; ++i) pts.push_back(random_product_pure(shape, rng));
  return SeparableEnsemble(std::move(w), std::move(pts));
}

struct PurityVerdict {
  bool pure_product = false;
  std::string diagnostic;
  std::optional<int> failing_slot;
  double value = 0;  ///< the failing purity (or global purity on success)
};

/// Recognizes ⊗P_{n_i}: density, globally pure, and pure on every single slot.
inline PurityVerdict is_pure_product(const HermitianOperator& x, const TensorShape& shape,
                                     double tol = default_purity_tol) {
  detail::require_dim(x.matrix(), shape);
  PurityVerdict v;
  if (!x.is_density(tol, tol)) {
    v.diagnostic = "not a density operator (trace " + std::to_string(x.trace()) + ", min eigenvalue " +
                   std::to_string(x.min_eigenvalue()) + ")";
    v.value = x.purity();
    return v;
  }
  const double global = x.purity();
  if (global < 1.0 - tol) {
    v.diagnostic = "global purity " + std::to_string(global) + " < 1";
    v.value = global;
    return v;
  }
  if (shape.factors() > 1) {
    for (int r = 0; r < shape.factors(); ++r) {
      const double p = partial_trace(x, shape, {r}).purity();
      if (p < 1.0 - tol) {
        v.diagnostic = "slot " + std::to_string(r) + " purity " + std::to_string(p) + " < 1";
        v.failing_slot = r;
        v.value = p;
        return v;
      }
    }
  }
  v.pure_product = true;
  v.value = global;
  v.diagnostic = "pure product";
  return v;
}

struct PPTSlotResult {
  int slot = 0;
  double min_eigenvalue = 0;
};

inline constexpr double ppt_tol = 1e-10;

/// Minimum eigenvalue of every single-slot partial transpose.
inline std::vector<PPTSlotResult> ppt_check(const HermitianOperator& x, const TensorShape& shape) {
  detail::require_dim(x.matrix(), shape);
  if (!x.is_density()) throw NotDensityError("ppt_check requires a density operator");
  std::vector<PPTSlotResult> out;
  for (int s = 0; s < shape.factors(); ++s)
    out.push_back({s, partial_transpose(x, shape, {s}).min_eigenvalue()});
  return out;
}

enum class Separability { separable, entangled, inconclusive };

inline const char* to_string(Separability s) {
  switch (s) {
    case Separability::separable: return "separable";
    case Separability::entangled: return "entangled";
    case Separability::inconclusive: return "inconclusive";
  }
  return "?";
}

inline bool ppt_exact_shape(const TensorShape& shape) {
  if (shape.factors() != 2) return false;
  const int m = shape.dim(0), n = shape.dim(1);
  return m + n <= 5;
}

inline double min_ppt_eigenvalue(const std::vector<PPTSlotResult>& r) {
  double m = r.front().min_eigenvalue;
  for (const auto& s : r) m = std::min(m, s.min_eigenvalue);
  return m;
}

/// PPT is necessary and sufficient on 2x2, 2x3, 3x2.
inline Separability ppt_separable_exact(const HermitianOperator& x, const TensorShape& shape) {
  if (!ppt_exact_shape(shape))
    throw UnsupportedShapeError("PPT is only a necessary condition on shape " + shape.str());
  return min_ppt_eigenvalue(ppt_check(x, shape)) >= -ppt_tol ? Separability::separable : Separability::entangled;
}

/// Sound verdict for any shape: exact where PPT decides, otherwise entangled or inconclusive.
inline Separability ppt_verdict(const HermitianOperator& x, const TensorShape& shape) {
  if (ppt_exact_shape(shape)) return ppt_separable_exact(x, shape);
  if (min_ppt_eigenvalue(ppt_check(x, shape)) < -ppt_tol) return Separability::entangled;
  return Separability::inconclusive;
}

/// Traceless Hermitian direction with unit Frobenius norm.
inline HermitianOperator random_traceless_direction(int n, Rng& rng) {
  CMatrix h = random_hermitian_matrix(n, rng);
  h -= (h.trace() / static_cast<double>(n)) * CMatrix::Identity(n, n);
  return HermitianOperator(h / h.norm());
}

inline constexpr int ball_self_check_samples = 1000;
inline constexpr std::uint64_t ball_self_check_seed = 0x5eed'ba11ULL;

/// Frobenius radius r around I/N such that every trace-one X with
/// ‖X - I/N‖_F <= r is separable: 1/sqrt(N(N-1)) / 2^(k-2).
///
/// The radius is checked against random boundary points X = I/N + r D, each of
/// which must pass PPT on every slot; a failure throws ConfigurationError.
inline double inscribed_ball_radius(const TensorShape& shape, int self_check_samples = ball_self_check_samples) {
  if (shape.factors() < 2) throw ShapeError("inscribed ball radius needs at least two factors");
  const int n = shape.total();
  const double r = 1.0 / std::sqrt(static_cast<double>(n) * (n - 1)) / std::pow(2.0, shape.factors() - 2);

  Rng rng(ball_self_check_seed);
  const CMatrix centre = CMatrix::Identity(n, n) / static_cast<double>(n);
  for (int i = 0; i < self_check_samples; ++i) {
    const HermitianOperator d = random_traceless_direction(n, rng);
    const HermitianOperator x(centre + r * d.matrix());
    for (int s = 0; s < shape.factors(); ++s) {
      const double m = partial_transpose(x, shape, {s}).min_eigenvalue();
      if (m < -1e-12)
        throw ConfigurationError("inscribed ball radius " + std::to_string(r) + " fails PPT on slot " +
                                 std::to_string(s) + " for shape " + shape.str());
    }
  }
  return r;
}

inline double distance_from_maximally_mixed(const HermitianOperator& x) {
  const int n = x.dim();
  return (x.matrix() - CMatrix::Identity(n, n) / static_cast<double>(n)).norm();
}

/// Ball certificate: trace one and inside the inscribed ball.
inline bool in_inscribed_ball(const HermitianOperator& x, double radius) {
  return std::abs(x.trace() - 1.0) <= tol::trace && distance_from_maximally_mixed(x) <= radius;
}

}  // namespace sepauto
