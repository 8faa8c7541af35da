#pragma once

// Product numerical range W(T) = { tr(T X) : X product pure }.
//
// Only the convex hull is certified, through its support function
// h(θ) = max_X Re(e^{-iθ} tr(T X)) = max_X tr(H_θ X), H_θ = (e^{-iθ}T + e^{iθ}T*)/2,
// maximized by alternating top-eigenvector ascent over the slots.

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "sepauto/superop.hpp"

namespace sepauto {

inline HermitianOperator herm_part(const CMatrix& t, double theta) {
  const cplx phase = std::polar(1.0, -theta);
  return HermitianOperator((phase * t + std::conj(phase) * t.adjoint()) / 2.0);
}

struct RayleighOptions {
  int starts = 16;
  int iters = 200;
  double tol = 1e-12;
  std::uint64_t seed = 7;
};

struct RayleighResult {
  double value = -std::numeric_limits<double>::infinity();
  std::optional<ProductPureState> state;
  bool monotone = true;  ///< every update of every start was nondecreasing
  int sweeps = 0;        ///< sweeps used by the winning start
};

namespace detail {

/// n_j x n_j matrix x_rest* H x_rest with every slot except j contracted.
inline CMatrix effective_matrix(const CMatrix& h, const TensorShape& shape, const std::vector<CVector>& x, int slot,
                                const std::vector<std::vector<int>>& digits) {
  const int n = shape.total();
  std::vector<cplx> weight(n);
  std::vector<int> local(n);
  for (int i = 0; i < n; ++i) {
    cplx w = 1.0;
    for (int s = 0; s < shape.factors(); ++s)
      if (s != slot) w *= x[s](digits[i][s]);
    weight[i] = w;
    local[i] = digits[i][slot];
  }
  const int d = shape.dim(slot);
  CMatrix eff = CMatrix::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    const cplx wi = std::conj(weight[i]);
    if (wi == cplx(0.0)) continue;
    for (int j = 0; j < n; ++j) eff(local[i], local[j]) += wi * h(i, j) * weight[j];
  }
  return (eff + eff.adjoint()) / 2.0;
}

}  // namespace detail

/// Lower bound on max tr(H ⊗ x_i x_i*) over product pure states.
inline RayleighResult max_product_rayleigh(const HermitianOperator& h, const TensorShape& shape,
                                           const RayleighOptions& opts = {}) {
  detail::require_dim(h.matrix(), shape);
  const int n = shape.total();
  std::vector<std::vector<int>> digits(n);
  for (int i = 0; i < n; ++i) digits[i] = shape.decode(i);
  const double scale = std::max(1.0, h.matrix().cwiseAbs().maxCoeff());

  RayleighResult best;
  Rng rng(opts.seed);
  for (int start = 0; start < opts.starts; ++start) {
    std::vector<CVector> x = random_product_pure(shape, rng).factors();
    double value = -std::numeric_limits<double>::infinity();
    int sweep = 0;
    for (; sweep < opts.iters; ++sweep) {
      const double before = value;
      for (int j = 0; j < shape.factors(); ++j) {
        const CMatrix eff = detail::effective_matrix(h.matrix(), shape, x, j, digits);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(eff);
        const double updated = es.eigenvalues()(shape.dim(j) - 1);
        if (updated < value - 1e-12 * scale) best.monotone = false;
        value = updated;
        x[j] = es.eigenvectors().col(shape.dim(j) - 1);
        x[j] /= x[j].norm();
      }
      if (std::abs(value - before) < opts.tol) {
        ++sweep;
        break;
      }
    }
    if (value > best.value) {
      best.value = value;
      best.state = ProductPureState(shape, x);
      best.sweeps = sweep;
    }
  }
  return best;
}

inline cplx product_expectation(const CMatrix& t, const ProductPureState& p) {
  const CVector v = p.vector();
  return v.dot(t * v);  // v* T v
}

struct PNRResult {
  std::vector<double> thetas;
  std::vector<double> support;
  std::vector<cplx> inner_points;
  std::vector<ProductPureState> argmax_states;
  bool monotone = true;
};

struct PNROptions {
  RayleighOptions rayleigh;
  int inner_samples = 1000;
  std::uint64_t seed = 11;
};

/// h(θ_j) on a uniform grid θ_j = 2π j / theta_count, plus seeded inner samples.
inline PNRResult support_function(const CMatrix& t, const TensorShape& shape, int theta_count,
                                  const PNROptions& opts = {}) {
  if (theta_count < 4) throw ShapeError("support_function needs at least 4 angles");
  detail::require_dim(t, shape);
  PNRResult res;
  for (int j = 0; j < theta_count; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / theta_count;
    RayleighOptions ro = opts.rayleigh;
    ro.seed = derive_seed(opts.rayleigh.seed, static_cast<std::uint64_t>(j));
    const RayleighResult r = max_product_rayleigh(herm_part(t, theta), shape, ro);
    res.thetas.push_back(theta);
    res.support.push_back(r.value);
    res.argmax_states.push_back(*r.state);
    res.monotone = res.monotone && r.monotone;
  }
  Rng rng(opts.seed);
  for (int i = 0; i < opts.inner_samples; ++i)
    res.inner_points.push_back(product_expectation(t, random_product_pure(shape, rng)));
  return res;
}

/// max_θ |h(θ; T) - h(θ; Ψ*(T))| with Ψ = superop_of(auto), Ψ* extended complex-linearly.
inline double invariance_check(const CMatrix& t, const CanonicalAutomorphism& a, int theta_count,
                               const PNROptions& opts = {}) {
  if (!(a.shape.total() == t.rows())) throw ShapeError("automorphism shape does not match T");
  const CMatrix image = apply_complex(adjoint(superop_of(a)), t);
  PNROptions inner = opts;
  inner.inner_samples = 0;
  const PNRResult h1 = support_function(t, a.shape, theta_count, inner);
  const PNRResult h2 = support_function(image, a.shape, theta_count, inner);
  double dev = 0;
  for (std::size_t j = 0; j < h1.support.size(); ++j) dev = std::max(dev, std::abs(h1.support[j] - h2.support[j]));
  return dev;
}

}  // namespace sepauto
