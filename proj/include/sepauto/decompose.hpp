#pragma once

// Recovers (π, U_i, transpose flags) from a superoperator that maps product
// pure states to product pure states, or refuses with evidence.
//
// Pipeline: trace preservation and invertibility, sampled extreme-point
// preservation, F-test on factor maps with E_00 probes (cross-checked with
// E_11 probes), permutation extraction, per-factor Choi analysis, residual.

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sepauto/superop.hpp"

namespace sepauto {

inline const double sqrt2 = std::sqrt(2.0);

/// Pure probe states, one per slot (the entry at the slot under test is ignored).
using Probes = std::vector<HermitianOperator>;

inline Probes basis_probes(const TensorShape& shape, int level) {
  Probes p;
  for (int d : shape.dims()) p.push_back(HermitianOperator::projector(CVector::Unit(d, level)));
  return p;
}

namespace detail {

inline HermitianOperator insert_at(const TensorShape& shape, int slot, const HermitianOperator& a,
                                   const Probes& probes) {
  HermitianOperator x = slot == 0 ? a : probes[0];
  for (int s = 1; s < shape.factors(); ++s) x = kron(x, s == slot ? a : probes[s]);
  return x;
}

}  // namespace detail

/// A ↦ tr^{out}(S(Q_0 ⊗ ... ⊗ A at in_slot ⊗ ... ⊗ Q_{k-1})) as its n_out^2 x n_in^2 coordinate matrix.
inline RMatrix factor_map(const Superoperator& s, const TensorShape& shape, int out_slot, int in_slot,
                          const Probes& probes) {
  if (!(s.shape() == shape)) throw ShapeError("superoperator shape does not match " + shape.str());
  if (static_cast<int>(probes.size()) != shape.factors()) throw ShapeError("need one probe per slot");
  const int n_in = shape.dim(in_slot), n_out = shape.dim(out_slot);
  RMatrix m(n_out * n_out, n_in * n_in);
  for (int k = 0; k < n_in * n_in; ++k) {
    const HermitianOperator x = detail::insert_at(shape, in_slot, basis_element(n_in, k), probes);
    m.col(k) = to_coords(partial_trace(apply(s, x), shape, {out_slot}));
  }
  return m;
}

/// M[p][r] = ‖φ_r(E_00 - E_11 at slot p)‖_F; √2 for congruence-type factor maps, 0 for trace functionals.
inline RMatrix f_test(const Superoperator& s, const TensorShape& shape, const Probes& probes) {
  if (!(s.shape() == shape)) throw ShapeError("superoperator shape does not match " + shape.str());
  const int k = shape.factors();
  RMatrix f(k, k);
  for (int p = 0; p < k; ++p) {
    const int n = shape.dim(p);
    CMatrix a = CMatrix::Zero(n, n);
    a(0, 0) = 1.0;
    a(1, 1) = -1.0;
    const HermitianOperator image = apply(s, detail::insert_at(shape, p, HermitianOperator(a), probes));
    for (int r = 0; r < k; ++r) f(p, r) = partial_trace(image, shape, {r}).frobenius();
  }
  return f;
}

enum class PermutationStatus { ok, failure, ambiguous };

struct PermutationResult {
  PermutationStatus status = PermutationStatus::failure;
  Slots perm;  ///< perm[r] = input slot feeding output slot r
  std::vector<int> offending_rows;
  std::string message;
};

struct FTestThresholds {
  double form_i = sqrt2 / 2.0;
  double ambiguous_low = 0.2;
};

inline PermutationResult permutation_from_f(const RMatrix& f, const TensorShape& shape,
                                            const FTestThresholds& th = {}) {
  const int k = shape.factors();
  PermutationResult res;
  for (int p = 0; p < k; ++p)
    for (int r = 0; r < k; ++r)
      if (f(p, r) > th.ambiguous_low && f(p, r) < th.form_i) {
        res.status = PermutationStatus::ambiguous;
        res.offending_rows.push_back(p);
        res.message = "F entry (" + std::to_string(p) + "," + std::to_string(r) + ") = " + std::to_string(f(p, r)) +
                      " lies in the ambiguous band";
        return res;
      }

  std::vector<int> col_count(k, 0);
  res.perm.assign(k, -1);
  for (int p = 0; p < k; ++p) {
    int hits = 0;
    for (int r = 0; r < k; ++r)
      if (f(p, r) >= th.form_i) {
        ++hits;
        ++col_count[r];
        res.perm[r] = p;
      }
    if (hits != 1) res.offending_rows.push_back(p);
  }
  if (!res.offending_rows.empty()) {
    res.message = "rows without exactly one congruence-type factor map; all-constant rows contradict bijectivity";
    return res;
  }
  for (int r = 0; r < k; ++r)
    if (col_count[r] != 1) {
      res.message = "above-threshold pattern is not a permutation";
      return res;
    }
  for (int r = 0; r < k; ++r)
    if (shape.dim(res.perm[r]) != shape.dim(r)) {
      res.offending_rows.push_back(res.perm[r]);
      res.message = "slot " + std::to_string(res.perm[r]) + " (dim " + std::to_string(shape.dim(res.perm[r])) +
                    ") cannot map onto slot " + std::to_string(r) + " (dim " + std::to_string(shape.dim(r)) + ")";
    }
  if (!res.offending_rows.empty()) return res;
  res.status = PermutationStatus::ok;
  res.message = "permutation";
  return res;
}

/// Σ_ij E_ij ⊗ ψ(E_ij) for the complex-linear extension of a Hermiticity-preserving ψ on H_n.
inline CMatrix choi_matrix(const RMatrix& psi, int n) {
  if (psi.cols() != n * n) throw ShapeError("factor map has wrong number of columns");
  const int m = coords_dim(psi.rows());
  auto image = [&](const CMatrix& h) { return from_coords(RVector(psi * to_coords(h))).matrix(); };
  CMatrix c = CMatrix::Zero(n * m, n * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CMatrix e = CMatrix::Zero(n, n);
      e(i, j) = 1.0;
      const CMatrix h1 = (e + e.adjoint()) / 2.0;
      const CMatrix h2 = (e - e.adjoint()) / cplx(0.0, 2.0);
      c.block(i * m, j * m, m, m) = image(h1) + cplx(0.0, 1.0) * image(h2);
    }
  return c;
}

/// Coordinate matrix of the transpose map on H_n (Y_ij coordinates flip sign).
inline RMatrix transpose_coords(int n) {
  RMatrix t = RMatrix::Identity(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int k = offdiag_index(n, i, j, true);
      t(k, k) = -1.0;
    }
  return t;
}

struct FactorRecovery {
  bool ok = false;
  CMatrix unitary;
  bool tflag = false;
  double residual = 0;  ///< max ‖ψ(B) - U B^(T) U*‖_F over basis elements
  std::string message;
};

/// Largest-magnitude entry made positive real.
inline CMatrix phase_normalize(const CMatrix& u) {
  Eigen::Index bi = 0, bj = 0;
  u.cwiseAbs().maxCoeff(&bi, &bj);
  const cplx z = u(bi, bj);
  if (std::abs(z) == 0) return u;
  return u * (std::abs(z) / z);
}

namespace detail {

struct RankOneExtraction {
  bool ok = false;
  CMatrix unitary;
  double min_eigenvalue = 0;
  double gap_ratio = 0;
};

inline RankOneExtraction extract_rank_one(const CMatrix& choi, int n) {
  RankOneExtraction out;
  Eigen::SelfAdjointEigenSolver<CMatrix> es((choi + choi.adjoint()) / 2.0);
  const RVector& ev = es.eigenvalues();
  const auto d = ev.size();
  out.min_eigenvalue = ev(0);
  const double top = ev(d - 1);
  const double second = std::max(std::abs(ev(d - 2)), std::abs(ev(0)));
  out.gap_ratio = second == 0 ? std::numeric_limits<double>::infinity() : top / second;
  if (ev(0) < -1e-8 || top <= 0 || out.gap_ratio < 1e6) return out;

  const CVector v = es.eigenvectors().col(d - 1) * std::sqrt(static_cast<double>(n));
  CMatrix raw(n, n);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) raw(a, i) = v(i * n + a);  // column i of U is block i of v
  Eigen::JacobiSVD<CMatrix> svd(raw, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.unitary = phase_normalize(svd.matrixU() * svd.matrixV().adjoint());
  out.ok = true;
  return out;
}

}  // namespace detail

inline double factor_residual(const RMatrix& psi, int n, const CMatrix& u, bool tflag) {
  double worst = 0;
  for (int k = 0; k < n * n; ++k) {
    const HermitianOperator b = basis_element(n, k);
    const CMatrix bt = tflag ? CMatrix(b.matrix().transpose()) : b.matrix();
    const CMatrix expected = u * bt * u.adjoint();
    const CMatrix got = from_coords(RVector(psi.col(k))).matrix();
    worst = std::max(worst, (got - expected).norm());
  }
  return worst;
}

/// ψ = U·U* (tflag false) or U·^T U* (tflag true), read off a rank-one PSD Choi matrix.
inline FactorRecovery recover_factor(const RMatrix& psi, int n) {
  FactorRecovery res;
  if (psi.rows() != n * n || psi.cols() != n * n) {
    res.message = "factor map is not square on H_" + std::to_string(n);
    return res;
  }
  for (const bool flag : {false, true}) {
    const RMatrix map = flag ? RMatrix(psi * transpose_coords(n)) : psi;
    const auto ex = detail::extract_rank_one(choi_matrix(map, n), n);
    if (!ex.ok) continue;
    res.unitary = ex.unitary;
    res.tflag = flag;
    res.residual = factor_residual(psi, n, ex.unitary, flag);
    if (res.residual < 1e-8) {
      res.ok = true;
      res.message = flag ? "transpose then conjugation" : "conjugation";
      return res;
    }
  }
  res.message = "neither the map nor its composition with transpose has a rank-one PSD Choi matrix";
  return res;
}

// ---------------------------------------------------------------------------

enum class Verdict { canonical, not_preserver, numerically_ambiguous };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::canonical: return "canonical";
    case Verdict::not_preserver: return "not-preserver";
    case Verdict::numerically_ambiguous: return "numerically-ambiguous";
  }
  return "?";
}

struct DecomposeConfig {
  int samples = 64;
  double accept_tol = 1e-8;
  double purity_tol = 1e-8;
  double trace_tol = 1e-9;
  std::uint64_t seed = 1;
  FTestThresholds thresholds;
};

struct Witness {
  std::optional<ProductPureState> state;
  std::string reason;
};

struct DecompositionReport {
  Verdict verdict = Verdict::not_preserver;
  std::string stage;  ///< pipeline stage that decided the verdict
  std::optional<CanonicalAutomorphism> automorphism;
  RMatrix f_matrix;
  RMatrix f_matrix_alt;
  double residual = std::numeric_limits<double>::infinity();
  int samples_checked = 0;
  int samples_preserved = 0;
  std::vector<Witness> witnesses;
};

struct SampleCheck {
  int checked = 0;
  int preserved = 0;
  std::vector<Witness> failures;
};

/// Pushes `samples` seeded random product pure states through S.
inline SampleCheck sample_preservation(const Superoperator& s, const TensorShape& shape, int samples,
                                       std::uint64_t seed, double tol, std::size_t max_witnesses = 4) {
  SampleCheck out;
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    const ProductPureState p = random_product_pure(shape, rng);
    const PurityVerdict v = is_pure_product(apply(s, p.projector()), shape, tol);
    ++out.checked;
    if (v.pure_product) {
      ++out.preserved;
    } else if (out.failures.size() < max_witnesses) {
      out.failures.push_back({p, v.diagnostic});
    }
  }
  return out;
}

inline DecompositionReport decompose(const Superoperator& s, const TensorShape& shape,
                                     const DecomposeConfig& config = {}) {
  if (!(s.shape() == shape)) throw ShapeError("superoperator shape does not match " + shape.str());
  DecompositionReport rep;
  auto refuse = [&](Verdict v, std::string stage, std::string reason) {
    rep.verdict = v;
    rep.stage = std::move(stage);
    if (!reason.empty()) rep.witnesses.push_back({std::nullopt, std::move(reason)});
    return rep;
  };

  if (const double td = trace_defect(s); td > config.trace_tol)
    return refuse(Verdict::not_preserver, "trace", "not trace preserving (defect " + std::to_string(td) + ")");
  if (!is_invertible(s)) return refuse(Verdict::not_preserver, "invertibility", "superoperator is singular");

  const SampleCheck sc = sample_preservation(s, shape, config.samples, config.seed, config.purity_tol);
  rep.samples_checked = sc.checked;
  rep.samples_preserved = sc.preserved;
  if (sc.preserved != sc.checked) {
    rep.witnesses = sc.failures;
    return refuse(Verdict::not_preserver, "samples", "");
  }

  const Probes probes = basis_probes(shape, 0);
  rep.f_matrix = f_test(s, shape, probes);
  rep.f_matrix_alt = f_test(s, shape, basis_probes(shape, 1));

  const PermutationResult pr = permutation_from_f(rep.f_matrix, shape, config.thresholds);
  if (pr.status == PermutationStatus::ambiguous) return refuse(Verdict::numerically_ambiguous, "f-test", pr.message);
  if (pr.status == PermutationStatus::failure) return refuse(Verdict::not_preserver, "permutation", pr.message);
  const PermutationResult alt = permutation_from_f(rep.f_matrix_alt, shape, config.thresholds);
  if (alt.status != PermutationStatus::ok || alt.perm != pr.perm)
    return refuse(Verdict::numerically_ambiguous, "probe-cross-check",
                  "F-test pattern differs between E_00 and E_11 probes");

  CanonicalAutomorphism a;
  a.shape = shape;
  a.perm = pr.perm;
  for (int r = 0; r < shape.factors(); ++r) {
    const RMatrix psi = factor_map(s, shape, r, pr.perm[r], probes);
    const FactorRecovery fr = recover_factor(psi, shape.dim(r));
    if (!fr.ok)
      return refuse(Verdict::not_preserver, "factor", "slot " + std::to_string(r) + ": " + fr.message);
    a.unitaries.push_back(fr.unitary);
    a.tflags.push_back(fr.tflag);
  }

  rep.residual = (s.matrix() - superop_of(a).matrix()).norm();
  rep.automorphism = a;
  if (rep.residual < config.accept_tol) {
    rep.verdict = Verdict::canonical;
    rep.stage = "complete";
    return rep;
  }
  return refuse(Verdict::numerically_ambiguous, "residual",
                "assembled automorphism misses the input by " + std::to_string(rep.residual));
}

}  // namespace sepauto
