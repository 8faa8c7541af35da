// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "sepauto/sepauto.hpp"

namespace fs = std::filesystem;
using namespace sepauto;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double phase_distance(const CMatrix& a, const CMatrix& b) {
  const cplx overlap = (b.adjoint() * a).trace();
  const cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx(1.0);
  return (a - phase * b).norm();
}

const std::vector<TensorShape> round_trip_shapes = {{2, 2}, {3, 2}, {3, 3}, {2, 2, 2}, {2, 2, 3}};

struct Recovered {
  CanonicalAutomorphism truth;
  RMatrix f;
};
std::vector<Recovered> corpus;  // filled by criterion 1, reused by criterion 2

Outcome round_trip() {
  Outcome o;
  double worst_phase = 0, worst_residual = 0;
  int failures = 0, total = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t si = 0; si < round_trip_shapes.size(); ++si) {
    const TensorShape& s = round_trip_shapes[si];
    Rng rng(derive_seed(2024, si));
    for (int trial = 0; trial < 100; ++trial, ++total) {
      const CanonicalAutomorphism a = random_canonical(s, rng);
      const DecompositionReport rep = decompose(superop_of(a), s);
      corpus.push_back({a, rep.f_matrix});
      bool ok = rep.verdict == Verdict::canonical && rep.automorphism && rep.automorphism->perm == a.perm &&
                rep.automorphism->tflags == a.tflags && rep.residual < 1e-8;
      if (ok) {
        for (int i = 0; i < s.factors(); ++i) {
          const double d = phase_distance(rep.automorphism->unitaries[i], a.unitaries[i]);
          worst_phase = std::max(worst_phase, d);
          ok = ok && d < 1e-8;
        }
        worst_residual = std::max(worst_residual, rep.residual);
      }
      if (!ok) ++failures;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.pass = failures == 0 && secs < 60.0;
  o.detail = std::to_string(total - failures) + "/" + std::to_string(total) + " recovered, max phase-aligned error " +
             fmt("%.3g", worst_phase) + ", max residual " + fmt("%.3g", worst_residual) + ", " + fmt("%.2f", secs) +
             " s";
  return o;
}

Outcome f_test_fidelity() {
  Outcome o;
  double worst = 0;
  int pattern_errors = 0;
  for (const auto& [a, f] : corpus) {
    const int k = a.shape.factors();
    if (f.rows() != k || f.cols() != k) {
      ++pattern_errors;
      continue;
    }
    for (int p = 0; p < k; ++p)
      for (int r = 0; r < k; ++r) {
        const double v = f(p, r);
        worst = std::max(worst, std::min(std::abs(v), std::abs(v - sqrt2)));
        if ((v > sqrt2 / 2) != (a.perm[r] == p)) ++pattern_errors;
      }
  }
  o.pass = !corpus.empty() && worst < 1e-6 && pattern_errors == 0;
  o.detail = std::to_string(corpus.size()) + " F-matrices, max distance to {0, sqrt2} " + fmt("%.3g", worst) +
             ", pattern errors " + std::to_string(pattern_errors);
  return o;
}

Outcome contradiction_fixture() {
  const CMatrix p1 = oracle::unit(2, 0, 0), p2 = oracle::unit(2, 1, 1);
  const CMatrix p3 = 0.5 * CMatrix::Ones(2, 2);
  CMatrix p4 = 0.5 * CMatrix::Ones(2, 2);
  p4(0, 1) = p4(1, 0) = -0.5;
  const bool sums_equal = (p1 + p2) == (p3 + p4);
  const CMatrix diff = oracle::kron(p1, p1) + oracle::kron(p2, p2) - oracle::kron(p3, p3) - oracle::kron(p4, p4);
  // entrywise: eight entries of magnitude 1/2, so the norm is sqrt(8/4) = sqrt2
  double sq = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) sq += std::norm(diff(i, j));
  const double norm = std::sqrt(sq);
  Outcome o;
  o.pass = sums_equal && std::abs(norm - std::sqrt(2.0)) < 1e-15 && norm > 0.9;
  o.detail = std::string("sums ") + (sums_equal ? "equal" : "differ") + ", norm " + fmt("%.17g", norm);
  return o;
}

Outcome determinant_identity() {
  Outcome o;
  double worst_slope = 0, worst_spread = 0;
  int degenerate = 0, failures = 0, total = 0;
  for (const auto& s : {TensorShape{2}, TensorShape{2, 2}}) {
    const int n = s.total();
    Rng rng(derive_seed(4, n));
    for (int trial = 0; trial < 20; ++trial, ++total) {
      const Superoperator l1 = random_depolarizing_direction(s, rng);
      const double sigma = Eigen::JacobiSVD<RMatrix>(l1.matrix()).singularValues()(0);
      const DeterminantProfile p = determinant_profile(l1, {0.05 / sigma, 0.1 / sigma, 0.2 / sigma, 0.4 / sigma});
      if (p.degenerate || p.constant == 0.0) {
        ++degenerate;
        continue;
      }
      const double slope_err = std::abs(p.exponent - (n * n - 1));
      worst_slope = std::max(worst_slope, slope_err);
      worst_spread = std::max(worst_spread, p.constant_spread);
      if (slope_err > 0.01 || p.constant_spread > 1e-6) ++failures;
    }
  }
  o.pass = failures == 0 && degenerate < total;
  o.detail = std::to_string(total - degenerate - failures) + "/" + std::to_string(total - degenerate) +
             " non-degenerate draws, max exponent error " + fmt("%.3g", worst_slope) + ", max relative spread " +
             fmt("%.3g", worst_spread) + ", degenerate " + std::to_string(degenerate);
  return o;
}

Outcome preserver_gap() {
  Outcome o;
  int maps = 0, refused = 0;
  long images = 0, inside = 0;
  for (const auto& s : {TensorShape{2, 2}, TensorShape{2, 3}}) {
    const double radius = inscribed_ball_radius(s);
    Rng rng(derive_seed(5, s.total()));
    for (int trial = 0; trial < 5; ++trial, ++maps) {
      const Superoperator l1 = random_depolarizing_direction(s, rng);
      const Superoperator map = lemma3_map(l1, find_safe_t(l1) / 2.0);
      for (int i = 0; i < 1000; ++i, ++images)
        if (in_inscribed_ball(apply(map, random_product_pure(s, rng).projector()), radius)) ++inside;
      if (decompose(map, s).verdict == Verdict::not_preserver) ++refused;
    }
  }
  o.pass = inside == images && refused == maps;
  o.detail = std::to_string(inside) + "/" + std::to_string(images) + " images in the inscribed ball, " +
             std::to_string(refused) + "/" + std::to_string(maps) + " maps refused as not-preserver";
  return o;
}

Outcome ppt_exactness() {
  Outcome o;
  int separable = 0, total = 0;
  for (const auto& s : {TensorShape{2, 2}, TensorShape{2, 3}}) {
    Rng rng(derive_seed(6, s.total()));
    for (int i = 0; i < 1000; ++i, ++total) {
      const SeparableEnsemble e = random_separable_ensemble(s, 1 + i % 8, rng);
      if (ppt_separable_exact(e.mixture(), s) == Separability::separable) ++separable;
    }
  }
  const HermitianOperator bell(oracle::bell_projector());
  const double m = min_ppt_eigenvalue(ppt_check(bell, TensorShape{2, 2}));
  const bool bell_ok = ppt_separable_exact(bell, TensorShape{2, 2}) == Separability::entangled &&
                       std::abs(m + 0.5) <= 1e-10;
  o.pass = separable == total && bell_ok;
  o.detail = std::to_string(separable) + "/" + std::to_string(total) + " ensembles separable, Bell min PT eigenvalue " +
             fmt("%.12g", m);
  return o;
}

Outcome pnr_invariance() {
  Outcome o;
  PNROptions opts;
  opts.rayleigh.starts = 16;
  opts.inner_samples = 0;
  double worst = 0;
  int checks = 0;
  for (const auto& [s, count] : {std::pair{TensorShape{2, 2}, 20}, std::pair{TensorShape{2, 2, 2}, 10}}) {
    Rng rng(derive_seed(7, s.total()));
    for (int i = 0; i < count; ++i, ++checks) {
      const CMatrix t = complex_gaussian(s.total(), s.total(), rng);
      worst = std::max(worst, invariance_check(t, random_canonical(s, rng), 64, opts));
    }
  }
  double oracle_gap = 0;
  Rng rng(derive_seed(7, 99));
  for (int i = 0; i < 20; ++i) {
    const CMatrix t = complex_gaussian(4, 4, rng);
    const PNRResult res = support_function(t, TensorShape{2, 2}, 64, opts);
    for (std::size_t j = 0; j < res.thetas.size(); ++j) {
      const double th = res.thetas[j];
      const CMatrix h = (std::polar(1.0, -th) * t + std::polar(1.0, th) * t.adjoint()) / 2.0;
      oracle_gap = std::max(oracle_gap, std::abs(res.support[j] - oracle::grid_max_2x2(h, 0.02)));
    }
  }
  o.pass = worst < 1e-6 && oracle_gap <= 1e-3;
  o.detail = std::to_string(checks) + " invariance checks, max deviation " + fmt("%.3g", worst) +
             ", max gap to 0.02-grid oracle " + fmt("%.3g", oracle_gap);
  return o;
}

Outcome group_laws() {
  Outcome o;
  const std::vector<TensorShape> shapes = {{2, 2}, {3, 2}, {2, 2, 2}, {2, 3, 2}};
  Rng rng(8);
  double hom = 0, adj = 0, orth = 0;
  for (int i = 0; i < 100; ++i) {
    const TensorShape& s = shapes[i % shapes.size()];
    const CanonicalAutomorphism a = random_canonical(s, rng), b = random_canonical(s, rng);
    const RMatrix sa = superop_of(a).matrix(), sb = superop_of(b).matrix();
    hom = std::max(hom, (superop_of(compose(a, b)).matrix() - sa * sb).cwiseAbs().maxCoeff());
    adj = std::max(adj, (adjoint(superop_of(a)).matrix() - superop_of(inverse(a)).matrix()).cwiseAbs().maxCoeff());
    orth = std::max(orth, (sa.transpose() * sa - RMatrix::Identity(sa.rows(), sa.cols())).cwiseAbs().maxCoeff());
  }
  o.pass = hom < 1e-9 && adj < 1e-9 && orth < 1e-9;
  o.detail = "100 pairs, homomorphism " + fmt("%.3g", hom) + ", adjoint closure " + fmt("%.3g", adj) +
             ", orthogonality " + fmt("%.3g", orth);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome formats_and_determinism() {
  Outcome o;
  Rng rng(9);
  int format_failures = 0;
  for (int i = 0; i < 20; ++i) {
    const HermitianOperator x(random_hermitian_matrix(2 + i % 5, rng));
    const std::string hx = io::write_hmx(x);
    const HermitianOperator xb = io::read_hmx(hx);
    if (xb.matrix() != x.matrix() || io::write_hmx(xb) != hx) ++format_failures;
    const Superoperator s = superop_of(random_canonical(round_trip_shapes[i % round_trip_shapes.size()], rng));
    const std::string sx = io::write_sop(s);
    const Superoperator sbk = io::read_sop(sx);
    if (sbk.matrix() != s.matrix() || !(sbk.shape() == s.shape()) || io::write_sop(sbk) != sx) ++format_failures;
  }

  const fs::path dir = fs::temp_directory_path() / ("sepauto_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string d = dir.string() + "/";
  std::ofstream(d + "bell.json") << io::write_hmx(HermitianOperator(oracle::bell_projector()));
  std::ofstream(d + "t.json") << io::write_hmx(complex_gaussian(4, 4, rng), false);

  // each entry: arguments, files whose bytes must match across reruns
  const std::vector<std::pair<std::string, std::vector<std::string>>> runs = {
      {"gen --shape 2x2x3 --seed 3 --out " + d + "c.json", {"c.json", "c.json.answer.json"}},
      {"gen --kind lemma3 --shape 2x3 --seed 3 --out " + d + "l.json", {"l.json"}},
      {"decompose --in " + d + "c.json --out " + d + "dc.json", {"dc.json"}},
      {"decompose --in " + d + "l.json --out " + d + "dl.json", {"dl.json"}},
      {"verify --in " + d + "c.json --out " + d + "v.json", {"v.json"}},
      {"ppt --in " + d + "bell.json --shape 2x2 --out " + d + "p.json", {"p.json"}},
      {"pnr --in " + d + "t.json --shape 2x2 --angles 16 --out " + d + "h.csv", {"h.csv", "h.csv.points.csv"}},
      {"lemma3 --shape 2x2 --seed 4 --samples 100 --out " + d + "l3.json", {"l3.json"}},
  };
  int determinism_failures = 0;
  std::string failed;
  for (const auto& [args, files] : runs) {
    const std::string cmd = std::string(SEPAUTO_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    std::vector<std::string> first;
    int s1 = std::system(cmd.c_str());
    for (const auto& f : files) first.push_back(slurp(dir / f));
    int s2 = std::system(cmd.c_str());
    bool same = WIFEXITED(s1) && WIFEXITED(s2) && WEXITSTATUS(s1) == WEXITSTATUS(s2);
    for (std::size_t i = 0; i < files.size(); ++i) same = same && !first[i].empty() && slurp(dir / files[i]) == first[i];
    if (!same) {
      ++determinism_failures;
      failed += " [" + args.substr(0, args.find(' ')) + "]";
    }
  }
  fs::remove_all(dir);
  o.pass = format_failures == 0 && determinism_failures == 0;
  o.detail = "format round-trip failures " + std::to_string(format_failures) + ", CLI reruns byte-identical " +
             std::to_string(runs.size() - determinism_failures) + "/" + std::to_string(runs.size()) + failed;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"round-trip recovery", round_trip},
      {"F-test fidelity", f_test_fidelity},
      {"linearity contradiction fixture", contradiction_fixture},
      {"determinant identity", determinant_identity},
      {"preserver vs automorphism gap", preserver_gap},
      {"PPT exactness on small shapes", ppt_exactness},
      {"product numerical range invariance", pnr_invariance},
      {"group laws", group_laws},
      {"format round trips and CLI determinism", formats_and_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
