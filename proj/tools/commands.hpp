#pragma once

// Subcommand implementations for the sepauto CLI. Each command takes a fully
// resolved RunConfig, writes its report, and returns the process exit code.

#include <cstdint>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>

#include "sepauto/sepauto.hpp"

namespace sepauto::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int negative = 2;   ///< not-preserver, entangled, verify below 100%
inline constexpr int ambiguous = 3;  ///< numerically-ambiguous, inconclusive
inline constexpr int parse = 64;
inline constexpr int data = 65;      ///< shape mismatch or invalid operator
inline constexpr int no_input = 66;
inline constexpr int numerical = 70;
inline constexpr int io = 74;
}  // namespace exit_code

struct RunConfig {
  std::string command;
  std::string shape;  ///< "2x2x3"; empty means "take it from the input file"
  std::uint64_t seed = 1;
  double tol_accept = 1e-8;
  int angles = 64;
  int samples = 64;
  int starts = 16;
  std::string kind = "canonical";
  std::optional<double> t;
  std::string in;
  std::string out;
  std::string answer;
  std::string points;
};

inline std::string quoted(const std::string& s) {
  std::string o = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') o += '\\';
    o += c;
  }
  return o + "\"";
}

/// Full resolved configuration, echoed at the head of every report.
inline std::string config_json(const RunConfig& c) {
  std::string s = "{\"command\":" + quoted(c.command) + ",\"shape\":" + quoted(c.shape) +
                  ",\"seed\":" + std::to_string(c.seed) + ",\"tol_accept\":" + io::fmt_real(c.tol_accept) +
                  ",\"angles\":" + std::to_string(c.angles) + ",\"samples\":" + std::to_string(c.samples) +
                  ",\"starts\":" + std::to_string(c.starts) + ",\"kind\":" + quoted(c.kind) +
                  ",\"t\":" + (c.t ? io::fmt_real(*c.t) : std::string("null")) + ",\"in\":" + quoted(c.in) +
                  ",\"out\":" + quoted(c.out) + "}";
  return s;
}

inline std::string config_comment(const RunConfig& c) { return "# config " + config_json(c) + "\n"; }

inline void emit(const RunConfig& c, const std::string& text, std::ostream& stdout_) {
  if (c.out.empty()) {
    stdout_ << text;
  } else {
    io::write_file(c.out, text);
  }
}

inline TensorShape resolve_shape(const RunConfig& c, const TensorShape& from_file) {
  if (c.shape.empty()) return from_file;
  const TensorShape s = TensorShape::parse(c.shape);
  if (!(s == from_file)) throw ShapeError("--shape " + s.str() + " does not match input shape " + from_file.str());
  return s;
}

inline TensorShape shape_for_dim(const RunConfig& c, int n) {
  if (c.shape.empty()) throw ShapeError("--shape is required for " + c.command);
  const TensorShape s = TensorShape::parse(c.shape);
  if (s.total() != n)
    throw ShapeError("--shape " + s.str() + " has dimension " + std::to_string(s.total()) + ", operator has " +
                     std::to_string(n));
  return s;
}

inline std::string fmt_bools(const std::vector<bool>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += std::string(i ? "," : "") + (v[i] ? "true" : "false");
  return s + "]";
}

inline std::string fmt_reals(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + io::fmt_real(v[i]);
  return s + "]";
}

inline std::string fmt_rows(const RMatrix& m) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    s += i ? ",[" : "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += (j ? "," : "") + io::fmt_real(m(i, j));
    s += "]";
  }
  return s + "]";
}

// ---------------------------------------------------------------------------

inline int cmd_gen(const RunConfig& c, std::ostream& out) {
  if (c.shape.empty()) throw ShapeError("--shape is required for gen");
  const TensorShape shape = TensorShape::parse(c.shape);
  Rng rng(c.seed);
  if (c.kind == "canonical") {
    const CanonicalAutomorphism a = random_canonical(shape, rng);
    emit(c, io::write_sop(superop_of(a)), out);
    std::string answer = c.answer;
    if (answer.empty() && !c.out.empty()) answer = c.out + ".answer.json";
    if (!answer.empty()) io::write_file(answer, io::write_answer(a));
    return exit_code::ok;
  }
  if (c.kind == "lemma3") {
    const Superoperator l1 = random_depolarizing_direction(shape, rng);
    const double t = c.t ? *c.t : find_safe_t(l1) / 2.0;
    emit(c, io::write_sop(lemma3_map(l1, t)), out);
    return exit_code::ok;
  }
  throw std::invalid_argument("--kind must be 'canonical' or 'lemma3'");
}

inline int cmd_decompose(const RunConfig& c, std::ostream& out) {
  const Superoperator s = io::read_sop(io::read_file(c.in));
  const TensorShape shape = resolve_shape(c, s.shape());
  DecomposeConfig dc;
  dc.accept_tol = c.tol_accept;
  dc.samples = c.samples;
  dc.seed = c.seed;
  const DecompositionReport rep = decompose(s, shape, dc);

  std::string r = "{\"config\":" + config_json(c) + ",\n\"verdict\":" + quoted(to_string(rep.verdict)) +
                  ",\n\"stage\":" + quoted(rep.stage);
  if (rep.automorphism) {
    const auto& a = *rep.automorphism;
    r += ",\n\"perm\":" + io::fmt_ints(a.perm) + ",\n\"tflags\":" + fmt_bools(a.tflags) + ",\n\"unitaries\":[";
    for (std::size_t i = 0; i < a.unitaries.size(); ++i) r += (i ? "," : "") + io::fmt_entries(a.unitaries[i]);
    r += "]";
  }
  r += ",\n\"residual\":" + (std::isfinite(rep.residual) ? io::fmt_real(rep.residual) : std::string("null"));
  r += ",\n\"samples_checked\":" + std::to_string(rep.samples_checked) +
       ",\n\"samples_preserved\":" + std::to_string(rep.samples_preserved);
  if (rep.f_matrix.size()) r += ",\n\"f_matrix\":" + fmt_rows(rep.f_matrix);
  if (rep.f_matrix_alt.size()) r += ",\n\"f_matrix_alt\":" + fmt_rows(rep.f_matrix_alt);
  r += ",\n\"witnesses\":[";
  for (std::size_t i = 0; i < rep.witnesses.size(); ++i) {
    const auto& w = rep.witnesses[i];
    r += std::string(i ? "," : "") + "{\"reason\":" + quoted(w.reason);
    if (w.state) {
      r += ",\"factors\":[";
      for (std::size_t k = 0; k < w.state->factors().size(); ++k)
        r += (k ? "," : "") + io::fmt_vector(w.state->factors()[k]);
      r += "]";
    }
    r += "}";
  }
  r += "]}\n";
  emit(c, r, out);
  switch (rep.verdict) {
    case Verdict::canonical: return exit_code::ok;
    case Verdict::not_preserver: return exit_code::negative;
    case Verdict::numerically_ambiguous: return exit_code::ambiguous;
  }
  return exit_code::numerical;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out) {
  const Superoperator s = io::read_sop(io::read_file(c.in));
  const TensorShape shape = resolve_shape(c, s.shape());
  const SampleCheck sc = sample_preservation(s, shape, c.samples, c.seed, DecomposeConfig{}.purity_tol);
  const double rate = sc.checked ? static_cast<double>(sc.preserved) / sc.checked : 0.0;
  std::string r = "{\"config\":" + config_json(c) + ",\n\"samples\":" + std::to_string(sc.checked) +
                  ",\n\"preserved\":" + std::to_string(sc.preserved) + ",\n\"pass_rate\":" + io::fmt_real(rate) +
                  ",\n\"failures\":[";
  for (std::size_t i = 0; i < sc.failures.size(); ++i) r += (i ? "," : "") + quoted(sc.failures[i].reason);
  r += "]}\n";
  emit(c, r, out);
  return sc.preserved == sc.checked ? exit_code::ok : exit_code::negative;
}

inline int cmd_ppt(const RunConfig& c, std::ostream& out) {
  const HermitianOperator x = io::read_hmx(io::read_file(c.in));
  const TensorShape shape = shape_for_dim(c, x.dim());
  const auto slots = ppt_check(x, shape);
  const Separability v = ppt_verdict(x, shape);
  const double m = min_ppt_eigenvalue(slots);
  char summary[128];
  std::snprintf(summary, sizeof summary, "%s, min PT eigenvalue %.10g", to_string(v), m);
  std::string r = "{\"config\":" + config_json(c) + ",\n\"summary\":" + quoted(summary) +
                  ",\n\"verdict\":" + quoted(to_string(v)) + ",\n\"exact\":" +
                  (ppt_exact_shape(shape) ? "true" : "false") + ",\n\"min_pt_eigenvalue\":" + io::fmt_real(m) +
                  ",\n\"slots\":[";
  for (std::size_t i = 0; i < slots.size(); ++i)
    r += std::string(i ? "," : "") + "{\"slot\":" + std::to_string(slots[i].slot) +
         ",\"min_eigenvalue\":" + io::fmt_real(slots[i].min_eigenvalue) + "}";
  r += "]}\n";
  emit(c, r, out);
  switch (v) {
    case Separability::separable: return exit_code::ok;
    case Separability::entangled: return exit_code::negative;
    case Separability::inconclusive: return exit_code::ambiguous;
  }
  return exit_code::numerical;
}

inline int cmd_pnr(const RunConfig& c, std::ostream& out) {
  const io::MatrixFile f = io::read_matrix(io::read_file(c.in));
  const TensorShape shape = shape_for_dim(c, static_cast<int>(f.matrix.rows()));
  PNROptions opts;
  opts.rayleigh.starts = c.starts;
  opts.rayleigh.seed = c.seed;
  opts.seed = derive_seed(c.seed, 0xfeed);
  const PNRResult res = support_function(f.matrix, shape, c.angles, opts);

  std::string s = config_comment(c) + "theta,h\n";
  for (std::size_t j = 0; j < res.thetas.size(); ++j)
    s += io::fmt_real(res.thetas[j]) + "," + io::fmt_real(res.support[j]) + "\n";
  emit(c, s, out);

  std::string points_path = c.points;
  if (points_path.empty() && !c.out.empty()) points_path = c.out + ".points.csv";
  if (!points_path.empty()) {
    std::string p = config_comment(c) + "re,im\n";
    for (const cplx z : res.inner_points) p += io::fmt_real(z.real()) + "," + io::fmt_real(z.imag()) + "\n";
    io::write_file(points_path, p);
  }
  return exit_code::ok;
}

/// Separability-preserving non-automorphism: τ, determinant profile, ball
/// membership of sampled images, and the decomposer's refusal.
inline int cmd_lemma3(const RunConfig& c, std::ostream& out) {
  if (c.shape.empty()) throw ShapeError("--shape is required for lemma3");
  const TensorShape shape = TensorShape::parse(c.shape);
  Rng rng(c.seed);
  const Superoperator l1 = random_depolarizing_direction(shape, rng);
  const double tau = find_safe_t(l1);
  const double t = c.t ? *c.t : tau / 2.0;
  const Superoperator map = lemma3_map(l1, t);
  const DeterminantProfile prof = determinant_profile(l1, {tau / 4.0, tau / 2.0, tau});

  std::string r = "{\"config\":" + config_json(c) + ",\n\"tau\":" + io::fmt_real(tau) + ",\n\"t\":" + io::fmt_real(t) +
                  ",\n\"trace_defect\":" + io::fmt_real(trace_defect(map)) +
                  ",\n\"determinant\":{\"degenerate\":" + (prof.degenerate ? "true" : "false") +
                  ",\"exponent\":" + io::fmt_real(prof.exponent) + ",\"expected_exponent\":" +
                  std::to_string(shape.total() * shape.total() - 1) + ",\"constant\":" + io::fmt_real(prof.constant) +
                  ",\"constant_spread\":" + io::fmt_real(prof.constant_spread) + "}";

  if (shape.factors() >= 2) {
    const double radius = inscribed_ball_radius(shape);
    Rng srng(derive_seed(c.seed, 1));
    int inside = 0;
    for (int i = 0; i < c.samples; ++i)
      if (in_inscribed_ball(apply(map, random_product_pure(shape, srng).projector()), radius)) ++inside;
    r += ",\n\"ball_radius\":" + io::fmt_real(radius) + ",\n\"images_in_ball\":" + std::to_string(inside) +
         ",\n\"images_sampled\":" + std::to_string(c.samples);
  }
  DecomposeConfig dc;
  dc.seed = c.seed;
  r += ",\n\"decompose_verdict\":" + quoted(to_string(decompose(map, shape, dc).verdict)) + "}\n";
  emit(c, r, out);
  return exit_code::ok;
}

/// Runs a command and maps library errors onto exit codes.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.command == "gen") return cmd_gen(c, out);
    if (c.command == "decompose") return cmd_decompose(c, out);
    if (c.command == "verify") return cmd_verify(c, out);
    if (c.command == "ppt") return cmd_ppt(c, out);
    if (c.command == "pnr") return cmd_pnr(c, out);
    if (c.command == "lemma3") return cmd_lemma3(c, out);
    err << "unknown command '" << c.command << "'\n";
    return exit_code::usage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_code::parse;
  } catch (const ShapeError& e) {
    err << "shape error: " << e.what() << "\n";
    return exit_code::data;
  } catch (const NotHermitianError& e) {
    err << "invalid operator: " << e.what() << "\n";
    return exit_code::data;
  } catch (const NotDensityError& e) {
    err << "invalid operator: " << e.what() << "\n";
    return exit_code::data;
  } catch (const InputMissingError& e) {
    err << "input error: " << e.what() << "\n";
    return exit_code::no_input;
  } catch (const OutputError& e) {
    err << "output error: " << e.what() << "\n";
    return exit_code::io;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::numerical;
  }
}

}  // namespace sepauto::cli
