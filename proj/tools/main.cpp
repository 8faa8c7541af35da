#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"

using sepauto::cli::RunConfig;

int main(int argc, char** argv) {
  CLI::App app{"sepauto: automorphisms of separable multipartite states"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::optional<double> t;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--shape", cfg.shape, "factor dimensions, e.g. 2x2x3");
    sub->add_option("--seed", cfg.seed, "seed for every random draw");
    sub->add_option("--out", cfg.out, "report / output file (default: stdout)");
  };

  auto* gen = app.add_subcommand("gen", "generate a canonical automorphism or an L0+tL1 map (SOP-1)");
  common(gen);
  gen->add_option("--kind", cfg.kind, "canonical | lemma3")->check(CLI::IsMember({"canonical", "lemma3"}));
  gen->add_option("--answer", cfg.answer, "sidecar answer file (default: <out>.answer.json)");
  gen->add_option("--t", t, "t for lemma3 (default: half the safe radius)");

  auto* dec = app.add_subcommand("decompose", "recover (perm, unitaries, transpose flags) from an SOP-1 file");
  common(dec);
  dec->add_option("--in", cfg.in, "SOP-1 input")->required();
  dec->add_option("--tol-accept", cfg.tol_accept, "residual acceptance tolerance");
  dec->add_option("--samples", cfg.samples, "product pure states in the sample check");

  auto* ver = app.add_subcommand("verify", "sampled product-pure-state preservation rate of an SOP-1 map");
  common(ver);
  ver->add_option("--in", cfg.in, "SOP-1 input")->required();
  ver->add_option("--samples", cfg.samples, "number of sampled product pure states");

  auto* ppt = app.add_subcommand("ppt", "partial-transpose test of an HMX-1 density operator");
  common(ppt);
  ppt->add_option("--in", cfg.in, "HMX-1 input")->required();

  auto* pnr = app.add_subcommand("pnr", "support function of the product numerical range (CSV)");
  common(pnr);
  pnr->add_option("--in", cfg.in, "HMX-1 input (hermitian or matrix)")->required();
  pnr->add_option("--angles", cfg.angles, "number of angles on [0, 2pi)");
  pnr->add_option("--starts", cfg.starts, "random restarts per angle");
  pnr->add_option("--points", cfg.points, "inner points CSV (default: <out>.points.csv)");

  auto* l3 = app.add_subcommand("lemma3", "safe t, determinant profile and decomposer verdict for L0+tL1");
  common(l3);
  l3->add_option("--samples", cfg.samples, "product pure states pushed into the inscribed ball");
  l3->add_option("--t", t, "t (default: half the safe radius)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return sepauto::cli::exit_code::usage;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.t = t;
  return sepauto::cli::run(cfg, std::cout, std::cerr);
}
