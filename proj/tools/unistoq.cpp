#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "unistoq/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"finite stochastic systems, their Hilbert-space lift, and unistochastic dilations"};
  app.require_subcommand(1);

  std::string in_path;
  std::string out_path;
  std::string out_dir;
  bool print_report = false;

  auto* validate = app.add_subcommand("validate", "check a system document against every constraint");
  validate->add_option("file", in_path, "system document (JSON)")->required();

  auto* evolve = app.add_subcommand("evolve", "marginal distribution at every grid time, as CSV");
  evolve->add_option("file", in_path, "system document (JSON)")->required();
  evolve->add_option("-o,--out", out_path, "CSV output path (stdout when omitted)");

  auto* dilate = app.add_subcommand("dilate", "unistochastic dilation with per-time unitaries");
  dilate->add_option("file", in_path, "system document (JSON)")->required();
  dilate->add_option("-o,--out", out_dir, "output directory for per-time CSV matrices");
  dilate->add_flag("--report", print_report, "print the defect report to stdout");

  unistoq::cli::AnalyzeOptions aopts;
  double markov_dt = 0.0;
  std::vector<double> divis;
  double unis_t = 0.0;
  auto* analyze = app.add_subcommand("analyze", "Markovianity, divisibility, unistochasticity");
  analyze->add_option("file", in_path, "system document (JSON)")->required();
  auto* omark = analyze->add_option("--markov", markov_dt, "compare stored transitions to powers of Gamma(dt)");
  auto* odiv = analyze->add_option("--divisibility", divis,
                                   "solve Gamma(t) = X Gamma(t') for column-stochastic X")
                   ->expected(2);
  auto* ouni = analyze->add_option("--unistochastic", unis_t, "unistochasticity of Gamma(t)");

  unistoq::cli::GenerateOptions gopts;
  auto* generate = app.add_subcommand("generate", "write a worked example document");
  generate->add_option("kind", gopts.kind, "permutation | markov-chain | rds | random")->required();
  generate->add_option("-n", gopts.n, "configuration count")->required();
  generate->add_option("--seed", gopts.seed, "PRNG seed (rds, random)");
  generate->add_option("--times", gopts.times, "grid times, must include 0")->delimiter(',');
  generate->add_option("--dt", gopts.dt, "base time step (permutation, markov-chain)");
  generate->add_option("--steps", gopts.steps, "number of steps after 0 (markov-chain)");
  generate->add_option("--outcomes", gopts.outcomes, "sample-space size (rds)");
  generate->add_option("--cycles", gopts.cycles, "one-based cycles, e.g. \"1,2;3\" (permutation)");
  generate->add_option("--gamma", gopts.gamma, "row-major base matrix (markov-chain)")->delimiter(',');
  generate->add_option("--p0", gopts.p0, "initial distribution (uniform when omitted)")->delimiter(',');
  generate->add_option("-o,--out", out_path, "output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help
    app.exit(e);
    return unistoq::cli::exit_invalid;
  }

  if (validate->parsed()) return unistoq::cli::cmd_validate(in_path, std::cout, std::cerr);
  if (evolve->parsed()) return unistoq::cli::cmd_evolve(in_path, out_path, std::cout, std::cerr);
  if (dilate->parsed())
    return unistoq::cli::cmd_dilate(in_path, out_dir, print_report, std::cout, std::cerr);
  if (analyze->parsed()) {
    if (omark->count()) aopts.markov_dt = markov_dt;
    if (odiv->count()) aopts.divisibility = std::make_pair(divis.at(0), divis.at(1));
    if (ouni->count()) aopts.unistochastic_t = unis_t;
    return unistoq::cli::cmd_analyze(in_path, aopts, std::cout, std::cerr);
  }
  if (generate->parsed()) return unistoq::cli::cmd_generate(gopts, out_path, std::cout, std::cerr);
  return unistoq::cli::exit_invalid;
}
