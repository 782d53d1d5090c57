#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "ctdde: simulation and oscillation analysis for difference equations "
      "with continuous time, x(t+1) - x(t) + sum_k a_k(t) x(h_k(t)) = 0"};
  app.require_subcommand(1);

  ctdde::cli::Options opts;
  ctdde::cli::ReproOptions repro_opts;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("spec", opts.spec_path, "equation-spec file (JSON)")->required();
    cmd->add_option("--out", opts.out_dir, "output directory (default .)");
    cmd->add_option("--Q", opts.q_override, "override samples per unit interval");
    cmd->add_option("--T", opts.t_override, "override simulation horizon");
  };

  CLI::App* sim = app.add_subcommand("simulate", "simulate and write trajectory CSV + report");
  add_common(sim);

  CLI::App* analyze = app.add_subcommand("analyze", "run every applicable analysis; "
                                                    "exit 0 on a verdict, 3 if inconclusive");
  add_common(analyze);
  analyze->add_option("--alpha-grid", opts.alpha_grid_override,
                      "number of shift values scanned in [0,1)");

  CLI::App* env = app.add_subcommand("envelopes", "write rigorous + sampled envelope CSV");
  add_common(env);
  env->add_option("--alpha", opts.alpha, "interval shift in [0,1)");

  CLI::App* bound = app.add_subcommand("bound", "verify certificate and construct the "
                                                "trapped solution");
  add_common(bound);

  CLI::App* repro = app.add_subcommand("repro", "re-derive the bundled worked examples");
  repro->add_option("--specs", repro_opts.specs_dir, "directory of bundled spec files");
  repro->add_option("--out", repro_opts.out_dir, "output directory (default .)");
  repro->add_option("--only", repro_opts.only, "run a single example by name");

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) return ctdde::cli::cmd_simulate(opts);
  if (analyze->parsed()) return ctdde::cli::cmd_analyze(opts);
  if (env->parsed()) return ctdde::cli::cmd_envelopes(opts);
  if (bound->parsed()) return ctdde::cli::cmd_bound(opts);
  if (repro->parsed()) return ctdde::cli::cmd_repro(repro_opts);
  std::cerr << "no subcommand\n";
  return 1;
}
