#include <CLI11.hpp>

#include "commands.hpp"

using namespace deblur::cli;

int main(int argc, char** argv) {
  CLI::App app{"deblur: simulate, diagnose, and solve Gaussian image deblurring problems"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand(
      "simulate", "Generate a test scene: x_true, b_true = A x_true, and noisy b");
  simulate->add_option("--size", sim.size, "Image side length p (p x p scene)")
      ->default_val(64);
  simulate->add_option("--scene", sim.scene, "Scene kind: H | single_pixel")->default_val("H");
  simulate->add_option("--s", sim.s, "Gaussian spread in pixels")->default_val(2.0);
  simulate->add_option("--half-width", sim.half_width,
                       "PSF truncation radius (default ceil(4s))");
  simulate->add_option("--bc", sim.bc, "Boundary condition: zero | periodic | reflexive")
      ->default_val("zero");
  simulate->add_option("--noise", sim.noise,
                       "Noise spec: gaussian:<eta> | poisson:<peak> | saltpepper:<fraction>")
      ->default_val("gaussian:0.001");
  simulate->add_option("--seed", sim.seed, "RNG seed")->default_val(7);
  simulate->add_option("-o,--out", sim.out, "Output scene directory")->required();

  DeblurArgs deb;
  auto* deblur_cmd = app.add_subcommand("deblur", "Reconstruct a simulated scene");
  deblur_cmd->add_option("--scene", deb.scene_dir, "Scene directory from `simulate`")
      ->required();
  deblur_cmd->add_option("--method", deb.method,
                         "naive | tsvd[:k] | tikhonov | gtik | tv")
      ->default_val("tikhonov");
  deblur_cmd->add_option("--select", deb.select,
                         "lcurve | discrepancy:<delta|auto> | fixed:<value>");
  deblur_cmd->add_option("--tau", deb.tau, "Discrepancy safety factor (>= 1)")
      ->default_val(1.0);
  deblur_cmd->add_option("--grid-points", deb.grid_points, "L-curve grid size")
      ->default_val(50);
  deblur_cmd->add_option("-o,--out", deb.out, "Output directory (default: scene dir)");

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand(
      "analyze", "Export sigma.csv, picard.csv, lcurve.csv, coefficients.csv");
  analyze->add_option("--scene", an.scene_dir, "Scene directory")->required();
  analyze->add_option("--grid-points", an.grid_points, "L-curve grid size")->default_val(50);
  analyze->add_option("-o,--out", an.out, "Output directory (default: scene dir)");

  MultilevelArgs ml;
  auto* multilevel = app.add_subcommand(
      "multilevel", "Haar-coarsened reconstructions at every level");
  multilevel->add_option("--scene", ml.scene_dir, "Scene directory")->required();
  multilevel->add_option("--levels", ml.levels, "Hierarchy depth")->default_val(1);
  multilevel->add_option("--method", ml.method, "tikhonov | tv")->default_val("tikhonov");
  multilevel->add_option("--select", ml.select, "discrepancy:<delta|auto> | fixed:<mu>")
      ->default_val("discrepancy:auto");
  multilevel->add_option("--tau", ml.tau, "Discrepancy safety factor")->default_val(1.0);
  multilevel->add_option("-o,--out", ml.out, "Output directory (default: scene dir)");

  ReproArgs repro;
  auto* repro_cmd = app.add_subcommand(
      "repro-figures", "Regenerate the data behind every figure at 64x64 in one run");
  repro_cmd->add_option("-o,--out", repro.out, "Output directory")->required();
  repro_cmd->add_option("--seed", repro.seed, "RNG seed")->default_val(7);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitFlags;
  }

  if (simulate->parsed()) return run_simulate(sim);
  if (deblur_cmd->parsed()) return run_deblur(deb);
  if (analyze->parsed()) return run_analyze(an);
  if (multilevel->parsed()) return run_multilevel(ml);
  if (repro_cmd->parsed()) return run_repro_figures(repro);
  return kExitFlags;
}
