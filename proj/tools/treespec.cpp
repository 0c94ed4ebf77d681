#include <CLI11.hpp>
#include <iostream>

#include "treespec/cli.hpp"

int main(int argc, char** argv) {
  using treespec::cli::JobConfig;
  JobConfig cfg;
  CLI::App app{"Spectral computations for radial metric trees and their halfline reductions"};
  std::string input;
  std::string output;

  app.add_option("--command,command", cfg.command, "Command to run")
      ->required()
      ->check(CLI::IsMember(treespec::cli::commands()));
  app.add_option("--input", input, "JSON input spec");
  app.add_option("--emin", cfg.emin, "Lower end of the energy window");
  app.add_option("--emax", cfg.emax, "Upper end of the energy window");
  app.add_option("--grid", cfg.grid, "Grid size (band/defect samples) or scan density (eigenvalue solvers)");
  app.add_option("--depth", cfg.depth, "Truncation depth of the tree");
  app.add_option("--eta", cfg.eta, "Imaginary part of the spectral parameter");
  app.add_option("--tol", cfg.tol, "Tolerance for the command");
  app.add_option("--energy", cfg.energy, "Energy for transfer and weyl");
  app.add_option("--basepoint", cfg.basepoint, "Basepoint for weyl and reflectionless");
  app.add_option("--right-end", cfg.right_end, "Dirichlet truncation point for eigs-halfline, endpoint for transfer");
  app.add_option("--horizon", cfg.horizon, "Number of generations examined by check");
  app.add_flag("--extrapolate", cfg.extrapolate, "Use eta-extrapolated boundary values");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", output, "Write the output to this file instead of stdout");
  app.add_option("--threads", cfg.threads, "Worker threads (default: TREESPEC_THREADS or all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : treespec::cli::kExitValidation;
  }
  if (!input.empty()) cfg.input_path = input;
  if (!output.empty()) cfg.output_path = output;

  const treespec::cli::RunResult r = treespec::cli::run(cfg);
  if (!cfg.output_path) std::cout << r.output;
  if (!r.error.empty()) std::cerr << r.error << "\n";
  return r.exit_code;
}
