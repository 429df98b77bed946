#include "sfb/problem.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Spectral-flow bifurcation toolkit for periodic Hamiltonian systems"};

  std::string problem_path, out_dir = ".", cmd;
  int K_override = 0, grid_override = 0;
  bool relax_ii = false;

  app.add_option("--problem", problem_path, "Problem file (JSON)")->required();
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--cmd", cmd, "Command")
      ->required()
      ->check(CLI::IsMember({"envelope", "monodromy", "sfl", "parity", "analyze",
                             "continue"}));
  app.add_option("--K", K_override, "Override truncation order");
  app.add_option("--grid", grid_override, "Override lambda-scan resolution");
  app.add_flag("--relax-ii", relax_ii,
               "Evaluate part (iii) by the Delta condition alone");

  CLI11_PARSE(app, argc, argv);

  try {
    sfb::ProblemSpec spec = sfb::parse_problem(problem_path);
    if (K_override > 0) spec.K = K_override;
    if (grid_override > 1) spec.grid_points = grid_override;
    if (relax_ii) spec.relax_ii = true;
    return sfb::run_command(cmd, spec, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
