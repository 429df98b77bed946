#ifndef SFB_PROBLEM_HPP
#define SFB_PROBLEM_HPP

#include "sfb/analyzer.hpp"
#include "sfb/continuation.hpp"

#include <filesystem>
#include <limits>

// Problem-file parsing (strict JSON), command dispatch and report/trace
// serialization. The toolkit's only user surface.

namespace sfb {

struct ProblemSpec {
  int n = 1;
  std::string builtin;          // one of the two family descriptions
  TrigMatrixPath trig_matrix;   // used when builtin is empty
  double lambda_minus = 0.0, lambda_plus = 1.0;
  int K = 8;
  int N_t = 64;
  double tol_zero = 1e-8;
  double tol_res = 1e-9;
  double kernel_tol = 1e-7;
  bool relax_ii = false;
  int grid_points = 201;        // lambda-scan resolution

  // continuation block
  double amp_max = 6.0;
  double seed_amp = 1e-2;
  int max_steps = 1000;
  double window_lo = -10.0, window_hi = 10.0;
  double lambda_star = std::numeric_limits<double>::quiet_NaN();  // NaN: detect

  HamiltonianFamily family() const;
  AnalyzerConfig analyzer_config() const;
  ContinuationConfig continuation_config() const;
};

/// Parse and validate a problem file; unknown keys are rejected.
ProblemSpec parse_problem(const std::filesystem::path& path);
ProblemSpec parse_problem_text(const std::string& text);

/// Lossless serialization (17 significant digits); parse of the output
/// reproduces the spec.
std::string serialize_problem(const ProblemSpec& spec);

std::string report_to_json(const BifurcationReport& rep);

/// Dispatch one subcommand; artifacts are written atomically under out_dir.
/// Returns the process exit code: 0 ok, 2 hypotheses-violated.
int run_command(const std::string& cmd, const ProblemSpec& spec,
                const std::filesystem::path& out_dir);

}  // namespace sfb

#endif
