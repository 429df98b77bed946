#ifndef SFB_ANALYZER_HPP
#define SFB_ANALYZER_HPP

#include "sfb/monodromy.hpp"
#include "sfb/spectral_flow.hpp"

// Decision logic for the bifurcation criteria: eigenvalue-envelope gap
// conditions, the sandwich bounds sfl(M) <= sfl(L) <= sfl(N) with
// sfl(M) = 2n Delta(beta_-, alpha_+), and the odd-spectral-flow trigger for
// global bifurcation.

namespace sfb {

enum class Verdict { Established, NotEstablished, HypothesesViolated };

std::string to_string(Verdict v);

struct AnalyzerConfig {
  int K = 8;
  int K_check_offset = 5;   // truncation convergence: K and K + offset must agree
  bool relax_ii = false;    // part (iii): evaluate the Delta condition alone
  double autonomy_tol = 1e-10;
  double integer_tol = 1e-9;
  double nudge = 1e-6;      // shift applied to integer comparison endpoints
};

struct PartVerdict {
  Verdict verdict = Verdict::NotEstablished;
  std::string reason;
  bool tolerance_sensitive = false;
  int fired_disjunct = 0;   // which gap/orientation case applied (0 = none)
};

struct SflSandwich {
  long sfl_L = 0, sfl_M = 0, sfl_N = 0;
  long sfl_L_check = 0;     // at K + offset
  int K = 8, K_check = 13;
  long expected_M = 0;      // 2n Delta(beta_-, alpha_+)
  long expected_N = 0;      // 2n Delta(alpha_-, beta_+)
  bool formulas_hold = false;
  bool strict_sandwich = false;
  bool sfl_L_odd = false;
  std::vector<double> nudged_values;  // endpoint values shifted off integers
};

struct BifurcationReport {
  std::string family;
  double lambda_m, lambda_p;
  Envelope env_minus, env_plus;
  long delta_bm_ap, delta_am_bp;      // Delta(beta_-, alpha_+), Delta(alpha_-, beta_+)
  long delta_bp_am, delta_ap_bm;      // swapped orientation
  AdmissibilityVerdict admissibility;
  bool autonomous_at_minus;
  PartVerdict part_i, part_ii, part_iii;
  bool have_sandwich = false;
  SflSandwich sandwich;
  int parity_L = -1;                  // -1: not computed
};

PartVerdict analyze_part_i(const HamiltonianFamily& fam, double lambda_m,
                           double lambda_p, const AnalyzerConfig& cfg = {});
PartVerdict analyze_part_ii(const HamiltonianFamily& fam, double lambda_m,
                            double lambda_p, const AnalyzerConfig& cfg = {});
PartVerdict analyze_part_iii(const HamiltonianFamily& fam, double lambda_m,
                             double lambda_p, const AnalyzerConfig& cfg = {});

/// Galerkin spectral flows of the L, M, N paths with the truncation
/// convergence certificate and the exact comparison-path formulas.
SflSandwich sfl_sandwich(const HamiltonianFamily& fam, double lambda_m,
                         double lambda_p, int K, const AnalyzerConfig& cfg = {});

/// Full report: envelopes, Delta values, admissibility, all three verdicts,
/// sandwich and parity evidence.
BifurcationReport analyze(const HamiltonianFamily& fam, double lambda_m,
                          double lambda_p, const AnalyzerConfig& cfg = {});

/// Operator path of the Galerkin L-family over [lambda_m, lambda_p].
OperatorPath hessian_path(const HamiltonianFamily& fam, double lambda_m,
                          double lambda_p, int K);

/// Operator path of the comparison family (kind M or N).
OperatorPath comparison_path(ComparisonKind kind, const ComparisonLines& lines,
                             int K, int n);

}  // namespace sfb

#endif
