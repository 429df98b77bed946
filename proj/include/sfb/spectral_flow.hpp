#ifndef SFB_SPECTRAL_FLOW_HPP
#define SFB_SPECTRAL_FLOW_HPP

#include "sfb/operators.hpp"

// Spectral flow of paths of symmetric matrices, by two independent routes:
//  - sfl_partition: the partition definition with an adaptive lambda-grid,
//  - sfl_crossing:  crossing forms with the endpoint corrections
//        sfl = -m^-(Gamma(a)) + sum_interior sgn(Gamma) + m^-(-Gamma(b)).
// Plus parity (Z_2), delta-regularization and the comparison principle.
//
// Convention: a zero eigenvalue counts toward the nonnegative spectral
// projection, at endpoints included.

namespace sfb {

/// Raised by sfl_crossing when a crossing form is degenerate; the caller is
/// expected to delta_regularize and retry.
struct IrregularCrossing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SflControl {
  int initial_intervals = 64;
  int max_depth = 40;
  double tol_zero = 1e-8;        // relative zero threshold for eigenvalues
  bool allow_endpoint_kernel = false;
};

struct CrossingRecord {
  double lambda;
  int kernel_dim = 0;
  MatrixXd kernel_basis;        // orthonormal columns
  MatrixXd crossing_form;       // kernel_dim x kernel_dim, symmetric
  int signature = 0;            // #pos - #neg eigenvalues of the form
  int negative_index = 0;       // m^-(Gamma)
  bool regular = false;
  bool at_left_endpoint = false;
  bool at_right_endpoint = false;
};

struct CrossingResult {
  long sfl = 0;
  std::vector<CrossingRecord> crossings;
};

struct ParityResult {
  int value = 0;                // element of Z_2 = {0,1}
  int det_sign_a = 0, det_sign_b = 0;
  long sfl = 0;                 // the partition-route value
};

struct ComparisonCheck {
  long sfl_first = 0, sfl_second = 0;
  bool holds = false;
};

/// Number of eigenvalues below -tol_zero * max(1, |eig|_max).
int morse_index(const MatrixXd& S, double tol_zero = 1e-8);

/// Spectral flow via the partition definition. Errors if an endpoint is
/// singular (unless ctrl.allow_endpoint_kernel) or refinement bottoms out.
long sfl_partition(const OperatorPath& P, const SflControl& ctrl = {});

/// Spectral flow via crossing forms; requires P.derivative. Throws if an
/// irregular crossing is detected (caller should delta_regularize).
CrossingResult sfl_crossing(const OperatorPath& P, const SflControl& ctrl = {});

struct RegularizedPath {
  double delta = 0.0;
  OperatorPath path;
  CrossingResult crossings;     // of the shifted path
};

/// Search delta in {0, eps/2, eps/4, ...} until the shifted path
/// L + delta I has only regular crossings.
RegularizedPath delta_regularize(const OperatorPath& P, double eps,
                                 const SflControl& ctrl = {});

/// Leray-Schauder degree of I + KMat for symmetric K: (-1)^{#eig(K) < -1}.
int degree_ls(const MatrixXd& K);

/// Parity via determinant signs (LU route) cross-checked against
/// sfl_partition mod 2. Throws on internal disagreement.
ParityResult parity(const OperatorPath& P, const SflControl& ctrl = {});

/// Comparison principle: requires L_a >= M_a, L_b <= M_b (psd sense);
/// returns both spectral flows; holds == (sfl(L) <= sfl(M)).
ComparisonCheck check_comparison(const OperatorPath& L, const OperatorPath& M,
                                 const SflControl& ctrl = {});

}  // namespace sfb

#endif
