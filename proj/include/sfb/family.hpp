#ifndef SFB_FAMILY_HPP
#define SFB_FAMILY_HPP

#include "sfb/operators.hpp"

// Hamiltonian problem instances: the Hessian family A_lambda(t), an optional
// nonlinear gradient, the eigenvalue envelopes alpha/beta and the integer
// counting function Delta.

namespace sfb {

struct HamiltonianFamily {
  std::string name;
  int n = 1;
  TrigMatrixPath hessian;
  // grad_u H(lambda, t, u); zero at u = 0 by standing hypothesis.
  std::function<VectorXd(double, double, const VectorXd&)> nonlinear_gradient;
  // D_u grad_u H(lambda, t, u); optional, Newton falls back to differences.
  std::function<MatrixXd(double, double, const VectorXd&)> nonlinear_hessian;

  bool has_nonlinearity() const { return static_cast<bool>(nonlinear_gradient); }
};

struct Envelope {
  double lambda;
  double alpha;  // inf over t of the smallest eigenvalue of A(lambda, t)
  double beta;   // sup over t of the largest eigenvalue
  int grid_used;
};

/// Envelope by dense t-grid with grid doubling until change < 1e-9.
Envelope eigen_envelope(const HamiltonianFamily& fam, double lambda, int N_t = 32);

/// Signed count of integers between mu and nu with the half-open
/// conventions: |{ mu < i <= nu }| if mu <= nu, -|{ nu <= i < mu }| otherwise.
/// Values within 1e-12 of an integer are snapped to it.
long delta_count(double mu, double nu);

/// True when x sits within tol of an integer (verdicts become
/// tolerance-sensitive there).
bool near_integer(double x, double tol = 1e-9);

/// Catalog families: "scalar_ramp", "wiggle", "diag_split", "quartic".
HamiltonianFamily builtin_family(const std::string& name);

const std::vector<std::string>& builtin_catalog();

}  // namespace sfb

#endif
