#ifndef SFB_MONODROMY_HPP
#define SFB_MONODROMY_HPP

#include "sfb/family.hpp"

// Fundamental-matrix integration of the linearized system
//     Phi' = J A_lambda(t) Phi,  Phi(0) = I,
// and the truncation-free periodic-kernel test dim ker(Phi(2pi) - I).

namespace sfb {

struct MonodromyResult {
  double lambda;
  MatrixXd Phi;             // Phi(2pi)
  int kernel_dim;           // dim ker(Phi - I) by singular values
  double symplectic_defect; // max |Phi^T J Phi - J|
};

/// Classical 4th-order fixed-step integration with a step-doubling
/// certificate: doubling must change Phi(2pi) by < 1e-8.
MonodromyResult fundamental_solution(const HamiltonianFamily& fam, double lambda,
                                     int steps = 1024, double kernel_tol = 1e-7);

int periodic_kernel_dim(const HamiltonianFamily& fam, double lambda,
                        double tol = 1e-7);

struct AdmissibilityVerdict {
  bool admissible;
  int kernel_dim_minus, kernel_dim_plus;
  std::string violation;  // empty when admissible
};

/// Main hypothesis check: the linearization at both endpoints only has the
/// trivial periodic solution.
AdmissibilityVerdict endpoint_admissibility(const HamiltonianFamily& fam,
                                            double lambda_m, double lambda_p);

/// Matrix exponential by scaling-and-squaring; independent oracle for the
/// autonomous case Phi(2pi) = exp(2pi J A).
MatrixXd expm(const MatrixXd& M);

}  // namespace sfb

#endif
