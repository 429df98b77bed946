#ifndef SFB_CONTINUATION_HPP
#define SFB_CONTINUATION_HPP

#include "sfb/family.hpp"

// Nonlinear harmonic-balance solver with pseudo-arclength continuation:
// traces branches of 2pi-periodic solutions seeded from kernel directions of
// the linearization at a bifurcation point.

namespace sfb {

struct ContinuationConfig {
  int K = 8;
  int N_t = 0;               // 0 -> max(128, 16 K)
  double tol_res = 1e-9;
  int max_newton = 25;
  double seed_amp = 1e-2;
  double amp_max = 6.0;      // L2-norm stop bound
  int max_steps = 1000;
  double step = 0.05;
  double min_step = 1e-6;
  double window_lo = -10.0, window_hi = 10.0;
};

struct BranchPoint {
  double lambda;
  FourierVector U;
  double amplitude;      // L2-norm of the loop
  double residual_norm;
  int step_index = 0;
};

enum class StopReason {
  MaxSteps,
  AmplitudeBound,      // amplitude >= amp_max: unbounded-branch witness
  LeftWindow,
  Reconnected,         // returned to the trivial branch
  CorrectorFailure
};

std::string to_string(StopReason r);

struct BranchTrace {
  std::vector<BranchPoint> points;
  StopReason stop = StopReason::MaxSteps;
  double reconnection_lambda = 0.0;  // valid when stop == Reconnected
};

/// Coefficient vector (shared layout, orthonormalized basis) of the weak-form
/// gradient: Q-part plus the projected nonlinear gradient.
VectorXd residual(const HamiltonianFamily& fam, double lambda,
                  const FourierVector& U, int K, const TimeGrid& g);

/// Jacobian of the residual in U (the Galerkin Hessian at U).
MatrixXd residual_jacobian(const HamiltonianFamily& fam, double lambda,
                           const FourierVector& U, int K, const TimeGrid& g);

/// Damped Newton at fixed lambda.
BranchPoint newton_correct(const HamiltonianFamily& fam, double lambda,
                           const FourierVector& U0, const ContinuationConfig& cfg);

/// Orthonormal kernel basis of the Galerkin linearization at lambda_star;
/// columns seed branches.
MatrixXd branch_tangent(const HamiltonianFamily& fam, double lambda_star, int K,
                        double tol = 1e-6);

/// Trace a branch from the trivial solution at lambda_star along a kernel
/// direction, by secant predictor + arclength-constrained Newton.
BranchTrace continue_branch(const HamiltonianFamily& fam, double lambda_star,
                            const VectorXd& direction, const ContinuationConfig& cfg);

}  // namespace sfb

#endif
