#include "sfb/continuation.hpp"

#include <Eigen/QR>
#include <Eigen/LU>

namespace sfb {

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::MaxSteps: return "max steps";
    case StopReason::AmplitudeBound: return "unbounded amplitude";
    case StopReason::LeftWindow: return "left lambda window";
    case StopReason::Reconnected: return "reconnected to trivial branch";
    default: return "corrector failure";
  }
}

namespace {

TimeGrid residual_grid(const ContinuationConfig& cfg) {
  return TimeGrid(cfg.N_t > 0 ? cfg.N_t : std::max(128, 16 * cfg.K));
}

MatrixXd hessian_samples(const HamiltonianFamily& fam, double lambda, double t,
                         const VectorXd& u) {
  if (fam.nonlinear_hessian) return fam.nonlinear_hessian(lambda, t, u);
  // central differences of the gradient
  const int d = int(u.size());
  const double h = 1e-6 * (1.0 + u.norm());
  MatrixXd A(d, d);
  for (int j = 0; j < d; ++j) {
    VectorXd up = u, um = u;
    up(j) += h;
    um(j) -= h;
    A.col(j) = (fam.nonlinear_gradient(lambda, t, up) -
                fam.nonlinear_gradient(lambda, t, um)) / (2.0 * h);
  }
  return MatrixXd(0.5 * (A + A.transpose()));
}

}  // namespace

VectorXd residual(const HamiltonianFamily& fam, double lambda,
                  const FourierVector& U, int K, const TimeGrid& g) {
  if (!fam.has_nonlinearity())
    throw std::invalid_argument("residual: family has no nonlinear gradient");
  const int n = fam.n;
  VectorXd r = assemble_q_part(n, K).S * U.to_coeffs();
  const MatrixXd samples = eval_on_grid(U, g);
  const double w = g.weight();
  for (int j = 0; j < g.N_t; ++j) {
    const VectorXd grad = fam.nonlinear_gradient(lambda, g.t[j], samples.col(j));
    const VectorXd gv = basis_scalars(K, g.t[j]);
    for (int p = 0; p < 2 * K + 1; ++p)
      r.segment(2 * n * p, 2 * n) += w * gv(p) * grad;
  }
  return r;
}

MatrixXd residual_jacobian(const HamiltonianFamily& fam, double lambda,
                           const FourierVector& U, int K, const TimeGrid& g) {
  const MatrixXd samples = eval_on_grid(U, g);
  MatrixXd Jm = assemble_q_part(fam.n, K).S;
  Jm += assemble_form_matrix(fam.n, K, g, [&](double t) {
    const int j = int(std::lround(t * g.N_t / (2.0 * M_PI))) % g.N_t;
    return hessian_samples(fam, lambda, t, samples.col(j));
  });
  return Jm;
}

BranchPoint newton_correct(const HamiltonianFamily& fam, double lambda,
                           const FourierVector& U0, const ContinuationConfig& cfg) {
  const TimeGrid g = residual_grid(cfg);
  const int K = cfg.K;
  FourierVector U = U0;
  VectorXd r = residual(fam, lambda, U, K, g);
  if (!r.allFinite()) throw std::runtime_error("newton_correct: non-finite residual");
  for (int it = 0; it < cfg.max_newton; ++it) {
    const MatrixXd Jm = residual_jacobian(fam, lambda, U, K, g);
    Eigen::ColPivHouseholderQR<MatrixXd> qr(Jm);
    qr.setThreshold(1e-8);
    // A nontrivial solution of an autonomous family carries one exact kernel
    // direction (the time-shift orbit); any further rank defect, or any
    // defect on the trivial branch, marks a bifurcation point.
    const int allowed_defect = (U.to_coeffs().norm() > 1e-8) ? 1 : 0;
    if (Jm.cols() - qr.rank() > allowed_defect)
      throw std::runtime_error("newton_correct: singular Jacobian (at a bifurcation "
                               "point; branch-switch instead of correcting)");
    if (r.norm() <= cfg.tol_res)
      return BranchPoint{lambda, U, l2_norm(U), r.norm(), 0};
    const VectorXd dx = qr.solve(-r);
    // damping by step halving
    double s = 1.0;
    VectorXd x = U.to_coeffs();
    for (int half = 0; half < 12; ++half) {
      FourierVector Utry = FourierVector::from_coeffs(x + s * dx, fam.n, K);
      VectorXd rtry = residual(fam, lambda, Utry, K, g);
      if (rtry.norm() < r.norm() || rtry.norm() <= cfg.tol_res) {
        U = Utry;
        r = rtry;
        break;
      }
      s *= 0.5;
      if (half == 11) throw std::runtime_error("newton_correct: damping failed");
    }
  }
  if (r.norm() <= cfg.tol_res)
    return BranchPoint{lambda, U, l2_norm(U), r.norm(), 0};
  throw std::runtime_error("newton_correct: no convergence in " +
                           std::to_string(cfg.max_newton) + " iterations");
}

MatrixXd branch_tangent(const HamiltonianFamily& fam, double lambda_star, int K,
                        double tol) {
  const SymmetricOperatorMatrix L = assemble_hessian(fam.hessian, lambda_star, K);
  MatrixXd basis = kernel_basis(L.S, tol);
  if (basis.cols() == 0)
    throw std::runtime_error("branch_tangent: linearization kernel is trivial at lambda=" +
                             std::to_string(lambda_star));
  return basis;
}

namespace {

// Generator of the time-shift symmetry applied at x: coefficients of u'.
// Anchors the phase of autonomous problems during correction.
VectorXd phase_generator(const VectorXd& x, int n, int K) {
  VectorXd w = VectorXd::Zero(x.size());
  for (int k = 1; k <= K; ++k) {
    const int ia = 2 * n * (2 * k - 1);
    const int ib = 2 * n * 2 * k;
    w.segment(ia, 2 * n) = -double(k) * x.segment(ib, 2 * n);
    w.segment(ib, 2 * n) = double(k) * x.segment(ia, 2 * n);
  }
  return w;
}

struct ArclengthCorrector {
  const HamiltonianFamily& fam;
  const ContinuationConfig& cfg;
  const TimeGrid& g;

  VectorXd eval_residual(double lambda, const VectorXd& x) const {
    return residual(fam, lambda, FourierVector::from_coeffs(x, fam.n, cfg.K), cfg.K, g);
  }

  // Newton on [residual; arclength plane; phase anchor] via least squares;
  // the phase row absorbs the rotational degeneracy of autonomous families.
  bool correct(const VectorXd& pred, const VectorXd& tangent, VectorXd& out,
               double& res_norm) const {
    const int d = int(pred.size()) - 1;  // unknowns: (U coeffs, lambda)
    VectorXd x = pred;
    for (int it = 0; it < cfg.max_newton; ++it) {
      const double lambda = x(d);
      const VectorXd xu = x.head(d);
      const VectorXd r = eval_residual(lambda, xu);
      const VectorXd w = phase_generator(pred.head(d), fam.n, cfg.K);
      VectorXd F(d + 2);
      F.head(d) = r;
      F(d) = tangent.dot(x - pred);
      F(d + 1) = w.dot(xu - pred.head(d));
      res_norm = r.norm();
      if (res_norm <= cfg.tol_res && std::abs(F(d)) <= 1e-10 && std::abs(F(d + 1)) <= 1e-8) {
        out = x;
        return true;
      }
      const FourierVector Uv = FourierVector::from_coeffs(xu, fam.n, cfg.K);
      const MatrixXd Ju = residual_jacobian(fam, lambda, Uv, cfg.K, g);
      const double h = 1e-6 * (1.0 + std::abs(lambda));
      const VectorXd rl = (eval_residual(lambda + h, xu) - eval_residual(lambda - h, xu)) / (2.0 * h);
      MatrixXd Jaug = MatrixXd::Zero(d + 2, d + 1);
      Jaug.topLeftCorner(d, d) = Ju;
      Jaug.block(0, d, d, 1) = rl;
      Jaug.row(d) = tangent.transpose();
      Jaug.block(d + 1, 0, 1, d) = w.transpose();
      const VectorXd dx = Jaug.colPivHouseholderQr().solve(-F);
      if (!dx.allFinite()) return false;
      x += dx;
    }
    return false;
  }
};

}  // namespace

BranchTrace continue_branch(const HamiltonianFamily& fam, double lambda_star,
                            const VectorXd& direction, const ContinuationConfig& cfg) {
  if (direction.norm() < 1e-14)
    throw std::invalid_argument("continue_branch: zero tangent direction");
  if (!fam.has_nonlinearity())
    throw std::invalid_argument("continue_branch: family has no nonlinear gradient");
  const TimeGrid g = residual_grid(cfg);
  const int d = galerkin_dim(fam.n, cfg.K);
  if (direction.size() != d)
    throw std::invalid_argument("continue_branch: direction has wrong dimension");

  BranchTrace trace;
  ArclengthCorrector corrector{fam, cfg, g};

  // Seed step off the trivial branch along the kernel direction.
  VectorXd x_prev(d + 1);
  x_prev.head(d).setZero();
  x_prev(d) = lambda_star;
  VectorXd tangent = VectorXd::Zero(d + 1);
  tangent.head(d) = direction.normalized();
  VectorXd pred = x_prev + cfg.seed_amp * tangent;

  VectorXd x_cur;
  double res_norm = 0.0;
  if (!corrector.correct(pred, tangent, x_cur, res_norm)) {
    trace.stop = StopReason::CorrectorFailure;
    return trace;
  }
  auto push = [&](const VectorXd& x, double rn, int step) {
    FourierVector U = FourierVector::from_coeffs(x.head(d), fam.n, cfg.K);
    trace.points.push_back(BranchPoint{x(d), U, l2_norm(U), rn, step});
  };
  push(x_cur, res_norm, 0);

  double h = cfg.step;
  for (int step = 1; step <= cfg.max_steps; ++step) {
    const VectorXd secant = (x_cur - x_prev).normalized();
    bool accepted = false;
    VectorXd x_next;
    while (h >= cfg.min_step) {
      pred = x_cur + h * secant;
      if (corrector.correct(pred, secant, x_next, res_norm)) {
        accepted = true;
        break;
      }
      h *= 0.5;
    }
    if (!accepted) {
      trace.stop = StopReason::CorrectorFailure;
      return trace;
    }
    x_prev = x_cur;
    x_cur = x_next;
    push(x_cur, res_norm, step);
    h = std::min(1.3 * h, 4.0 * cfg.step);

    const BranchPoint& bp = trace.points.back();
    if (bp.amplitude >= cfg.amp_max) {
      trace.stop = StopReason::AmplitudeBound;
      return trace;
    }
    if (bp.lambda < cfg.window_lo || bp.lambda > cfg.window_hi) {
      trace.stop = StopReason::LeftWindow;
      return trace;
    }
    if (bp.amplitude < cfg.seed_amp / 10.0) {
      trace.stop = StopReason::Reconnected;
      trace.reconnection_lambda = bp.lambda;
      return trace;
    }
  }
  trace.stop = StopReason::MaxSteps;
  return trace;
}

}  // namespace sfb
