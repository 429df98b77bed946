#include "sfb/continuation.hpp"

#include <doctest.h>

#include <random>

#include "helpers.hpp"

using namespace sfb;

namespace {

// Exact circular solution of the quartic family: u(t) = r (cos kt, sin kt)
// solves the system at lambda = k - r^2.
FourierVector circle(double r, int k, int K) {
  FourierVector u(1, K);
  u.b[k - 1](0) = r;
  u.a[k - 1](1) = r;
  return u;
}

HamiltonianFamily reversed_quartic() {
  // grad_u H = (lambda - |u|^2) u: branches bend upward in lambda
  HamiltonianFamily fam;
  fam.name = "reversed_quartic";
  fam.n = 1;
  fam.hessian.n = 1;
  fam.hessian.a0_poly = {MatrixXd::Zero(2, 2), MatrixXd::Identity(2, 2)};
  fam.nonlinear_gradient = [](double lambda, double, const VectorXd& u) {
    return VectorXd((lambda - u.squaredNorm()) * u);
  };
  fam.nonlinear_hessian = [](double lambda, double, const VectorXd& u) {
    return MatrixXd((lambda - u.squaredNorm()) * MatrixXd::Identity(2, 2) -
                    2.0 * u * u.transpose());
  };
  return fam;
}

}  // namespace

TEST_CASE("residual basics") {
  const HamiltonianFamily q = builtin_family("quartic");
  const int K = 4;
  const TimeGrid g(128);

  CHECK(residual(q, 0.7, FourierVector(1, K), K, g).norm() == 0.0);

  for (int k : {1, 2}) {
    const double r = 0.7;
    CHECK(residual(q, k - r * r, circle(r, k, K), K, g).norm() <= 1e-10);
  }

  // missing nonlinearity is rejected
  CHECK_THROWS_AS(residual(builtin_family("scalar_ramp"), 0.5, FourierVector(1, K), K, g),
                  std::invalid_argument);
}

TEST_CASE("residual Jacobian: linearization at zero and symmetry") {
  const HamiltonianFamily q = builtin_family("quartic");
  const int K = 3;
  const TimeGrid g(128);
  const double lambda = 0.4;
  const int d = galerkin_dim(1, K);

  // finite differences of the residual at U = 0
  MatrixXd fd(d, d);
  const double h = 1e-6;
  for (int j = 0; j < d; ++j) {
    VectorXd xp = VectorXd::Zero(d), xm = VectorXd::Zero(d);
    xp(j) += h;
    xm(j) -= h;
    fd.col(j) = (residual(q, lambda, FourierVector::from_coeffs(xp, 1, K), K, g) -
                 residual(q, lambda, FourierVector::from_coeffs(xm, 1, K), K, g)) /
                (2.0 * h);
  }
  const MatrixXd L = assemble_hessian(q.hessian, lambda, K, g).S;
  CHECK((fd - L).cwiseAbs().maxCoeff() <= 1e-5 * (1.0 + L.cwiseAbs().maxCoeff()));
  const MatrixXd Jm = residual_jacobian(q, lambda, FourierVector(1, K), K, g);
  CHECK((Jm - L).cwiseAbs().maxCoeff() <= 1e-10);

  // the residual is a gradient: its Jacobian is symmetric at any state
  std::mt19937 rng(79);
  std::normal_distribution<double> gn;
  VectorXd x(d);
  for (int i = 0; i < d; ++i) x(i) = 0.3 * gn(rng);
  const MatrixXd Ju =
      residual_jacobian(q, lambda, FourierVector::from_coeffs(x, 1, K), K, g);
  CHECK((Ju - Ju.transpose()).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("newton correction") {
  const HamiltonianFamily q = builtin_family("quartic");
  ContinuationConfig cfg;
  cfg.K = 4;

  // exact solution is a fixed point
  const FourierVector u0 = circle(0.8, 1, cfg.K);
  const BranchPoint fixed = newton_correct(q, 1.0 - 0.64, u0, cfg);
  CHECK((fixed.U.to_coeffs() - u0.to_coeffs()).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(fixed.residual_norm <= cfg.tol_res);

  // perturbed start converges back onto the orbit (amplitude is invariant)
  FourierVector pert = u0;
  pert.c0(0) += 1e-3;
  const BranchPoint back = newton_correct(q, 1.0 - 0.64, pert, cfg);
  CHECK(back.residual_norm <= cfg.tol_res);
  CHECK(back.amplitude == doctest::Approx(l2_norm(u0)).epsilon(1e-4));

  // the trivial branch is isolated away from integers
  const BranchPoint triv = newton_correct(q, 0.5, FourierVector(1, cfg.K), cfg);
  CHECK(triv.amplitude == 0.0);

  // at a bifurcation point the Jacobian is singular
  CHECK_THROWS_WITH_AS(newton_correct(q, 1.0, FourierVector(1, cfg.K), cfg),
                       doctest::Contains("singular Jacobian"), std::runtime_error);
}

TEST_CASE("branch tangents") {
  const MatrixXd T = branch_tangent(builtin_family("quartic"), 1.0, 4);
  REQUIRE(T.cols() == 2);
  const int d = galerkin_dim(1, 4);
  REQUIRE(T.rows() == d);
  // orthonormal columns = unit H^{1/2} norm
  CHECK((T.transpose() * T - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
  // spanned by mode-1 loops: nothing outside the mode-1 blocks
  for (int j = 0; j < 2; ++j) {
    VectorXd v = T.col(j);
    v.segment(2, 4).setZero();  // a_1, b_1 block (2n = 2 entries each)
    CHECK(v.head(2).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(v.tail(d - 6).cwiseAbs().maxCoeff() < 1e-8);
  }
  CHECK_THROWS(branch_tangent(builtin_family("scalar_ramp"), 0.5, 4));
}

TEST_CASE("quartic branch from lambda* = 1") {
  const HamiltonianFamily q = builtin_family("quartic");
  ContinuationConfig cfg;
  cfg.K = 5;
  cfg.amp_max = 4.0;
  cfg.window_lo = -6.0;
  cfg.max_steps = 2000;
  const MatrixXd T = branch_tangent(q, 1.0, cfg.K);
  const BranchTrace trace = continue_branch(q, 1.0, T.col(0), cfg);

  CHECK(trace.stop == StopReason::AmplitudeBound);
  REQUIRE(trace.points.size() > 5);
  for (const auto& bp : trace.points) {
    CHECK(bp.residual_norm <= cfg.tol_res);
    const double r2 = bp.amplitude * bp.amplitude / (2.0 * M_PI);
    CHECK(std::abs(bp.lambda - (1.0 - r2)) <= 1e-6);
  }
  CHECK(to_string(trace.stop) == "unbounded amplitude");

  // accepted points stay solutions when re-checked with twice the modes
  const TimeGrid g2(256);
  for (size_t i = 0; i < trace.points.size(); i += 7) {
    const auto& bp = trace.points[i];
    VectorXd big = VectorXd::Zero(galerkin_dim(1, 2 * cfg.K));
    big.head(bp.U.to_coeffs().size()) = bp.U.to_coeffs();
    const FourierVector wide = FourierVector::from_coeffs(big, 1, 2 * cfg.K);
    CHECK(residual(q, bp.lambda, wide, 2 * cfg.K, g2).norm() <= 1e-6);
  }

  CHECK_THROWS_AS(continue_branch(q, 1.0, VectorXd::Zero(galerkin_dim(1, cfg.K)), cfg),
                  std::invalid_argument);
}

TEST_CASE("branch leaving the window is reported") {
  const HamiltonianFamily fam = reversed_quartic();
  ContinuationConfig cfg;
  cfg.K = 4;
  cfg.window_hi = 1.5;  // lambda = 1 + r^2 exits here
  cfg.max_steps = 2000;
  const MatrixXd T = branch_tangent(fam, 1.0, cfg.K);
  const BranchTrace trace = continue_branch(fam, 1.0, T.col(0), cfg);
  CHECK(trace.stop == StopReason::LeftWindow);
  REQUIRE(!trace.points.empty());
  for (const auto& bp : trace.points) {
    const double r2 = bp.amplitude * bp.amplitude / (2.0 * M_PI);
    CHECK(std::abs(bp.lambda - (1.0 + r2)) <= 1e-6);
  }
}
