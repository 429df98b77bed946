#include "sfb/family.hpp"

#include <Eigen/Eigenvalues>

#include <limits>

namespace sfb {

Envelope eigen_envelope(const HamiltonianFamily& fam, double lambda, int N_t) {
  if (N_t < 32) throw std::invalid_argument("eigen_envelope: need N_t >= 32");
  double prev_alpha = 0.0, prev_beta = 0.0;
  bool have_prev = false;
  for (int N = N_t; N <= 1 << 20; N *= 2) {
    double alpha = std::numeric_limits<double>::infinity();
    double beta = -alpha;
    for (int j = 0; j < N; ++j) {
      const double t = 2.0 * M_PI * j / N;
      MatrixXd A = fam.hessian.eval(lambda, t);
      const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
      if (asym > 1e-12 * (1.0 + A.cwiseAbs().maxCoeff()))
        throw std::runtime_error("eigen_envelope: non-symmetric Hessian sample");
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(A, Eigen::EigenvaluesOnly);
      alpha = std::min(alpha, es.eigenvalues().minCoeff());
      beta = std::max(beta, es.eigenvalues().maxCoeff());
    }
    if (have_prev && std::abs(alpha - prev_alpha) < 1e-9 &&
        std::abs(beta - prev_beta) < 1e-9)
      return Envelope{lambda, alpha, beta, N};
    prev_alpha = alpha;
    prev_beta = beta;
    have_prev = true;
  }
  throw std::runtime_error("eigen_envelope: grid doubling did not converge");
}

namespace {

double snap(double x) {
  const double r = std::round(x);
  return (std::abs(x - r) < 1e-12) ? r : x;
}

}  // namespace

long delta_count(double mu, double nu) {
  if (!std::isfinite(mu) || !std::isfinite(nu))
    throw std::invalid_argument("delta_count: non-finite argument");
  mu = snap(mu);
  nu = snap(nu);
  if (mu <= nu)
    return long(std::floor(nu)) - long(std::floor(mu));  // mu < i <= nu
  return -(long(std::ceil(mu)) - long(std::ceil(nu)));   // nu <= i < mu
}

bool near_integer(double x, double tol) {
  return std::abs(x - std::round(x)) < tol;
}

const std::vector<std::string>& builtin_catalog() {
  static const std::vector<std::string> names = {"scalar_ramp", "wiggle",
                                                 "diag_split", "quartic"};
  return names;
}

HamiltonianFamily builtin_family(const std::string& name) {
  const MatrixXd I2 = MatrixXd::Identity(2, 2);
  HamiltonianFamily fam;
  fam.name = name;
  fam.n = 1;
  if (name == "scalar_ramp") {
    // A_lambda(t) = lambda I_2
    fam.hessian.n = 1;
    fam.hessian.a0_poly = {MatrixXd::Zero(2, 2), I2};
  } else if (name == "wiggle") {
    // A_lambda(t) = lambda (1 + 0.05 sin t) I_2 + diag(-0.1, 0.1)
    fam.hessian.n = 1;
    MatrixXd D(2, 2);
    D << -0.1, 0.0, 0.0, 0.1;
    fam.hessian.a0_poly = {D, I2};
    TrigMatrixPath::Harmonic h;
    h.m = 1;
    h.sin_poly = {MatrixXd::Zero(2, 2), 0.05 * I2};
    fam.hessian.harmonics.push_back(h);
  } else if (name == "diag_split") {
    // A_lambda = diag(lambda - 0.5, lambda + 0.5)
    fam.hessian.n = 1;
    MatrixXd D(2, 2);
    D << -0.5, 0.0, 0.0, 0.5;
    fam.hessian.a0_poly = {D, I2};
  } else if (name == "quartic") {
    // grad_u H = (lambda + |u|^2) u, Hessian at 0 is lambda I_2
    fam.hessian.n = 1;
    fam.hessian.a0_poly = {MatrixXd::Zero(2, 2), I2};
    fam.nonlinear_gradient = [](double lambda, double, const VectorXd& u) {
      return VectorXd((lambda + u.squaredNorm()) * u);
    };
    fam.nonlinear_hessian = [I2](double lambda, double, const VectorXd& u) {
      return MatrixXd((lambda + u.squaredNorm()) * I2 + 2.0 * u * u.transpose());
    };
  } else {
    std::string msg = "unknown builtin family '" + name + "'; catalog:";
    for (const auto& s : builtin_catalog()) msg += " " + s;
    throw std::invalid_argument(msg);
  }
  return fam;
}

}  // namespace sfb
