#include "sfb/monodromy.hpp"

#include <Eigen/SVD>

namespace sfb {

namespace {

MatrixXd integrate_fundamental(const HamiltonianFamily& fam, double lambda, int steps) {
  const int d = 2 * fam.n;
  const MatrixXd J = symplectic_matrix(fam.n);
  const double h = 2.0 * M_PI / steps;
  MatrixXd Phi = MatrixXd::Identity(d, d);
  auto rhs = [&](double t, const MatrixXd& Y) -> MatrixXd {
    return J * fam.hessian.eval(lambda, t) * Y;
  };
  for (int i = 0; i < steps; ++i) {
    const double t = i * h;
    const MatrixXd k1 = rhs(t, Phi);
    const MatrixXd k2 = rhs(t + 0.5 * h, Phi + 0.5 * h * k1);
    const MatrixXd k3 = rhs(t + 0.5 * h, Phi + 0.5 * h * k2);
    const MatrixXd k4 = rhs(t + h, Phi + h * k3);
    Phi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return Phi;
}

}  // namespace

MonodromyResult fundamental_solution(const HamiltonianFamily& fam, double lambda,
                                     int steps, double kernel_tol) {
  if (steps < 256) throw std::invalid_argument("fundamental_solution: need steps >= 256");
  MatrixXd Phi = integrate_fundamental(fam, lambda, steps);
  const MatrixXd Phi2 = integrate_fundamental(fam, lambda, 2 * steps);
  if ((Phi - Phi2).cwiseAbs().maxCoeff() >= 1e-8)
    throw std::runtime_error(
        "fundamental_solution: step-doubling certificate failed; increase steps");
  Phi = Phi2;
  const MatrixXd J = symplectic_matrix(fam.n);
  MonodromyResult res;
  res.lambda = lambda;
  res.Phi = Phi;
  res.symplectic_defect = (Phi.transpose() * J * Phi - J).cwiseAbs().maxCoeff();
  // kernel tolerance relative to |Phi|, not to sigma_max of Phi - I
  const MatrixXd D = Phi - MatrixXd::Identity(Phi.rows(), Phi.cols());
  Eigen::JacobiSVD<MatrixXd> svd(D);
  const double cut = kernel_tol * std::max(1.0, Phi.cwiseAbs().maxCoeff());
  int dim = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) < cut) ++dim;
  res.kernel_dim = dim;
  return res;
}

int periodic_kernel_dim(const HamiltonianFamily& fam, double lambda, double tol) {
  return fundamental_solution(fam, lambda, 1024, tol).kernel_dim;
}

AdmissibilityVerdict endpoint_admissibility(const HamiltonianFamily& fam,
                                            double lambda_m, double lambda_p) {
  AdmissibilityVerdict v;
  v.kernel_dim_minus = periodic_kernel_dim(fam, lambda_m);
  v.kernel_dim_plus = periodic_kernel_dim(fam, lambda_p);
  v.admissible = (v.kernel_dim_minus == 0 && v.kernel_dim_plus == 0);
  if (!v.admissible) {
    v.violation = "nontrivial periodic kernel at";
    if (v.kernel_dim_minus > 0)
      v.violation += " lambda_-=" + std::to_string(lambda_m) +
                     " (dim " + std::to_string(v.kernel_dim_minus) + ")";
    if (v.kernel_dim_plus > 0)
      v.violation += " lambda_+=" + std::to_string(lambda_p) +
                     " (dim " + std::to_string(v.kernel_dim_plus) + ")";
  }
  return v;
}

MatrixXd expm(const MatrixXd& M) {
  const int d = int(M.rows());
  int squarings = 0;
  double nrm = M.cwiseAbs().rowwise().sum().maxCoeff();
  while (nrm > 0.5) {
    nrm /= 2.0;
    ++squarings;
  }
  const MatrixXd A = M / std::pow(2.0, squarings);
  // Taylor series at the scaled matrix; terms decay geometrically for |A| <= 1/2.
  MatrixXd term = MatrixXd::Identity(d, d);
  MatrixXd sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = (term * A) / double(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

}  // namespace sfb
