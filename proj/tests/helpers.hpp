#ifndef SFB_TEST_HELPERS_HPP
#define SFB_TEST_HELPERS_HPP

#include "sfb/spectral_flow.hpp"

#include <memory>
#include <random>

namespace sfb_test {

using sfb::MatrixXd;
using sfb::OperatorPath;
using sfb::VectorXd;

inline MatrixXd random_symmetric(std::mt19937& rng, int d, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  MatrixXd M(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) M(i, j) = g(rng);
  return MatrixXd(0.5 * (M + M.transpose()));
}

inline double min_abs_eig(const MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().minCoeff();
}

// Smooth path A0 + lambda A1 + sin(lambda) A2 on [a,b], resampled until both
// endpoints are comfortably invertible. Crossings are generically transversal.
inline OperatorPath random_smooth_path(std::mt19937& rng, int d, double a = -1.0,
                                       double b = 1.0) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    auto A0 = std::make_shared<MatrixXd>(random_symmetric(rng, d));
    auto A1 = std::make_shared<MatrixXd>(random_symmetric(rng, d));
    auto A2 = std::make_shared<MatrixXd>(random_symmetric(rng, d, 0.5));
    OperatorPath P;
    P.a = a;
    P.b = b;
    P.eval = [A0, A1, A2](double lam) {
      return MatrixXd(*A0 + lam * *A1 + std::sin(lam) * *A2);
    };
    P.derivative = [A1, A2](double lam) {
      return MatrixXd(*A1 + std::cos(lam) * *A2);
    };
    if (min_abs_eig(P.eval(a)) > 0.1 && min_abs_eig(P.eval(b)) > 0.1) return P;
  }
  throw std::runtime_error("random_smooth_path: could not find invertible endpoints");
}

inline OperatorPath constant_path(const MatrixXd& M, double a = 0.0, double b = 1.0) {
  auto S = std::make_shared<MatrixXd>(M);
  auto Z = std::make_shared<MatrixXd>(MatrixXd::Zero(M.rows(), M.cols()));
  OperatorPath P;
  P.a = a;
  P.b = b;
  P.eval = [S](double) { return *S; };
  P.derivative = [Z](double) { return *Z; };
  return P;
}

// 1x1 path lambda |-> [f(lambda)] with derivative [fp(lambda)].
inline OperatorPath scalar_path(double a, double b, double (*f)(double),
                                double (*fp)(double)) {
  OperatorPath P;
  P.a = a;
  P.b = b;
  P.eval = [f](double lam) {
    MatrixXd S(1, 1);
    S(0, 0) = f(lam);
    return S;
  };
  P.derivative = [fp](double lam) {
    MatrixXd S(1, 1);
    S(0, 0) = fp(lam);
    return S;
  };
  return P;
}

}  // namespace sfb_test

#endif
