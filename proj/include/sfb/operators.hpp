#ifndef SFB_OPERATORS_HPP
#define SFB_OPERATORS_HPP

#include "sfb/fourier.hpp"

#include <functional>
#include <optional>
#include <string>

// Galerkin matrices of the Hessian bilinear forms
//     <L u, v> = Q(u,v) + int <A(t) u(t), v(t)> dt
// in the orthonormalized Fourier basis, for coefficient families A_lambda(t)
// that are trig polynomials in t with polynomial lambda-dependence.

namespace sfb {

/// Symmetric-matrix-valued trig polynomial family
///   A(lambda, t) = A0(lambda) + sum_m (Ac_m(lambda) cos mt + As_m(lambda) sin mt),
/// every coefficient matrix itself a polynomial in lambda
/// (coeffs[d] multiplies lambda^d).
struct TrigMatrixPath {
  struct Harmonic {
    int m = 1;
    std::vector<MatrixXd> cos_poly;  // may be empty
    std::vector<MatrixXd> sin_poly;
  };

  int n = 1;
  std::vector<MatrixXd> a0_poly;  // A0(lambda)
  std::vector<Harmonic> harmonics;

  static MatrixXd eval_poly(const std::vector<MatrixXd>& poly, double lambda, int n) {
    MatrixXd M = MatrixXd::Zero(2 * n, 2 * n);
    double p = 1.0;
    for (const auto& c : poly) {
      M += p * c;
      p *= lambda;
    }
    return M;
  }

  int max_harmonic() const {
    int m = 0;
    for (const auto& h : harmonics) m = std::max(m, h.m);
    return m;
  }

  bool autonomous() const { return harmonics.empty(); }

  MatrixXd eval(double lambda, double t) const {
    MatrixXd A = eval_poly(a0_poly, lambda, n);
    for (const auto& h : harmonics) {
      if (!h.cos_poly.empty()) A += std::cos(h.m * t) * eval_poly(h.cos_poly, lambda, n);
      if (!h.sin_poly.empty()) A += std::sin(h.m * t) * eval_poly(h.sin_poly, lambda, n);
    }
    return A;
  }

  /// Family of lambda-derivatives, d/dlambda A(lambda, t).
  TrigMatrixPath lambda_derivative() const;

  /// Constant family A(lambda,t) = M for all lambda, t.
  static TrigMatrixPath constant(const MatrixXd& M);
  /// Zero family in dimension 2n.
  static TrigMatrixPath zero(int n);
};

/// Galerkin matrix of a Hessian form; plain dense symmetric matrix plus the
/// layout it was assembled in.
struct SymmetricOperatorMatrix {
  int n = 1;
  int K = 0;
  MatrixXd S;

  int dim() const { return galerkin_dim(n, K); }
};

/// Galerkin matrix of the Q-part alone (A = 0); block diagonal with mode-k
/// block pi * [[0, J^T], [J, 0]].
SymmetricOperatorMatrix assemble_q_part(int n, int K);

/// Galerkin matrix of int <A(t) u, v> dt alone for an arbitrary symmetric
/// matrix sample function (no Q-part).
MatrixXd assemble_form_matrix(int n, int K, const TimeGrid& g,
                              const std::function<MatrixXd(double)>& A_of_t);

/// Full Hessian matrix of the form at parameter lambda.
SymmetricOperatorMatrix assemble_hessian(const TrigMatrixPath& fam, double lambda,
                                         int K, const TimeGrid& g);
SymmetricOperatorMatrix assemble_hessian(const TrigMatrixPath& fam, double lambda, int K);

enum class ComparisonKind { M, N };

/// Scalar straight lines B_lambda, C_lambda between the envelope values.
struct ComparisonLines {
  double alpha_m, beta_m, alpha_p, beta_p;
  double lambda_m, lambda_p;

  double b_scalar(double lambda) const {
    return beta_m + (lambda - lambda_m) / (lambda_p - lambda_m) * (alpha_p - beta_m);
  }
  double c_scalar(double lambda) const {
    return alpha_m + (lambda - lambda_m) / (lambda_p - lambda_m) * (beta_p - alpha_m);
  }
  double scalar(ComparisonKind kind, double lambda) const {
    return kind == ComparisonKind::M ? b_scalar(lambda) : c_scalar(lambda);
  }
  double slope(ComparisonKind kind) const {
    return (kind == ComparisonKind::M ? alpha_p - beta_m : beta_p - alpha_m) /
           (lambda_p - lambda_m);
  }
};

ComparisonLines comparison_lines(double alpha_m, double beta_m, double alpha_p,
                                 double beta_p, double lambda_m, double lambda_p);

/// Operator of the constant matrix B_lambda (kind M) or C_lambda (kind N).
SymmetricOperatorMatrix assemble_comparison(ComparisonKind kind,
                                            const ComparisonLines& lines,
                                            double lambda, int K, int n);

/// Convex interpolation (1-s) A_lambda(t) + s B_lambda before assembly.
SymmetricOperatorMatrix homotopy_operator(const TrigMatrixPath& fam, double s,
                                          double lambda, ComparisonKind kind,
                                          const ComparisonLines& lines, int K,
                                          const TimeGrid& g);

/// Kernel dimension by singular values: sigma < tol * max(1, sigma_max).
int kernel_dimension(const MatrixXd& S, double tol = 1e-8);

/// Orthonormal kernel basis under the same tolerance rule.
MatrixXd kernel_basis(const MatrixXd& S, double tol = 1e-8);

/// A path of symmetric matrices over [a,b] with an optional derivative,
/// consumed by the spectral flow routines.
struct OperatorPath {
  double a = 0.0, b = 1.0;
  std::function<MatrixXd(double)> eval;
  std::function<MatrixXd(double)> derivative;  // optional

  bool has_derivative() const { return static_cast<bool>(derivative); }
};

}  // namespace sfb

#endif
