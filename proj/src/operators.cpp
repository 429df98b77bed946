#include "sfb/operators.hpp"

#include <Eigen/SVD>

namespace sfb {

static std::vector<MatrixXd> poly_derivative(const std::vector<MatrixXd>& poly) {
  std::vector<MatrixXd> d;
  for (size_t i = 1; i < poly.size(); ++i) d.push_back(double(i) * poly[i]);
  return d;
}

TrigMatrixPath TrigMatrixPath::lambda_derivative() const {
  TrigMatrixPath d;
  d.n = n;
  d.a0_poly = poly_derivative(a0_poly);
  for (const auto& h : harmonics) {
    Harmonic dh;
    dh.m = h.m;
    dh.cos_poly = poly_derivative(h.cos_poly);
    dh.sin_poly = poly_derivative(h.sin_poly);
    if (!dh.cos_poly.empty() || !dh.sin_poly.empty()) d.harmonics.push_back(dh);
  }
  return d;
}

TrigMatrixPath TrigMatrixPath::constant(const MatrixXd& M) {
  if (M.rows() != M.cols() || M.rows() % 2 != 0)
    throw std::invalid_argument("TrigMatrixPath::constant: need even square matrix");
  TrigMatrixPath p;
  p.n = int(M.rows()) / 2;
  p.a0_poly = {M};
  return p;
}

TrigMatrixPath TrigMatrixPath::zero(int n) {
  return constant(MatrixXd::Zero(2 * n, 2 * n));
}

SymmetricOperatorMatrix assemble_q_part(int n, int K) {
  const int d = galerkin_dim(n, K);
  const MatrixXd J = symplectic_matrix(n);
  SymmetricOperatorMatrix op{n, K, MatrixXd::Zero(d, d)};
  for (int k = 1; k <= K; ++k) {
    const int ia = 2 * n * (2 * k - 1);
    const int ib = 2 * n * 2 * k;
    op.S.block(ia, ib, 2 * n, 2 * n) = M_PI * J.transpose();
    op.S.block(ib, ia, 2 * n, 2 * n) = M_PI * J;
  }
  return op;
}

// Quadrature assembly of the A-part; S_{(p,i),(q,j)} accumulates
// w * A_{ij}(t) g_p(t) g_q(t) with g the orthonormalized basis scalars.
static void add_a_part(MatrixXd& S, int n, int K, const TimeGrid& g,
                       const std::function<MatrixXd(double)>& A_of_t) {
  const double w = g.weight();
  const int nb = 2 * K + 1;
  for (int j = 0; j < g.N_t; ++j) {
    const double t = g.t[j];
    MatrixXd A = A_of_t(t);
    const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * (1.0 + A.cwiseAbs().maxCoeff()))
      throw std::runtime_error("assemble: coefficient matrix not symmetric at t=" +
                               std::to_string(t));
    A = 0.5 * (A + A.transpose());
    const VectorXd gv = basis_scalars(K, t);
    for (int p = 0; p < nb; ++p)
      for (int q = p; q < nb; ++q) {
        const double f = w * gv(p) * gv(q);
        if (f == 0.0) continue;
        S.block(2 * n * p, 2 * n * q, 2 * n, 2 * n) += f * A;
        if (q != p)
          S.block(2 * n * q, 2 * n * p, 2 * n, 2 * n) += f * A.transpose();
      }
  }
}

MatrixXd assemble_form_matrix(int n, int K, const TimeGrid& g,
                              const std::function<MatrixXd(double)>& A_of_t) {
  MatrixXd S = MatrixXd::Zero(galerkin_dim(n, K), galerkin_dim(n, K));
  add_a_part(S, n, K, g, A_of_t);
  return MatrixXd(0.5 * (S + S.transpose()));
}

SymmetricOperatorMatrix assemble_hessian(const TrigMatrixPath& fam, double lambda,
                                         int K, const TimeGrid& g) {
  if (!g.resolves(2 * K + fam.max_harmonic()))
    throw std::invalid_argument("assemble_hessian: time grid too coarse for K=" +
                                std::to_string(K));
  SymmetricOperatorMatrix op = assemble_q_part(fam.n, K);
  add_a_part(op.S, fam.n, K, g, [&](double t) { return fam.eval(lambda, t); });
  op.S = 0.5 * (op.S + op.S.transpose()).eval();
  return op;
}

SymmetricOperatorMatrix assemble_hessian(const TrigMatrixPath& fam, double lambda, int K) {
  TimeGrid g(std::max(64, 8 * K + 2 * fam.max_harmonic()));
  return assemble_hessian(fam, lambda, K, g);
}

ComparisonLines comparison_lines(double alpha_m, double beta_m, double alpha_p,
                                 double beta_p, double lambda_m, double lambda_p) {
  if (!(lambda_m < lambda_p))
    throw std::invalid_argument("comparison_lines: need lambda_- < lambda_+");
  return ComparisonLines{alpha_m, beta_m, alpha_p, beta_p, lambda_m, lambda_p};
}

SymmetricOperatorMatrix assemble_comparison(ComparisonKind kind,
                                            const ComparisonLines& lines,
                                            double lambda, int K, int n) {
  if (lambda < lines.lambda_m - 1e-12 || lambda > lines.lambda_p + 1e-12)
    throw std::invalid_argument("assemble_comparison: lambda outside [lambda_-, lambda_+]");
  const double c = lines.scalar(kind, lambda);
  // Constant scalar matrix: closed-form blocks, no quadrature needed.
  const int d = galerkin_dim(n, K);
  SymmetricOperatorMatrix op = assemble_q_part(n, K);
  MatrixXd diag = MatrixXd::Zero(d, d);
  diag.topLeftCorner(2 * n, 2 * n) = 2.0 * M_PI * c * MatrixXd::Identity(2 * n, 2 * n);
  for (int k = 1; k <= K; ++k) {
    const double v = M_PI * c / k;
    for (int i = 0; i < 4 * n; ++i) {
      const int idx = 2 * n * (2 * k - 1) + i;
      diag(idx, idx) = v;
    }
  }
  op.S += diag;
  return op;
}

SymmetricOperatorMatrix homotopy_operator(const TrigMatrixPath& fam, double s,
                                          double lambda, ComparisonKind kind,
                                          const ComparisonLines& lines, int K,
                                          const TimeGrid& g) {
  if (s < -1e-12 || s > 1.0 + 1e-12)
    throw std::invalid_argument("homotopy_operator: s outside [0,1]");
  if (s == 0.0) return assemble_hessian(fam, lambda, K, g);
  if (s == 1.0) return assemble_comparison(kind, lines, lambda, K, fam.n);
  const double c = lines.scalar(kind, lambda);
  const MatrixXd B = c * MatrixXd::Identity(2 * fam.n, 2 * fam.n);
  SymmetricOperatorMatrix op = assemble_q_part(fam.n, K);
  add_a_part(op.S, fam.n, K, g,
             [&](double t) { return ((1.0 - s) * fam.eval(lambda, t) + s * B).eval(); });
  op.S = 0.5 * (op.S + op.S.transpose()).eval();
  return op;
}

int kernel_dimension(const MatrixXd& S, double tol) {
  Eigen::JacobiSVD<MatrixXd> svd(S);
  const VectorXd& sv = svd.singularValues();
  const double cut = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  int dim = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) < cut) ++dim;
  return dim;
}

MatrixXd kernel_basis(const MatrixXd& S, double tol) {
  Eigen::JacobiSVD<MatrixXd> svd(S, Eigen::ComputeFullV);
  const VectorXd& sv = svd.singularValues();
  const double cut = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  int dim = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) < cut) ++dim;
  return svd.matrixV().rightCols(dim);
}

}  // namespace sfb
