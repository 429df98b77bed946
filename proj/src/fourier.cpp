#include "sfb/fourier.hpp"

namespace sfb {

static void check_compatible(const FourierVector& u, const FourierVector& v) {
  if (u.n != v.n || u.K != v.K)
    throw std::invalid_argument("fourier: operands differ in n or K");
}

double h_half_inner(const FourierVector& u, const FourierVector& v) {
  check_compatible(u, v);
  double s = u.c0.dot(v.c0);
  for (int k = 1; k <= u.K; ++k)
    s += k * (u.a[k - 1].dot(v.a[k - 1]) + u.b[k - 1].dot(v.b[k - 1]));
  return s;
}

double q_form(const FourierVector& u, const FourierVector& v) {
  check_compatible(u, v);
  const MatrixXd J = symplectic_matrix(u.n);
  double s = 0.0;
  for (int k = 1; k <= u.K; ++k)
    s += k * M_PI *
         ((J * u.a[k - 1]).dot(v.b[k - 1]) - (J * u.b[k - 1]).dot(v.a[k - 1]));
  return s;
}

MatrixXd eval_on_grid(const FourierVector& u, const TimeGrid& g) {
  MatrixXd out(2 * u.n, g.N_t);
  for (int j = 0; j < g.N_t; ++j) {
    VectorXd val = u.c0;
    for (int k = 1; k <= u.K; ++k)
      val += std::sin(k * g.t[j]) * u.a[k - 1] + std::cos(k * g.t[j]) * u.b[k - 1];
    out.col(j) = val;
  }
  return out;
}

FourierVector project_on_modes(const MatrixXd& samples, int n, int K, const TimeGrid& g) {
  if (samples.rows() != 2 * n || samples.cols() != g.N_t)
    throw std::invalid_argument("project_on_modes: sample shape mismatch");
  FourierVector u(n, K);
  const double w = 1.0 / g.N_t;
  for (int j = 0; j < g.N_t; ++j) u.c0 += w * samples.col(j);
  for (int k = 1; k <= K; ++k) {
    for (int j = 0; j < g.N_t; ++j) {
      u.a[k - 1] += 2.0 * w * std::sin(k * g.t[j]) * samples.col(j);
      u.b[k - 1] += 2.0 * w * std::cos(k * g.t[j]) * samples.col(j);
    }
  }
  return u;
}

VectorXd basis_scalars(int K, double t) {
  VectorXd gvals(2 * K + 1);
  gvals(0) = 1.0;
  for (int k = 1; k <= K; ++k) {
    const double s = 1.0 / std::sqrt(double(k));
    gvals(2 * k - 1) = s * std::sin(k * t);
    gvals(2 * k) = s * std::cos(k * t);
  }
  return gvals;
}

double l2_norm(const FourierVector& u) {
  double s = 2.0 * M_PI * u.c0.squaredNorm();
  for (int k = 1; k <= u.K; ++k)
    s += M_PI * (u.a[k - 1].squaredNorm() + u.b[k - 1].squaredNorm());
  return std::sqrt(s);
}

}  // namespace sfb
