#ifndef SFB_FOURIER_HPP
#define SFB_FOURIER_HPP

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

// Truncated Fourier loops in R^{2n} and the bilinear forms living on them.
//
// A loop u : S^1 -> R^{2n} is stored as
//     u(t) = c0 + sum_{k=1..K} (a_k sin kt + b_k cos kt).
//
// All Galerkin matrices in the toolkit share one coefficient layout:
//   block 0       : constants, 2n entries
//   block k (1..K): a_k (2n entries) followed by b_k (2n entries)
// and are expressed in the orthonormalized basis where the mode-k basis
// loops carry a factor 1/sqrt(k), so the H^{1/2} Gram matrix is the
// identity.

namespace sfb {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Standard symplectic matrix J = [[0, -I_n], [I_n, 0]] of size 2n.
inline MatrixXd symplectic_matrix(int n) {
  MatrixXd J = MatrixXd::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = -MatrixXd::Identity(n, n);
  J.bottomLeftCorner(n, n) = MatrixXd::Identity(n, n);
  return J;
}

/// Coefficient dimension 2n(2K+1) of the truncated space.
inline int galerkin_dim(int n, int K) { return 2 * n * (2 * K + 1); }

struct FourierVector {
  int n = 1;
  int K = 0;
  VectorXd c0;                 // 2n
  std::vector<VectorXd> a, b;  // each 2n, modes 1..K

  FourierVector() = default;
  FourierVector(int n_, int K_)
      : n(n_), K(K_), c0(VectorXd::Zero(2 * n_)),
        a(K_, VectorXd::Zero(2 * n_)), b(K_, VectorXd::Zero(2 * n_)) {
    if (n_ < 1 || K_ < 0) throw std::invalid_argument("FourierVector: need n >= 1, K >= 0");
  }

  int dim() const { return galerkin_dim(n, K); }

  /// Flatten to the shared layout, in the *orthonormalized* basis
  /// (mode-k coefficients multiplied by sqrt(k)).
  VectorXd to_coeffs() const {
    VectorXd x(dim());
    x.head(2 * n) = c0;
    for (int k = 1; k <= K; ++k) {
      const double s = std::sqrt(double(k));
      x.segment(2 * n * (2 * k - 1), 2 * n) = s * a[k - 1];
      x.segment(2 * n * 2 * k, 2 * n) = s * b[k - 1];
    }
    return x;
  }

  static FourierVector from_coeffs(const VectorXd& x, int n, int K) {
    if (x.size() != galerkin_dim(n, K))
      throw std::invalid_argument("from_coeffs: coefficient length mismatch");
    FourierVector u(n, K);
    u.c0 = x.head(2 * n);
    for (int k = 1; k <= K; ++k) {
      const double s = 1.0 / std::sqrt(double(k));
      u.a[k - 1] = s * x.segment(2 * n * (2 * k - 1), 2 * n);
      u.b[k - 1] = s * x.segment(2 * n * 2 * k, 2 * n);
    }
    return u;
  }
};

struct TimeGrid {
  int N_t;
  std::vector<double> t;

  explicit TimeGrid(int N) : N_t(N) {
    if (N < 2) throw std::invalid_argument("TimeGrid: need at least 2 nodes");
    t.resize(N);
    for (int j = 0; j < N; ++j) t[j] = 2.0 * M_PI * j / N;
  }

  double weight() const { return 2.0 * M_PI / N_t; }

  /// Trapezoid quadrature on a uniform periodic grid is exact for trig
  /// polynomials with highest harmonic below N_t/2.
  bool resolves(int harmonic) const { return N_t >= 2 * harmonic + 2; }
};

/// Default grid paired with truncation K.
inline TimeGrid default_grid(int K) { return TimeGrid(std::max(64, 8 * K)); }

/// H^{1/2} scalar product <c0,c0~> + sum_k k(<a_k,a_k~> + <b_k,b_k~>).
double h_half_inner(const FourierVector& u, const FourierVector& v);

/// Symplectic form Q(u,v), the extension of int <Ju',v> dt.
double q_form(const FourierVector& u, const FourierVector& v);

/// Pointwise samples u(t_j); column j is u(t_j) in R^{2n}.
MatrixXd eval_on_grid(const FourierVector& u, const TimeGrid& g);

/// Project grid samples (columns) back onto modes <= K. Exact inverse of
/// eval_on_grid when g resolves 2K.
FourierVector project_on_modes(const MatrixXd& samples, int n, int K, const TimeGrid& g);

/// Scalar factors of the orthonormalized basis loops at time t:
/// g_0 = 1, g_{2k-1} = sin(kt)/sqrt(k), g_{2k} = cos(kt)/sqrt(k).
VectorXd basis_scalars(int K, double t);

/// L^2 norm of the loop, sqrt(2pi|c0|^2 + pi sum(|a_k|^2+|b_k|^2)).
double l2_norm(const FourierVector& u);

}  // namespace sfb

#endif
