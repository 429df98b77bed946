#include "sfb/fourier.hpp"

#include <doctest.h>

#include <random>

using namespace sfb;

namespace {

FourierVector random_loop(std::mt19937& rng, int n, int K) {
  std::normal_distribution<double> g;
  FourierVector u(n, K);
  for (int i = 0; i < 2 * n; ++i) u.c0(i) = g(rng);
  for (int k = 0; k < K; ++k)
    for (int i = 0; i < 2 * n; ++i) {
      u.a[k](i) = g(rng);
      u.b[k](i) = g(rng);
    }
  return u;
}

// Derivative samples u'(t) = sum k (a_k cos kt - b_k sin kt).
VectorXd deriv_at(const FourierVector& u, double t) {
  VectorXd d = VectorXd::Zero(2 * u.n);
  for (int k = 1; k <= u.K; ++k)
    d += k * (std::cos(k * t) * u.a[k - 1] - std::sin(k * t) * u.b[k - 1]);
  return d;
}

}  // namespace

TEST_CASE("symplectic matrix") {
  const MatrixXd J = symplectic_matrix(2);
  CHECK(J.rows() == 4);
  CHECK((J * J + MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((J + J.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("h_half_inner on simple loops") {
  FourierVector u(1, 2);
  u.c0(0) = 1.0;
  CHECK(h_half_inner(u, u) == doctest::Approx(1.0));

  FourierVector v(1, 1);
  v.a[0](0) = 1.0;
  CHECK(h_half_inner(v, v) == doctest::Approx(1.0));

  FourierVector p(1, 2), q(1, 2);
  p.a[1](0) = 1.0;
  q.b[1](0) = 1.0;
  CHECK(h_half_inner(p, q) == doctest::Approx(0.0));
}

TEST_CASE("h_half_inner positive definite") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    FourierVector u = random_loop(rng, 1 + trial % 2, 3);
    CHECK(h_half_inner(u, u) > 0.0);
    // matches the Euclidean norm of the orthonormalized coefficients
    CHECK(h_half_inner(u, u) == doctest::Approx(u.to_coeffs().squaredNorm()));
  }
}

TEST_CASE("q_form on simple loops") {
  FourierVector c1(1, 1), c2(1, 1);
  c1.c0(0) = 2.0;
  c2.c0(1) = -3.0;
  CHECK(q_form(c1, c2) == doctest::Approx(0.0));

  // u = e1 sin t, v = e2 cos t
  FourierVector u(1, 1), v(1, 1);
  u.a[0](0) = 1.0;
  v.b[0](1) = 1.0;
  CHECK(q_form(u, v) == doctest::Approx(M_PI));
}

TEST_CASE("q_form symmetry and integration by parts") {
  std::mt19937 rng(17);
  const TimeGrid g(64);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 2;
    FourierVector u = random_loop(rng, n, 3);
    FourierVector v = random_loop(rng, n, 3);
    CHECK(q_form(u, v) == doctest::Approx(q_form(v, u)).epsilon(1e-12));

    const MatrixXd J = symplectic_matrix(n);
    const MatrixXd su = eval_on_grid(u, g), sv = eval_on_grid(v, g);
    double left = 0.0, right = 0.0;
    for (int j = 0; j < g.N_t; ++j) {
      left += g.weight() * (J * deriv_at(u, g.t[j])).dot(sv.col(j));
      right += g.weight() * su.col(j).dot(J * deriv_at(v, g.t[j]));
    }
    CHECK(std::abs(left - right) < 1e-10);
    CHECK(q_form(u, v) == doctest::Approx(left).epsilon(1e-10));
  }
}

TEST_CASE("eval_on_grid samples") {
  FourierVector c(1, 1);
  c.c0 << 0.5, -1.5;
  const TimeGrid g(8);
  const MatrixXd s = eval_on_grid(c, g);
  for (int j = 0; j < 8; ++j) CHECK((s.col(j) - c.c0).cwiseAbs().maxCoeff() < 1e-15);

  FourierVector u(1, 1);
  u.a[0](0) = 1.0;
  const TimeGrid g4(4);
  const MatrixXd s4 = eval_on_grid(u, g4);
  CHECK(s4(0, 0) == doctest::Approx(0.0));
  CHECK(s4(0, 1) == doctest::Approx(1.0));
  CHECK(s4(0, 2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s4(0, 3) == doctest::Approx(-1.0));
}

TEST_CASE("project_on_modes round trip") {
  std::mt19937 rng(23);
  const TimeGrid g(16);
  for (int trial = 0; trial < 10; ++trial) {
    FourierVector u = random_loop(rng, 1, 3);
    FourierVector w = project_on_modes(eval_on_grid(u, g), 1, 3, g);
    CHECK((w.to_coeffs() - u.to_coeffs()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("coefficient layout round trip") {
  std::mt19937 rng(29);
  FourierVector u = random_loop(rng, 2, 4);
  CHECK(u.dim() == galerkin_dim(2, 4));
  FourierVector w = FourierVector::from_coeffs(u.to_coeffs(), 2, 4);
  CHECK((w.c0 - u.c0).cwiseAbs().maxCoeff() < 1e-15);
  for (int k = 0; k < 4; ++k) {
    CHECK((w.a[k] - u.a[k]).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((w.b[k] - u.b[k]).cwiseAbs().maxCoeff() < 1e-15);
  }
  CHECK_THROWS_AS(FourierVector::from_coeffs(u.to_coeffs(), 2, 5), std::invalid_argument);
}

TEST_CASE("basis scalars") {
  const VectorXd gv = basis_scalars(2, 0.3);
  CHECK(gv.size() == 5);
  CHECK(gv(0) == doctest::Approx(1.0));
  CHECK(gv(1) == doctest::Approx(std::sin(0.3)));
  CHECK(gv(2) == doctest::Approx(std::cos(0.3)));
  CHECK(gv(3) == doctest::Approx(std::sin(0.6) / std::sqrt(2.0)));
  CHECK(gv(4) == doctest::Approx(std::cos(0.6) / std::sqrt(2.0)));
}

TEST_CASE("l2 norm") {
  FourierVector c(1, 0);
  c.c0(0) = 1.0;
  CHECK(l2_norm(c) == doctest::Approx(std::sqrt(2.0 * M_PI)));
  FourierVector u(1, 1);
  u.a[0](0) = 1.0;
  CHECK(l2_norm(u) == doctest::Approx(std::sqrt(M_PI)));
}

TEST_CASE("time grid nyquist rule") {
  const TimeGrid g(16);
  CHECK(g.weight() == doctest::Approx(2.0 * M_PI / 16));
  CHECK(g.resolves(7));
  CHECK_FALSE(g.resolves(8));
  CHECK_THROWS_AS(TimeGrid(1), std::invalid_argument);
}
