#include "sfb/spectral_flow.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <limits>

namespace sfb {

namespace {

VectorXd eigenvalues_of(const MatrixXd& S) {
  if (!S.allFinite())
    throw std::runtime_error("spectral_flow: non-finite matrix entries");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(S, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spectral_flow: eigen-decomposition failed");
  return es.eigenvalues();  // ascending
}

double zero_cut(const VectorXd& eigs, double tol_zero) {
  const double scale = eigs.size() ? std::max(std::abs(eigs(0)), std::abs(eigs(eigs.size() - 1))) : 0.0;
  return tol_zero * std::max(1.0, scale);
}

// Eigenvalues in [-cut, a]; zero (within cut) counts toward the
// nonnegative projection.
long count_window(const VectorXd& eigs, double cut, double a) {
  long c = 0;
  for (int i = 0; i < eigs.size(); ++i)
    if (eigs(i) >= -cut && eigs(i) <= a) ++c;
  return c;
}

long negative_count(const VectorXd& eigs, double cut) {
  long c = 0;
  for (int i = 0; i < eigs.size(); ++i)
    if (eigs(i) < -cut) ++c;
  return c;
}

}  // namespace

int morse_index(const MatrixXd& S, double tol_zero) {
  const VectorXd eigs = eigenvalues_of(S);
  return int(negative_count(eigs, zero_cut(eigs, tol_zero)));
}

// ---------------------------------------------------------------------------
// Partition route
// ---------------------------------------------------------------------------

namespace {

struct PartitionWorker {
  const OperatorPath& P;
  const SflControl& ctrl;

  // Admissible window bound for [l,r]: only the upper edge a > 0 of the
  // counting window [0, a] must stay clear of the spectrum (eigenvalues
  // passing through 0 are exactly what gets counted). a is placed in a gap
  // of the merged positive endpoint spectra whose width exceeds twice the
  // sorted-eigenvalue movement; the per-interval count is independent of
  // which admissible a is picked, so contributions add up exactly.
  static bool pick_gap_bound(const VectorXd& el, const VectorXd& er, double cut,
                             double& a_out) {
    double move = 0.0, big = 0.0;
    for (int i = 0; i < el.size(); ++i) {
      move = std::max(move, std::abs(el(i) - er(i)));
      big = std::max(big, std::max(std::abs(el(i)), std::abs(er(i))));
    }
    std::vector<double> v;
    v.reserve(2 * el.size() + 2);
    v.push_back(cut);
    for (int i = 0; i < el.size(); ++i) {
      if (el(i) > cut) v.push_back(el(i));
      if (er(i) > cut) v.push_back(er(i));
    }
    v.push_back(big + 2.0 * move + 1.0);  // sentinel above everything
    std::sort(v.begin(), v.end());
    for (size_t j = 0; j + 1 < v.size(); ++j) {
      if (v[j + 1] - v[j] > 2.0 * move) {
        a_out = 0.5 * (v[j] + v[j + 1]);
        return true;
      }
    }
    return false;
  }

  long recurse(double l, const VectorXd& el, double r, const VectorXd& er, int depth) const {
    const double cut = ctrl.tol_zero *
        std::max(1.0, std::max(el.cwiseAbs().maxCoeff(), er.cwiseAbs().maxCoeff()));
    double a;
    if (pick_gap_bound(el, er, cut, a))
      return count_window(er, cut, a) - count_window(el, cut, a);
    if (depth >= ctrl.max_depth)
      throw std::runtime_error("sfl_partition: refinement exceeded max depth near lambda=" +
                               std::to_string(0.5 * (l + r)));
    const double m = 0.5 * (l + r);
    const VectorXd em = eigenvalues_of(P.eval(m));
    return recurse(l, el, m, em, depth + 1) + recurse(m, em, r, er, depth + 1);
  }
};

}  // namespace

long sfl_partition(const OperatorPath& P, const SflControl& ctrl) {
  if (!(P.a < P.b)) throw std::invalid_argument("sfl_partition: need a < b");
  const int n_int = std::max(1, ctrl.initial_intervals);
  std::vector<VectorXd> eigs(n_int + 1);
  std::vector<double> nodes(n_int + 1);
  for (int i = 0; i <= n_int; ++i) {
    nodes[i] = P.a + (P.b - P.a) * i / n_int;
    eigs[i] = eigenvalues_of(P.eval(nodes[i]));
  }
  if (!ctrl.allow_endpoint_kernel) {
    for (int side : {0, n_int}) {
      const double cut = zero_cut(eigs[side], ctrl.tol_zero);
      if (eigs[side].cwiseAbs().minCoeff() <= cut)
        throw std::runtime_error("sfl_partition: endpoint not invertible at lambda=" +
                                 std::to_string(nodes[side]));
    }
  }
  PartitionWorker worker{P, ctrl};
  long total = 0;
  for (int i = 0; i < n_int; ++i)
    total += worker.recurse(nodes[i], eigs[i], nodes[i + 1], eigs[i + 1], 0);
  return total;
}

// ---------------------------------------------------------------------------
// Crossing-form route
// ---------------------------------------------------------------------------

namespace {

CrossingRecord make_record(const OperatorPath& P, double lambda, double kernel_cut) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(P.eval(lambda));
  const VectorXd& ev = es.eigenvalues();
  std::vector<int> idx;
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) <= kernel_cut) idx.push_back(i);
  CrossingRecord rec;
  rec.lambda = lambda;
  rec.kernel_dim = int(idx.size());
  if (rec.kernel_dim == 0) return rec;
  rec.kernel_basis.resize(ev.size(), rec.kernel_dim);
  for (int j = 0; j < rec.kernel_dim; ++j)
    rec.kernel_basis.col(j) = es.eigenvectors().col(idx[j]);
  const MatrixXd Ld = P.derivative(lambda);
  MatrixXd G = rec.kernel_basis.transpose() * Ld * rec.kernel_basis;
  G = 0.5 * (G + G.transpose()).eval();
  rec.crossing_form = G;
  const VectorXd gev = eigenvalues_of(G);
  const double gcut = 1e-8 * std::max(1.0, gev.cwiseAbs().maxCoeff());
  int pos = 0, neg = 0;
  for (int i = 0; i < gev.size(); ++i) {
    if (gev(i) > gcut) ++pos;
    else if (gev(i) < -gcut) ++neg;
  }
  rec.signature = pos - neg;
  rec.negative_index = neg;
  rec.regular = (pos + neg == rec.kernel_dim);
  return rec;
}

struct CrossingWorker {
  const OperatorPath& P;
  const SflControl& ctrl;
  double tol_lambda;
  double kernel_cut;
  std::vector<double> found;

  // Locate every interior kernel point of the path on [l,r]. Paired sorted
  // eigenvalues with opposite signs bracket a crossing and are bisected;
  // same-sign eigenvalues whose magnitude is not safely above the per-index
  // movement may hide a tangential dip and force subdivision. A dip that
  // never resolves (an eigenvalue touching zero without crossing) surfaces
  // as IrregularCrossing, which delta-regularization removes.
  void resolve(double l, const VectorXd& el, double r, const VectorXd& er, int depth) {
    bool bracketed = false, suspicious = false;
    for (int i = 0; i < el.size(); ++i) {
      const double a = el(i), b = er(i);
      if ((a < 0.0) != (b < 0.0)) {
        bracketed = true;  // one sign change = one recorded crossing
      } else if (std::min(std::abs(a), std::abs(b)) <= kernel_cut) {
        // kernel pinned at this subinterval edge: the node scan or the
        // adjacent sign bracket records it
      } else if (std::min(std::abs(a), std::abs(b)) <= 2.0 * std::abs(a - b)) {
        suspicious = true;
      }
    }
    if (!bracketed && !suspicious) return;
    if (bracketed && r - l < tol_lambda) {
      found.push_back(0.5 * (l + r));
      return;
    }
    if (depth >= ctrl.max_depth) {
      if (bracketed) {  // plain transversal crossing, bisected far enough
        found.push_back(0.5 * (l + r));
        return;
      }
      throw IrregularCrossing(
          "sfl_crossing: unresolved near-tangential kernel near lambda=" +
          std::to_string(0.5 * (l + r)));
    }
    const double m = 0.5 * (l + r);
    const VectorXd em = eigenvalues_of(P.eval(m));
    resolve(l, el, m, em, depth + 1);
    resolve(m, em, r, er, depth + 1);
  }
};

}  // namespace

CrossingResult sfl_crossing(const OperatorPath& P, const SflControl& ctrl) {
  if (!P.has_derivative())
    throw std::invalid_argument("sfl_crossing: path derivative not available");
  const int n_int = std::max(8, ctrl.initial_intervals);

  // A scale-aware threshold that separates crossing eigenvalues (driven to
  // ~|L'| * tol_lambda by bisection) from the rest of the spectrum.
  double scale = 1.0;
  std::vector<double> nodes(n_int + 1);
  std::vector<VectorXd> node_eigs(n_int + 1);
  for (int i = 0; i <= n_int; ++i) {
    nodes[i] = P.a + (P.b - P.a) * i / n_int;
    node_eigs[i] = eigenvalues_of(P.eval(nodes[i]));
    scale = std::max(scale, node_eigs[i].cwiseAbs().maxCoeff());
  }
  const double kcut = 1e-7 * scale;

  CrossingWorker worker{P, ctrl, 1e-10 * (P.b - P.a), kcut, {}};
  CrossingResult result;

  // Endpoint kernels feed the correction terms of the crossing formula.
  for (int side : {0, n_int}) {
    if (node_eigs[side].cwiseAbs().minCoeff() <= kcut) {
      CrossingRecord rec = make_record(P, nodes[side], kcut);
      if (!rec.regular)
        throw IrregularCrossing("sfl_crossing: degenerate crossing form at endpoint lambda=" +
                                std::to_string(nodes[side]));
      if (side == 0) {
        rec.at_left_endpoint = true;
        result.sfl -= rec.negative_index;
      } else {
        rec.at_right_endpoint = true;
        result.sfl += (rec.kernel_dim - rec.negative_index);  // m^-(-Gamma_b)
      }
      result.crossings.push_back(rec);
    }
  }

  // Interior crossings: certified subdivision per interval, plus a node scan
  // for kernels sitting exactly on a grid node.
  for (int i = 0; i < n_int; ++i)
    worker.resolve(nodes[i], node_eigs[i], nodes[i + 1], node_eigs[i + 1], 0);
  for (int i = 1; i < n_int; ++i)
    if (node_eigs[i].cwiseAbs().minCoeff() <= kcut) worker.found.push_back(nodes[i]);

  std::sort(worker.found.begin(), worker.found.end());
  double last = P.a;
  bool have_last = false;
  for (double lam : worker.found) {
    if (have_last && lam - last < worker.tol_lambda) continue;  // same crossing
    // kernels pinned at a path endpoint enter through the correction terms
    if (lam - P.a < 2.0 * worker.tol_lambda || P.b - lam < 2.0 * worker.tol_lambda) continue;
    last = lam;
    have_last = true;
    CrossingRecord rec = make_record(P, lam, kcut);
    if (rec.kernel_dim == 0) continue;
    if (!rec.regular)
      throw IrregularCrossing("sfl_crossing: degenerate crossing form at lambda=" +
                              std::to_string(lam));
    result.sfl += rec.signature;
    result.crossings.push_back(rec);
  }
  return result;
}

RegularizedPath delta_regularize(const OperatorPath& P, double eps, const SflControl& ctrl) {
  const VectorXd ea = eigenvalues_of(P.eval(P.a));
  const VectorXd eb = eigenvalues_of(P.eval(P.b));
  // Smallest nonzero endpoint eigenvalue bounds eps; eigenvalues already at
  // zero are moved to +delta, which leaves sfl unchanged (zero counts toward
  // the nonnegative projection).
  double end_min = std::numeric_limits<double>::infinity();
  for (const VectorXd* ev : {&ea, &eb}) {
    const double cut = zero_cut(*ev, ctrl.tol_zero);
    for (int i = 0; i < ev->size(); ++i)
      if (std::abs((*ev)(i)) > cut) end_min = std::min(end_min, std::abs((*ev)(i)));
  }
  if (!(eps > 0.0) || eps >= end_min / 2.0)
    throw std::invalid_argument(
        "delta_regularize: eps must lie in (0, min endpoint |eigenvalue| / 2)");

  std::vector<double> tried;
  for (int j = 0; j <= 40; ++j) {
    const double delta = (j == 0) ? 0.0 : eps * std::pow(2.0, -j);
    tried.push_back(delta);
    OperatorPath shifted;
    shifted.a = P.a;
    shifted.b = P.b;
    shifted.eval = [ev = P.eval, delta](double lam) {
      MatrixXd S = ev(lam);
      S.diagonal().array() += delta;
      return S;
    };
    shifted.derivative = P.derivative;
    try {
      CrossingResult cr = sfl_crossing(shifted, ctrl);
      return RegularizedPath{delta, std::move(shifted), std::move(cr)};
    } catch (const IrregularCrossing&) {
      continue;
    }
  }
  std::string msg = "delta_regularize: search exhausted; tried deltas:";
  for (double d : tried) msg += " " + std::to_string(d);
  throw std::runtime_error(msg);
}

// ---------------------------------------------------------------------------
// Parity and comparison
// ---------------------------------------------------------------------------

int degree_ls(const MatrixXd& K) {
  const VectorXd ev = eigenvalues_of(0.5 * (K + K.transpose()));
  long below = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) < -1.0) ++below;
  return (below % 2 == 0) ? 1 : -1;
}

namespace {

// Determinant sign via LU; avoids overflow of the determinant value itself.
int det_sign(const MatrixXd& S) {
  Eigen::PartialPivLU<MatrixXd> lu(S);
  int sign = lu.permutationP().determinant();
  const auto& U = lu.matrixLU();
  for (int i = 0; i < U.rows(); ++i) {
    const double d = U(i, i);
    if (d == 0.0) return 0;
    if (d < 0.0) sign = -sign;
  }
  return sign;
}

}  // namespace

ParityResult parity(const OperatorPath& P, const SflControl& ctrl) {
  ParityResult res;
  res.det_sign_a = det_sign(P.eval(P.a));
  res.det_sign_b = det_sign(P.eval(P.b));
  if (res.det_sign_a == 0 || res.det_sign_b == 0)
    throw std::runtime_error("parity: endpoint not invertible");
  const int sigma_deg = (res.det_sign_a == res.det_sign_b) ? 0 : 1;
  res.sfl = sfl_partition(P, ctrl);
  const int sigma_sfl = int(((res.sfl % 2) + 2) % 2);
  if (sigma_deg != sigma_sfl)
    throw std::runtime_error(
        "parity: degree route and spectral-flow route disagree (" +
        std::to_string(sigma_deg) + " vs " + std::to_string(sigma_sfl) +
        "); truncation not converged or bug");
  res.value = sigma_deg;
  return res;
}

ComparisonCheck check_comparison(const OperatorPath& L, const OperatorPath& M,
                                 const SflControl& ctrl) {
  const MatrixXd La = L.eval(L.a), Ma = M.eval(M.a);
  const MatrixXd Lb = L.eval(L.b), Mb = M.eval(M.b);
  if (La.rows() != Ma.rows())
    throw std::invalid_argument("check_comparison: dimension mismatch");
  const double tol = 1e-8 * std::max(1.0, std::max(La.cwiseAbs().maxCoeff(),
                                                   Ma.cwiseAbs().maxCoeff()));
  const double worst_a = eigenvalues_of(La - Ma).minCoeff();
  const double worst_b = eigenvalues_of(Mb - Lb).minCoeff();
  if (worst_a < -tol || worst_b < -tol)
    throw std::invalid_argument(
        "check_comparison: endpoint ordering violated (min eigenvalue " +
        std::to_string(std::min(worst_a, worst_b)) + ")");
  ComparisonCheck chk;
  chk.sfl_first = sfl_partition(L, ctrl);
  chk.sfl_second = sfl_partition(M, ctrl);
  chk.holds = chk.sfl_first <= chk.sfl_second;
  return chk;
}

}  // namespace sfb
