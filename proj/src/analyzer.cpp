#include "sfb/analyzer.hpp"

#include <memory>

namespace sfb {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Established: return "established";
    case Verdict::NotEstablished: return "not-established";
    default: return "hypotheses-violated";
  }
}

OperatorPath hessian_path(const HamiltonianFamily& fam, double lambda_m,
                          double lambda_p, int K) {
  auto grid = std::make_shared<TimeGrid>(
      std::max(64, 8 * K + 2 * fam.hessian.max_harmonic()));
  auto hess = std::make_shared<TrigMatrixPath>(fam.hessian);
  auto dhess = std::make_shared<TrigMatrixPath>(fam.hessian.lambda_derivative());
  auto q = std::make_shared<MatrixXd>(assemble_q_part(fam.n, K).S);
  OperatorPath P;
  P.a = lambda_m;
  P.b = lambda_p;
  P.eval = [hess, grid, K](double lam) {
    return assemble_hessian(*hess, lam, K, *grid).S;
  };
  P.derivative = [dhess, grid, q, K](double lam) {
    return MatrixXd(assemble_hessian(*dhess, lam, K, *grid).S - *q);
  };
  return P;
}

OperatorPath comparison_path(ComparisonKind kind, const ComparisonLines& lines,
                             int K, int n) {
  OperatorPath P;
  P.a = lines.lambda_m;
  P.b = lines.lambda_p;
  P.eval = [kind, lines, K, n](double lam) {
    return assemble_comparison(kind, lines, lam, K, n).S;
  };
  // The path is affine in lambda; its derivative is constant.
  const MatrixXd Sa = assemble_comparison(kind, lines, lines.lambda_m, K, n).S;
  const MatrixXd Sb = assemble_comparison(kind, lines, lines.lambda_p, K, n).S;
  auto D = std::make_shared<MatrixXd>((Sb - Sa) / (lines.lambda_p - lines.lambda_m));
  P.derivative = [D](double) { return *D; };
  return P;
}

namespace {

bool autonomy_check(const HamiltonianFamily& fam, double lambda, double tol,
                    double& bad_t) {
  const MatrixXd A0 = fam.hessian.eval(lambda, 0.0);
  for (int j = 0; j < 128; ++j) {
    const double t = 2.0 * M_PI * j / 128;
    if ((fam.hessian.eval(lambda, t) - A0).cwiseAbs().maxCoeff() > tol) {
      bad_t = t;
      return false;
    }
  }
  return true;
}

bool any_near_integer(const Envelope& em, const Envelope& ep, double tol) {
  return near_integer(em.alpha, tol) || near_integer(em.beta, tol) ||
         near_integer(ep.alpha, tol) || near_integer(ep.beta, tol);
}

}  // namespace

PartVerdict analyze_part_i(const HamiltonianFamily& fam, double lambda_m,
                           double lambda_p, const AnalyzerConfig& cfg) {
  PartVerdict pv;
  const AdmissibilityVerdict adm = endpoint_admissibility(fam, lambda_m, lambda_p);
  if (!adm.admissible) {
    pv.verdict = Verdict::HypothesesViolated;
    pv.reason = adm.violation;
    return pv;
  }
  const Envelope em = eigen_envelope(fam, lambda_m);
  const Envelope ep = eigen_envelope(fam, lambda_p);
  pv.tolerance_sensitive = any_near_integer(em, ep, cfg.integer_tol);
  if (em.beta < ep.alpha && delta_count(em.beta, ep.alpha) > 0) {
    pv.verdict = Verdict::Established;
    pv.fired_disjunct = 1;
    pv.reason = "beta_- < alpha_+ with Delta(beta_-, alpha_+) = " +
                std::to_string(delta_count(em.beta, ep.alpha)) + " > 0";
  } else if (ep.beta < em.alpha && delta_count(em.alpha, ep.beta) < 0) {
    pv.verdict = Verdict::Established;
    pv.fired_disjunct = 2;
    pv.reason = "beta_+ < alpha_- with Delta(alpha_-, beta_+) = " +
                std::to_string(delta_count(em.alpha, ep.beta)) + " < 0";
  } else {
    pv.reason = "neither gap/Delta disjunct holds";
  }
  return pv;
}

PartVerdict analyze_part_ii(const HamiltonianFamily& fam, double lambda_m,
                            double lambda_p, const AnalyzerConfig& cfg) {
  PartVerdict pv;
  double bad_t = 0.0;
  if (!autonomy_check(fam, lambda_m, cfg.autonomy_tol, bad_t)) {
    pv.verdict = Verdict::HypothesesViolated;
    pv.reason = "A at lambda_- not autonomous (varies at t=" + std::to_string(bad_t) + ")";
    return pv;
  }
  const AdmissibilityVerdict adm = endpoint_admissibility(fam, lambda_m, lambda_p);
  if (!adm.admissible) {
    pv.verdict = Verdict::HypothesesViolated;
    pv.reason = adm.violation;
    return pv;
  }
  const Envelope em = eigen_envelope(fam, lambda_m);
  const Envelope ep = eigen_envelope(fam, lambda_p);
  pv.tolerance_sensitive = any_near_integer(em, ep, cfg.integer_tol);
  if (!(em.alpha < 0.0 && 0.0 < em.beta)) {
    pv.verdict = Verdict::HypothesesViolated;
    pv.reason = "alpha_- < 0 < beta_- fails (alpha_- = " + std::to_string(em.alpha) +
                ", beta_- = " + std::to_string(em.beta) + ")";
    return pv;
  }
  if (em.beta < ep.alpha) {
    pv.verdict = Verdict::Established;
    pv.fired_disjunct = 1;  // corresponds to sfl(h(.,lambda_-)) > 0
    pv.reason = "alpha_- < 0 < beta_- and beta_- < alpha_+";
  } else if (ep.beta < em.alpha) {
    pv.verdict = Verdict::Established;
    pv.fired_disjunct = 2;  // corresponds to sfl(h(.,lambda_-)) < 0
    pv.reason = "alpha_- < 0 < beta_- and beta_+ < alpha_-";
  } else {
    pv.reason = "no gap: beta_- >= alpha_+ and beta_+ >= alpha_-";
  }
  return pv;
}

PartVerdict analyze_part_iii(const HamiltonianFamily& fam, double lambda_m,
                             double lambda_p, const AnalyzerConfig& cfg) {
  PartVerdict pv;
  if (fam.n != 1) {
    pv.verdict = Verdict::HypothesesViolated;
    pv.reason = "planar systems only (n = 1), got n = " + std::to_string(fam.n);
    return pv;
  }
  if (!cfg.relax_ii) {
    const PartVerdict ii = analyze_part_ii(fam, lambda_m, lambda_p, cfg);
    if (ii.verdict != Verdict::Established) {
      pv.verdict = ii.verdict;
      pv.reason = "part (ii) hypotheses: " + ii.reason;
      pv.tolerance_sensitive = ii.tolerance_sensitive;
      return pv;
    }
  }
  const Envelope em = eigen_envelope(fam, lambda_m);
  const Envelope ep = eigen_envelope(fam, lambda_p);
  pv.tolerance_sensitive = any_near_integer(em, ep, cfg.integer_tol);
  const long fwd = delta_count(em.alpha, ep.beta) - delta_count(em.beta, ep.alpha);
  const long swp = delta_count(ep.beta, em.alpha) - delta_count(ep.alpha, em.beta);
  const std::string suffix = cfg.relax_ii ? " [condition-(Delta)-only]" : "";
  if (fwd == 1) {
    pv.verdict = Verdict::Established;
    pv.fired_disjunct = 1;
    pv.reason = "Delta(alpha_-, beta_+) - Delta(beta_-, alpha_+) = 1" + suffix;
  } else if (ep.beta < em.alpha && swp == 1) {
    pv.verdict = Verdict::Established;
    pv.fired_disjunct = 2;
    pv.reason = "Delta(beta_+, alpha_-) - Delta(alpha_+, beta_-) = 1 (swapped orientation)" + suffix;
  } else {
    pv.reason = "Delta difference is " + std::to_string(fwd) + ", not 1" + suffix;
  }
  return pv;
}

namespace {

// Shift a comparison endpoint that sits on an integer towards the other end
// of its line, so the comparison path keeps invertible endpoints.
double nudge_off_integer(double value, double other, const AnalyzerConfig& cfg,
                         std::vector<double>& ledger) {
  if (!near_integer(value, cfg.integer_tol)) return value;
  const double shifted = value + (other >= value ? cfg.nudge : -cfg.nudge);
  ledger.push_back(shifted);
  return shifted;
}

}  // namespace

SflSandwich sfl_sandwich(const HamiltonianFamily& fam, double lambda_m,
                         double lambda_p, int K, const AnalyzerConfig& cfg) {
  const AdmissibilityVerdict adm = endpoint_admissibility(fam, lambda_m, lambda_p);
  if (!adm.admissible)
    throw std::runtime_error("sfl_sandwich: " + adm.violation);

  const Envelope em = eigen_envelope(fam, lambda_m);
  const Envelope ep = eigen_envelope(fam, lambda_p);

  SflSandwich sw;
  sw.K = K;
  sw.K_check = K + cfg.K_check_offset;

  const double bm = nudge_off_integer(em.beta, ep.alpha, cfg, sw.nudged_values);
  const double ap = nudge_off_integer(ep.alpha, em.beta, cfg, sw.nudged_values);
  const double am = nudge_off_integer(em.alpha, ep.beta, cfg, sw.nudged_values);
  const double bp = nudge_off_integer(ep.beta, em.alpha, cfg, sw.nudged_values);

  const ComparisonLines lines = comparison_lines(am, bm, ap, bp, lambda_m, lambda_p);
  sw.sfl_M = sfl_partition(comparison_path(ComparisonKind::M, lines, K, fam.n));
  sw.sfl_N = sfl_partition(comparison_path(ComparisonKind::N, lines, K, fam.n));
  sw.expected_M = 2 * fam.n * delta_count(bm, ap);
  sw.expected_N = 2 * fam.n * delta_count(am, bp);
  sw.formulas_hold = (sw.sfl_M == sw.expected_M && sw.sfl_N == sw.expected_N);

  sw.sfl_L = sfl_partition(hessian_path(fam, lambda_m, lambda_p, K));
  sw.sfl_L_check = sfl_partition(hessian_path(fam, lambda_m, lambda_p, sw.K_check));
  if (sw.sfl_L != sw.sfl_L_check)
    throw std::runtime_error("sfl_sandwich: truncation not converged (sfl_L " +
                             std::to_string(sw.sfl_L) + " at K=" + std::to_string(K) +
                             " vs " + std::to_string(sw.sfl_L_check) + " at K=" +
                             std::to_string(sw.K_check) + ")");
  sw.strict_sandwich = (sw.sfl_M < sw.sfl_L && sw.sfl_L < sw.sfl_N);
  sw.sfl_L_odd = (((sw.sfl_L % 2) + 2) % 2) == 1;
  return sw;
}

BifurcationReport analyze(const HamiltonianFamily& fam, double lambda_m,
                          double lambda_p, const AnalyzerConfig& cfg) {
  if (!(lambda_m < lambda_p))
    throw std::invalid_argument("analyze: need lambda_- < lambda_+");
  BifurcationReport rep;
  rep.family = fam.name;
  rep.lambda_m = lambda_m;
  rep.lambda_p = lambda_p;
  rep.env_minus = eigen_envelope(fam, lambda_m);
  rep.env_plus = eigen_envelope(fam, lambda_p);
  rep.delta_bm_ap = delta_count(rep.env_minus.beta, rep.env_plus.alpha);
  rep.delta_am_bp = delta_count(rep.env_minus.alpha, rep.env_plus.beta);
  rep.delta_bp_am = delta_count(rep.env_plus.beta, rep.env_minus.alpha);
  rep.delta_ap_bm = delta_count(rep.env_plus.alpha, rep.env_minus.beta);
  rep.admissibility = endpoint_admissibility(fam, lambda_m, lambda_p);
  double bad_t;
  rep.autonomous_at_minus = autonomy_check(fam, lambda_m, cfg.autonomy_tol, bad_t);
  rep.part_i = analyze_part_i(fam, lambda_m, lambda_p, cfg);
  rep.part_ii = analyze_part_ii(fam, lambda_m, lambda_p, cfg);
  rep.part_iii = analyze_part_iii(fam, lambda_m, lambda_p, cfg);
  if (rep.admissibility.admissible) {
    rep.sandwich = sfl_sandwich(fam, lambda_m, lambda_p, cfg.K, cfg);
    rep.have_sandwich = true;
    rep.parity_L = parity(hessian_path(fam, lambda_m, lambda_p, cfg.K)).value;
  }
  return rep;
}

}  // namespace sfb
