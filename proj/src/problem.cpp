#include "sfb/problem.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace sfb {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) { ok = true; break; }
    if (!ok)
      throw std::invalid_argument("problem file: unknown key '" + it.key() +
                                  "' in " + where);
  }
}

MatrixXd parse_matrix(const json& j, int n, const std::string& where) {
  if (!j.is_array() || int(j.size()) != 2 * n)
    throw std::invalid_argument("problem file: " + where + " must be a 2n x 2n array");
  MatrixXd M(2 * n, 2 * n);
  for (int r = 0; r < 2 * n; ++r) {
    if (!j[r].is_array() || int(j[r].size()) != 2 * n)
      throw std::invalid_argument("problem file: " + where + " row length mismatch");
    for (int c = 0; c < 2 * n; ++c) M(r, c) = j[r][c].get<double>();
  }
  return M;
}

std::vector<MatrixXd> parse_poly(const json& j, int n, const std::string& where) {
  if (!j.is_array())
    throw std::invalid_argument("problem file: " + where + " must be a list of matrices");
  std::vector<MatrixXd> poly;
  for (size_t d = 0; d < j.size(); ++d)
    poly.push_back(parse_matrix(j[d], n, where + "[" + std::to_string(d) + "]"));
  return poly;
}

json matrix_to_json(const MatrixXd& M) {
  json rows = json::array();
  for (int r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(row);
  }
  return rows;
}

json poly_to_json(const std::vector<MatrixXd>& poly) {
  json out = json::array();
  for (const auto& M : poly) out.push_back(matrix_to_json(M));
  return out;
}

// temp file + rename so readers never see partial output
void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp);
    if (!os) throw std::runtime_error("cannot open " + tmp.string());
    os << content;
  }
  fs::rename(tmp, path);
}

}  // namespace

HamiltonianFamily ProblemSpec::family() const {
  if (!builtin.empty()) {
    HamiltonianFamily fam = builtin_family(builtin);
    if (fam.n != n)
      throw std::invalid_argument("problem file: n does not match builtin family");
    return fam;
  }
  HamiltonianFamily fam;
  fam.name = "trig_matrix";
  fam.n = n;
  fam.hessian = trig_matrix;
  return fam;
}

AnalyzerConfig ProblemSpec::analyzer_config() const {
  AnalyzerConfig cfg;
  cfg.K = K;
  cfg.relax_ii = relax_ii;
  return cfg;
}

ContinuationConfig ProblemSpec::continuation_config() const {
  ContinuationConfig cfg;
  cfg.K = K;
  cfg.tol_res = tol_res;
  cfg.amp_max = amp_max;
  cfg.seed_amp = seed_amp;
  cfg.max_steps = max_steps;
  cfg.window_lo = window_lo;
  cfg.window_hi = window_hi;
  return cfg;
}

ProblemSpec parse_problem_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("problem file: ") + e.what());
  }
  reject_unknown(j, {"n", "family", "lambda_minus", "lambda_plus", "K", "N_t",
                     "tolerances", "relax_ii", "grid_points", "continuation"},
                 "top level");
  ProblemSpec spec;
  if (!j.contains("n") || !j.contains("family") || !j.contains("lambda_minus") ||
      !j.contains("lambda_plus"))
    throw std::invalid_argument(
        "problem file: required keys n, family, lambda_minus, lambda_plus");
  spec.n = j["n"].get<int>();
  if (spec.n < 1) throw std::invalid_argument("problem file: need n >= 1");
  spec.lambda_minus = j["lambda_minus"].get<double>();
  spec.lambda_plus = j["lambda_plus"].get<double>();
  if (!(spec.lambda_minus < spec.lambda_plus))
    throw std::invalid_argument("problem file: need lambda_minus < lambda_plus");

  const json& f = j["family"];
  reject_unknown(f, {"builtin", "trig_matrix"}, "family");
  if (f.contains("builtin") == f.contains("trig_matrix"))
    throw std::invalid_argument(
        "problem file: family needs exactly one of builtin / trig_matrix");
  if (f.contains("builtin")) {
    spec.builtin = f["builtin"].get<std::string>();
    builtin_family(spec.builtin);  // validates the name, lists catalog on error
  } else {
    const json& tm = f["trig_matrix"];
    reject_unknown(tm, {"a0", "cos", "sin"}, "family.trig_matrix");
    spec.trig_matrix.n = spec.n;
    if (tm.contains("a0"))
      spec.trig_matrix.a0_poly = parse_poly(tm["a0"], spec.n, "a0");
    auto parse_harmonics = [&](const char* key, bool is_cos) {
      if (!tm.contains(key)) return;
      for (const auto& hj : tm[key]) {
        reject_unknown(hj, {"m", "poly"}, std::string("family.trig_matrix.") + key);
        const int m = hj.at("m").get<int>();
        if (m < 1) throw std::invalid_argument("problem file: harmonic m must be >= 1");
        auto poly = parse_poly(hj.at("poly"), spec.n, key);
        TrigMatrixPath::Harmonic* slot = nullptr;
        for (auto& h : spec.trig_matrix.harmonics)
          if (h.m == m) slot = &h;
        if (!slot) {
          spec.trig_matrix.harmonics.push_back({m, {}, {}});
          slot = &spec.trig_matrix.harmonics.back();
        }
        (is_cos ? slot->cos_poly : slot->sin_poly) = std::move(poly);
      }
    };
    parse_harmonics("cos", true);
    parse_harmonics("sin", false);
  }

  if (j.contains("K")) spec.K = j["K"].get<int>();
  if (spec.K < 1) throw std::invalid_argument("problem file: need K >= 1");
  if (j.contains("N_t")) spec.N_t = j["N_t"].get<int>();
  if (j.contains("relax_ii")) spec.relax_ii = j["relax_ii"].get<bool>();
  if (j.contains("grid_points")) spec.grid_points = j["grid_points"].get<int>();
  if (spec.grid_points < 2) throw std::invalid_argument("problem file: grid_points >= 2");

  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    reject_unknown(t, {"tol_zero", "tol_res", "kernel_tol"}, "tolerances");
    if (t.contains("tol_zero")) spec.tol_zero = t["tol_zero"].get<double>();
    if (t.contains("tol_res")) spec.tol_res = t["tol_res"].get<double>();
    if (t.contains("kernel_tol")) spec.kernel_tol = t["kernel_tol"].get<double>();
    if (spec.tol_zero <= 0 || spec.tol_res <= 0 || spec.kernel_tol <= 0)
      throw std::invalid_argument("problem file: tolerances must be positive");
  }
  if (j.contains("continuation")) {
    const json& c = j["continuation"];
    reject_unknown(c, {"amp_max", "seed_amp", "max_steps", "window", "lambda_star"},
                   "continuation");
    if (c.contains("amp_max")) spec.amp_max = c["amp_max"].get<double>();
    if (c.contains("seed_amp")) spec.seed_amp = c["seed_amp"].get<double>();
    if (c.contains("max_steps")) spec.max_steps = c["max_steps"].get<int>();
    if (c.contains("window")) {
      spec.window_lo = c["window"].at(0).get<double>();
      spec.window_hi = c["window"].at(1).get<double>();
    }
    if (c.contains("lambda_star")) spec.lambda_star = c["lambda_star"].get<double>();
  }
  return spec;
}

ProblemSpec parse_problem(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("problem file not found: " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_problem_text(ss.str());
}

std::string serialize_problem(const ProblemSpec& spec) {
  json j;
  j["n"] = spec.n;
  if (!spec.builtin.empty()) {
    j["family"] = {{"builtin", spec.builtin}};
  } else {
    json tm;
    tm["a0"] = poly_to_json(spec.trig_matrix.a0_poly);
    json cosj = json::array(), sinj = json::array();
    for (const auto& h : spec.trig_matrix.harmonics) {
      if (!h.cos_poly.empty()) cosj.push_back({{"m", h.m}, {"poly", poly_to_json(h.cos_poly)}});
      if (!h.sin_poly.empty()) sinj.push_back({{"m", h.m}, {"poly", poly_to_json(h.sin_poly)}});
    }
    if (!cosj.empty()) tm["cos"] = cosj;
    if (!sinj.empty()) tm["sin"] = sinj;
    j["family"] = {{"trig_matrix", tm}};
  }
  j["lambda_minus"] = spec.lambda_minus;
  j["lambda_plus"] = spec.lambda_plus;
  j["K"] = spec.K;
  j["N_t"] = spec.N_t;
  j["tolerances"] = {{"tol_zero", spec.tol_zero},
                     {"tol_res", spec.tol_res},
                     {"kernel_tol", spec.kernel_tol}};
  j["relax_ii"] = spec.relax_ii;
  j["grid_points"] = spec.grid_points;
  json c = {{"amp_max", spec.amp_max},
            {"seed_amp", spec.seed_amp},
            {"max_steps", spec.max_steps},
            {"window", {spec.window_lo, spec.window_hi}}};
  if (!std::isnan(spec.lambda_star)) c["lambda_star"] = spec.lambda_star;
  j["continuation"] = c;
  return j.dump(2) + "\n";
}

namespace {

json verdict_to_json(const PartVerdict& pv) {
  return {{"verdict", to_string(pv.verdict)},
          {"reason", pv.reason},
          {"tolerance_sensitive", pv.tolerance_sensitive},
          {"fired_disjunct", pv.fired_disjunct}};
}

}  // namespace

std::string report_to_json(const BifurcationReport& rep) {
  json j;
  j["family"] = rep.family;
  j["lambda_minus"] = rep.lambda_m;
  j["lambda_plus"] = rep.lambda_p;
  j["alpha_minus"] = rep.env_minus.alpha;
  j["beta_minus"] = rep.env_minus.beta;
  j["alpha_plus"] = rep.env_plus.alpha;
  j["beta_plus"] = rep.env_plus.beta;
  j["delta_beta_minus_alpha_plus"] = rep.delta_bm_ap;
  j["delta_alpha_minus_beta_plus"] = rep.delta_am_bp;
  j["delta_beta_plus_alpha_minus"] = rep.delta_bp_am;
  j["delta_alpha_plus_beta_minus"] = rep.delta_ap_bm;
  j["admissible"] = rep.admissibility.admissible;
  j["kernel_dim_minus"] = rep.admissibility.kernel_dim_minus;
  j["kernel_dim_plus"] = rep.admissibility.kernel_dim_plus;
  j["admissibility_violation"] = rep.admissibility.violation;
  j["autonomous_at_minus"] = rep.autonomous_at_minus;
  j["part_i"] = verdict_to_json(rep.part_i);
  j["part_ii"] = verdict_to_json(rep.part_ii);
  j["part_iii"] = verdict_to_json(rep.part_iii);
  j["sandwich_status"] = rep.have_sandwich ? "computed" : "skipped";
  json sw;
  sw["sfl_L"] = rep.sandwich.sfl_L;
  sw["sfl_L_check"] = rep.sandwich.sfl_L_check;
  sw["sfl_M"] = rep.sandwich.sfl_M;
  sw["sfl_N"] = rep.sandwich.sfl_N;
  sw["expected_M"] = rep.sandwich.expected_M;
  sw["expected_N"] = rep.sandwich.expected_N;
  sw["formulas_hold"] = rep.sandwich.formulas_hold;
  sw["strict_sandwich"] = rep.sandwich.strict_sandwich;
  sw["sfl_L_odd"] = rep.sandwich.sfl_L_odd;
  sw["K"] = rep.sandwich.K;
  sw["K_check"] = rep.sandwich.K_check;
  sw["nudged_values"] = rep.sandwich.nudged_values;
  j["sandwich"] = sw;
  j["parity_status"] = (rep.parity_L >= 0) ? "computed" : "skipped";
  j["parity_L"] = rep.parity_L;
  return j.dump(2) + "\n";
}

int run_command(const std::string& cmd, const ProblemSpec& spec,
                const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const HamiltonianFamily fam = spec.family();
  const AnalyzerConfig acfg = spec.analyzer_config();

  auto lambda_grid = [&]() {
    std::vector<double> grid(spec.grid_points);
    for (int i = 0; i < spec.grid_points; ++i)
      grid[i] = spec.lambda_minus +
                (spec.lambda_plus - spec.lambda_minus) * i / (spec.grid_points - 1);
    return grid;
  };

  if (cmd == "envelope") {
    std::ostringstream os;
    os << "lambda,alpha,beta\n";
    os.precision(17);
    for (double lam : lambda_grid()) {
      const Envelope e = eigen_envelope(fam, lam, std::max(32, spec.N_t));
      os << lam << "," << e.alpha << "," << e.beta << "\n";
    }
    write_atomic(out_dir / "envelope.csv", os.str());
    return 0;
  }
  if (cmd == "monodromy") {
    std::ostringstream os;
    os << "lambda,kernel_dim\n";
    os.precision(17);
    for (double lam : lambda_grid())
      os << lam << "," << periodic_kernel_dim(fam, lam, spec.kernel_tol) << "\n";
    write_atomic(out_dir / "monodromy.csv", os.str());
    return 0;
  }
  if (cmd == "sfl") {
    const SflSandwich sw =
        sfl_sandwich(fam, spec.lambda_minus, spec.lambda_plus, spec.K, acfg);
    json j = {{"sfl_L", sw.sfl_L},     {"sfl_M", sw.sfl_M},
              {"sfl_N", sw.sfl_N},     {"K", sw.K},
              {"K_check", sw.K_check}, {"expected_M", sw.expected_M},
              {"expected_N", sw.expected_N}, {"formulas_hold", sw.formulas_hold},
              {"sfl_L_odd", sw.sfl_L_odd}};
    write_atomic(out_dir / "sfl.json", j.dump(2) + "\n");
    return 0;
  }
  if (cmd == "parity") {
    const ParityResult pr =
        parity(hessian_path(fam, spec.lambda_minus, spec.lambda_plus, spec.K));
    json j = {{"parity", pr.value},
              {"multiplicative", pr.value == 0 ? 1 : -1},
              {"sfl", pr.sfl},
              {"det_sign_minus", pr.det_sign_a},
              {"det_sign_plus", pr.det_sign_b}};
    write_atomic(out_dir / "parity.json", j.dump(2) + "\n");
    return 0;
  }
  if (cmd == "analyze") {
    const BifurcationReport rep =
        analyze(fam, spec.lambda_minus, spec.lambda_plus, acfg);
    write_atomic(out_dir / "report.json", report_to_json(rep));
    return rep.admissibility.admissible ? 0 : 2;
  }
  if (cmd == "continue") {
    double lam_star = spec.lambda_star;
    if (std::isnan(lam_star)) {
      // locate the first linearized bifurcation candidate inside the window
      bool found = false;
      for (double lam : lambda_grid())
        if (periodic_kernel_dim(fam, lam, spec.kernel_tol) > 0) {
          lam_star = lam;
          found = true;
          break;
        }
      if (!found)
        throw std::runtime_error("continue: no kernel point found on the lambda grid");
    }
    const ContinuationConfig ccfg = spec.continuation_config();
    const MatrixXd tangents = branch_tangent(fam, lam_star, spec.K);
    const BranchTrace trace = continue_branch(fam, lam_star, tangents.col(0), ccfg);
    std::ostringstream os;
    os << "step,lambda,amplitude,residual\n";
    os.precision(17);
    for (const auto& bp : trace.points)
      os << bp.step_index << "," << bp.lambda << "," << bp.amplitude << ","
         << bp.residual_norm << "\n";
    os << "# stop_reason: " << to_string(trace.stop) << "\n";
    write_atomic(out_dir / "continue.csv", os.str());
    return 0;
  }
  throw std::invalid_argument("unknown command '" + cmd +
                              "'; expected envelope|monodromy|sfl|parity|analyze|continue");
}

}  // namespace sfb
