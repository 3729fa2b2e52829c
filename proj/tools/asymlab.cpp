// asymlab: command-line front end for the asymmetric unimodal map library.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "asymlab/asymlab.hpp"
#include "asymlab/config.hpp"
#include "asymlab/io.hpp"

using namespace asymlab;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitGate = 2;
constexpr int kExitUsage = 64;

struct Output {
  std::string format;  // "csv" or "json"
  CsvTable csv;
  json data;
  bool gate_failed = false;
};

class Runner {
 public:
  explicit Runner(const RunConfig& c) : cfg_(c) {}

  std::string dec(const BigReal& x) const { return x.to_string(cfg_.digits); }
  std::string dec_opt(const std::optional<BigReal>& x) const { return x ? dec(*x) : std::string(); }
  json jdec_opt(const std::optional<BigReal>& x) const { return x ? json(dec(*x)) : json(nullptr); }

  Output cascade();
  Output ladder();
  Output scaling();
  Output renorm_limit();
  Output semiext();
  Output hausdorff();
  Output bifurcation();
  Output invariants();

  const json& metadata() const { return meta_; }

 private:
  ResolvedRun& run() {
    if (!run_) {
      run_ = resolve(cfg_);
      meta_ = run_->metadata(cfg_.digits);
    }
    return *run_;
  }
  RenormLadder& lad() {
    if (!ladder_) {
      ladder_ = run_ladder(run());
      meta_["depth"] = ladder_->depth();
      meta_["max_trusted_level"] = ladder_->max_trusted_level;
    }
    return *ladder_;
  }
  std::string fmt(const char* dflt) const { return cfg_.format.empty() ? dflt : cfg_.format; }

  RunConfig cfg_;
  std::optional<ResolvedRun> run_;
  std::optional<RenormLadder> ladder_;
  json meta_;
};

json record_json(const Runner& r, const CascadeRecord& c) {
  return json{{"n", c.n},
              {"condition", to_string(c.condition)},
              {"u", r.jdec_opt(c.u)},
              {"v", r.jdec_opt(c.v)},
              {"t_superstable", r.jdec_opt(c.t_superstable)},
              {"bracket_width", r.dec(c.bracket_width)},
              {"residual", r.dec(c.residual)}};
}

Output Runner::cascade() {
  const int N = cfg_.max_level;
  if (N < 1) throw ConfigError("cascade: --max-level must be >= 1");
  long P = resolve_precision(cfg_);
  AsymmetricMap proto(BigReal(cfg_.beta, P), BigReal(1L, P), BigReal(cfg_.scale_left, P),
                      BigReal(cfg_.scale_right, P), P);
  BigReal rel = cfg_.rel_tol == "auto" ? auto_rel_tol(P) : BigReal(cfg_.rel_tol, P);
  CascadeSolver cs(proto, rel);
  meta_["config"] = cfg_;
  meta_["precision_bits"] = P;
  meta_["rel_tol"] = rel.to_string(6);

  std::vector<CascadeRecord> recs;
  recs.push_back(cs.superstable(0));
  recs.push_back(cs.window_end(0, CascadeSolver::anchor_level(N)));
  for (int n = 1; n <= N; ++n) {
    if (n % 2 == 1) recs.push_back(cs.superstable(n));
    recs.push_back(cs.flip(n));
    recs.push_back(cs.window_end(n, CascadeSolver::anchor_level(N)));
  }
  CascadeRecord ts = estimate_tstar(cs, N);

  Output o;
  o.format = fmt("json");
  o.csv.header = {"n", "condition", "u", "v", "t_superstable", "bracket_width", "residual"};
  json arr = json::array();
  for (const auto& c : recs) {
    o.csv.add({std::to_string(c.n), to_string(c.condition), dec_opt(c.u), dec_opt(c.v), dec_opt(c.t_superstable),
               dec(c.bracket_width), dec(c.residual)});
    arr.push_back(record_json(*this, c));
  }
  o.data["records"] = arr;
  o.data["t_star_estimate"] = {{"level", ts.n},
                               {"t", dec(*ts.t_superstable)},
                               {"bracket_width", dec(ts.bracket_width)},
                               {"trusted_levels", std::max(0, ts.n - cfg_.margin)}};
  return o;
}

Output Runner::ladder() {
  RenormLadder& L = lad();
  Output o;
  o.format = fmt("csv");
  o.csv.header = {"k", "a_k", "b_k", "c_2k", "fixed_residual"};
  json arr = json::array();
  for (int k = 0; k <= cfg_.max_level; ++k) {
    const auto& lv = L.level(k);
    o.csv.add({std::to_string(k), dec(lv.a), dec(lv.b), dec(lv.c_pow), dec(lv.fixed_residual)});
    arr.push_back({{"k", k},
                   {"a_k", dec(lv.a)},
                   {"b_k", dec(lv.b)},
                   {"c_2k", dec(lv.c_pow)},
                   {"fixed_residual", dec(lv.fixed_residual)},
                   {"preimage_residual", dec(lv.preimage_residual)},
                   {"root_tol", dec(lv.root_tol)},
                   {"trusted", k <= L.max_trusted_level}});
  }
  o.data["levels"] = arr;
  return o;
}

json indexed_json(const Runner& r, const std::vector<IndexedValue>& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back({{"k", x.k}, {"value", r.dec(x.value)}});
  return a;
}

Output Runner::scaling() {
  RenormLadder& L = lad();
  ScalingReport R = analyze(L);
  std::vector<CheckRow> rows = check_theorem4(R);
  Output o;
  o.format = fmt("json");
  o.csv.header = {"k", "quantity", "value", "predicted", "rel_dev"};
  auto emit = [&](const char* name, const std::vector<IndexedValue>& xs, const std::optional<BigReal>& pred) {
    for (const auto& x : xs) {
      std::string rd;
      if (pred && !pred->is_zero()) rd = dec(abs(x.value - *pred) / abs(*pred));
      o.csv.add({std::to_string(x.k), name, dec(x.value), dec_opt(pred), rd});
    }
  };
  BigReal one(1L, L.map.precision());
  emit("lambda_est", R.lambda_est, R.lambda_root);
  emit("c_over_b", R.c_over_b, one);
  emit("mu", R.mu, std::nullopt);
  emit("theta_est", R.theta_est, std::nullopt);
  emit("d_est", R.d_est, R.d_pred);
  emit("coef51", R.coef51, R.coef51_pred);
  emit("coef54", R.coef54, std::nullopt);
  emit("odd_b_coef", R.odd_b_coef, R.odd_b_pred);
  emit("odd_c_coef", R.odd_c_coef, R.odd_c_pred);
  emit("a_over_k0_b_beta", R.a_over_kb, one);

  json rep = {{"beta", dec(R.beta)},
              {"k0", dec(R.k0)},
              {"trusted", R.trusted},
              {"depth", R.depth},
              {"lambda_root", dec(R.lambda_root)},
              {"lambda_est", indexed_json(*this, R.lambda_est)},
              {"c_over_b", indexed_json(*this, R.c_over_b)},
              {"mu", indexed_json(*this, R.mu)},
              {"theta_est", indexed_json(*this, R.theta_est)},
              {"d_est", indexed_json(*this, R.d_est)},
              {"d_pred", dec(R.d_pred)},
              {"coef51", indexed_json(*this, R.coef51)},
              {"coef51_pred", dec(R.coef51_pred)},
              {"coef54", indexed_json(*this, R.coef54)},
              {"odd_b_coef", indexed_json(*this, R.odd_b_coef)},
              {"odd_b_pred", dec(R.odd_b_pred)},
              {"odd_c_coef", indexed_json(*this, R.odd_c_coef)},
              {"odd_c_pred", dec(R.odd_c_pred)},
              {"a_over_k0_b_beta", indexed_json(*this, R.a_over_kb)}};
  // Theta of the second renormalization should be twice Theta
  try {
    ScalingReport R2 = analyze_levels(shifted_levels(L, 2), R.beta, R.k0, L.max_trusted_level - 2);
    if (!R2.theta_est.empty() && !R.theta_est.empty())
      rep["shifted_theta_ratio"] = dec(R2.theta_est.back().value / R.theta_est.back().value);
  } catch (const InsufficientDataError&) {
  }
  json checks = json::array();
  for (const auto& r : rows) {
    checks.push_back({{"name", r.name},
                      {"k", r.k},
                      {"value", dec(r.value)},
                      {"predicted", dec(r.predicted)},
                      {"deviation", dec(r.deviation)},
                      {"trend_ok", r.trend_ok},
                      {"gated", r.gated},
                      {"pass", r.pass}});
    if (r.gated && !r.pass) o.gate_failed = true;
  }
  o.data["report"] = rep;
  o.data["checks"] = checks;
  return o;
}

Output Runner::renorm_limit() {
  RenormLadder& L = lad();
  const mpfr_prec_t P = L.map.precision();
  BigReal lambda = lambda_root(L.map.beta(), P);
  int trusted = L.max_trusted_level;
  Output o;
  o.format = fmt("json");
  o.csv.header = {"k", "s", "value"};
  json t5 = json::array(), lim = json::array();
  std::vector<std::pair<int, BigReal>> even_right;
  for (int k = 1; k <= trusted; ++k) {
    if (k % 2 == 0) {
      TheoremFiveCoeffs c = fit_theorem5(L, k);
      BigReal scale = pow_real(L.level(k).b, L.map.beta() - 1L);
      t5.push_back({{"k", k},
                    {"s_k", dec(c.left_slope)},
                    {"t_k", dec(c.right_coef)},
                    {"s_k_k0_b_pow", dec(c.left_slope * L.map.k0() * scale)},
                    {"t_k_b_pow", dec(c.right_coef * scale)},
                    {"fit_residual", dec(c.fit_residual)}});
    }
    RenormLimitReport r = renorm_limit_error(L, k, cfg_.grid_size, lambda);
    lim.push_back({{"k", k},
                   {"even", r.even},
                   {"c_hat", dec(r.c_hat)},
                   {"right_err", dec(r.right_err)},
                   {"right_deriv_err", dec(r.right_deriv_err)},
                   {"left_err", dec(r.left_err)},
                   {"left_deriv_err", dec(r.left_deriv_err)}});
    if (r.even && k >= 4) even_right.emplace_back(k, r.right_err);
    RescaledRenorm s = rescaled_renorm(L, k, cfg_.grid_size);
    for (std::size_t i = 0; i < s.s.size(); ++i) o.csv.add({std::to_string(k), dec(s.s[i]), dec(s.values[i])});
  }
  BigReal one(1L, P);
  BigReal at_m1 = odd_left_limit(lambda, L.map.beta(), -one), at_0 = odd_left_limit(lambda, L.map.beta(), BigReal(P));
  o.data["fit_theorem5"] = t5;
  o.data["limits"] = lim;
  o.data["odd_left_limit_endpoints"] = {{"at_minus_one", dec(at_m1)}, {"at_zero", dec(at_0)}};

  bool ok = !even_right.empty() && even_right.back().second <= 0.05;
  for (std::size_t i = 1; i < even_right.size(); ++i) ok = ok && even_right[i].second < even_right[i - 1].second;
  ok = ok && abs(at_m1 - 1L) <= 1e-20 && abs(at_0) <= 1e-20;
  o.data["gate_pass"] = ok;
  o.gate_failed = !ok;
  return o;
}

Output Runner::semiext() {
  RenormLadder& L = lad();
  const mpfr_prec_t P = L.map.precision();
  const int trusted = L.max_trusted_level;
  const BigReal& beta = L.map.beta();
  BigReal lambda = lambda_root(beta, P);
  BigReal target_exp = (beta + 1L) / 2L;
  Output o;
  o.format = fmt("csv");
  o.csv.header = {"k", "A_k", "B_k", "hatA_k", "hatB_k", "tau_k", "d_k", "e_k", "a_prime", "b_prime"};
  std::map<int, SemiExtensionRecord> recs;
  for (int k = 1; k <= trusted; ++k) recs.emplace(k, semi_extension(L, k));
  json jr = json::array(), tau = json::array(), t2 = json::array(), l4 = json::array(), sp = json::array();
  bool ok = true;
  std::optional<BigReal> prev_hat;
  for (const auto& [k, r] : recs) {
    o.csv.add({std::to_string(k), dec(r.A), dec(r.B), dec(r.hatA), dec(r.hatB), dec(r.tau), dec_opt(r.d), dec(r.e),
               dec(r.a_prime), dec(r.b_prime)});
    std::string word;
    for (auto l : r.word) word += static_cast<char>('0' + l);
    jr.push_back({{"k", k},
                  {"word", word},
                  {"T", {dec(r.T.lo), dec(r.T.hi)}},
                  {"A_k", dec(r.A)},
                  {"B_k", dec(r.B)},
                  {"hatA_k", dec(r.hatA)},
                  {"hatB_k", dec(r.hatB)},
                  {"tau_k", dec(r.tau)},
                  {"a_prime", dec(r.a_prime)},
                  {"b_prime", dec(r.b_prime)},
                  {"e_k", dec(r.e)},
                  {"d_k", jdec_opt(r.d)}});
    const auto& lv = L.level(k);
    json row = {{"k", k}, {"tau_k", dec(r.tau)}};
    if (k % 2 == 0) {
      BigReal lr = log(r.tau) / (-(log(lv.b) / 2L));
      row["log_ratio"] = dec(lr);
      if (k >= 8) ok = ok && lr >= 0.8 && lr <= 1.2;
    } else if (k >= 7) {
      ok = ok && abs(r.tau - lambda) <= lambda * 0.1;
    }
    tau.push_back(row);
    if (k % 2 == 0) {
      Theorem2Row t = theorem2_row(L, r);
      t2.push_back({{"k", k},
                    {"hatA_over_b", dec(t.hatA_over_b)},
                    {"exponent", dec(t.exponent)},
                    {"hatB_over_b", dec(t.hatB_over_b)}});
      if (k >= 6) {
        if (prev_hat) ok = ok && t.hatA_over_b < *prev_hat;
        prev_hat = t.hatA_over_b;
      }
      if (k >= 4) {
        BigReal eb = abs(r.B - L.level(k - 2).c_pow) / L.level(k - 2).b;
        BigReal ea = abs(r.hatA - L.level(k - 1).c_pow) / L.level(k - 1).b;
        l4.push_back({{"k", k}, {"B_vs_c", dec(eb)}, {"hatA_vs_c", dec(ea)}});
        ok = ok && eb <= 1e-6 && ea <= 1e-6;
      }
      if (L.has(k + 1)) {
        std::optional<SemiExtensionRecord> next;
        if (recs.count(k + 2)) next = recs.at(k + 2);
        SpecialPointRow s = special_point_row(L, r, next);
        sp.push_back({{"k", k},
                      {"e_next_below_d", next ? json(s.e_next_below_d) : json(nullptr)},
                      {"d_over_bound", dec(s.d_over_bound)},
                      {"d_over_sharp", dec(s.d_over_sharp)}});
      }
    }
  }
  if (!t2.empty()) {
    const auto& last = recs.at(trusted % 2 == 0 ? trusted : trusted - 1);
    Theorem2Row t = theorem2_row(L, last);
    ok = ok && t.hatA_over_b <= 0.1 && abs(t.exponent - target_exp) <= target_exp * 0.2;
  }

  json entry = json::array(), dl = json::array();
  std::optional<BigReal> prev_entry;
  BigReal eta(cfg_.eta, P);
  int deepest_i = trusted / 2;
  for (int i = 1; 2 * i <= trusted; ++i) {
    EntrySpaceReport e = entry_space_ratio(L, i);
    entry.push_back({{"i", i},
                     {"left_space_ratio", dec(e.left_space_ratio)},
                     {"c_over_bpow", dec(e.c_over_bpow)},
                     {"b_over_bsq", dec(e.b_over_bsq)},
                     {"below_one", e.below_one}});
    if (i >= 3) {
      if (prev_entry) ok = ok && e.left_space_ratio < *prev_entry;
      prev_entry = e.left_space_ratio;
    }
    if (i == deepest_i) ok = ok && e.left_space_ratio < 0.5;
    if (i >= 2) {
      BigReal f = doublelog_expansion(L, i, eta, cfg_.grid_size);
      dl.push_back({{"i", i}, {"min_factor", dec(f)}});
      if (i >= 3) ok = ok && f > 1L;
      if (i == deepest_i) ok = ok && f >= 1.2;
    }
  }
  o.data["records"] = jr;
  o.data["eps0"] = dec(L.map.eps0());
  o.data["tau"] = tau;
  o.data["check_theorem2"] = t2;
  o.data["cross_identities"] = l4;
  o.data["special_points"] = sp;
  o.data["entry_space"] = entry;
  o.data["doublelog"] = dl;
  o.data["gate_pass"] = ok;
  o.gate_failed = !ok;
  return o;
}

Output Runner::hausdorff() {
  RenormLadder& L = lad();
  int top = std::min(L.max_trusted_level, kDefaultCoverCap);
  std::vector<CoverLevel> covers;
  for (int k = 0; k <= top; ++k) covers.push_back(build_cover(L, k));
  std::vector<double> gammas;
  for (const auto& g : cfg_.gamma) {
    double v = BigReal(g, 64).to_double();
    if (!(v > 0)) throw ConfigError("hausdorff: gamma must be positive, got '" + g + "'");
    gammas.push_back(v);
  }
  HausdorffTable H = hausdorff_sums(covers, gammas);
  Output o;
  o.format = fmt("csv");
  o.csv.header = {"k", "i", "left", "right"};
  for (const auto& c : covers)
    for (std::size_t i = 0; i < c.intervals.size(); ++i)
      o.csv.add({std::to_string(c.k), std::to_string(i), dec(c.intervals[i].lo), dec(c.intervals[i].hi)});
  json rows = json::array(), k0 = json::array(), tot = json::array();
  for (std::size_t j = 0; j < H.rows.size(); ++j) {
    const auto& r = H.rows[j];
    rows.push_back({{"k", r.k},
                    {"gamma", cfg_.gamma[j / covers.size()]},
                    {"sum", dec(r.sum)},
                    {"two_step_decrease", r.two_step_decrease ? json(*r.two_step_decrease) : json(nullptr)}});
  }
  bool ok = true;
  for (std::size_t j = 0; j < H.k0.size(); ++j) {
    const auto& kk = H.k0[j].second;
    k0.push_back({{"gamma", cfg_.gamma[j]}, {"k0", kk ? json(*kk) : json(nullptr)}});
    ok = ok && kk.has_value();
  }
  for (const auto& c : covers) tot.push_back({{"k", c.k}, {"total_length", dec(c.total_length)}});
  int sd = std::min(top, 6);
  json samples = json::array();
  for (const auto& s : cantor_samples(L, sd, covers[static_cast<std::size_t>(sd)]))
    samples.push_back({{"x", dec(s.x)}, {"interval", s.interval}});
  o.data["sums"] = rows;
  o.data["k0"] = k0;
  o.data["total_length"] = tot;
  o.data["cantor_samples"] = {{"depth", sd}, {"points", samples}};
  o.data["gate_pass"] = ok;
  o.gate_failed = !ok;
  return o;
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Output Runner::bifurcation() {
  auto colon = cfg_.t_range.find(':');
  if (colon == std::string::npos) throw ConfigError("bifurcation: --t-range must look like lo:hi");
  double lo = BigReal(cfg_.t_range.substr(0, colon), 64).to_double();
  double hi = BigReal(cfg_.t_range.substr(colon + 1), 64).to_double();
  double beta = BigReal(cfg_.beta, 64).to_double();
  double sl = BigReal(cfg_.scale_left, 64).to_double(), sr = BigReal(cfg_.scale_right, 64).to_double();
  auto S = bifurcation_sweep(beta, sl, sr, lo, hi, cfg_.points, cfg_.transient, cfg_.samples, cfg_.jobs);
  meta_["config"] = cfg_;
  meta_["precision_bits"] = 53;
  Output o;
  o.format = fmt("csv");
  o.csv.header = {"t", "point"};
  json arr = json::array();
  for (const auto& s : S) {
    json pts = json::array();
    for (double x : s.attractor_points) {
      o.csv.add({fmt_double(s.t), fmt_double(x)});
      pts.push_back(fmt_double(x));
    }
    arr.push_back({{"t", fmt_double(s.t)},
                   {"detected_period", s.detected_period > 0 ? json(s.detected_period) : json("aperiodic")},
                   {"points", pts}});
  }
  o.data["samples"] = arr;
  return o;
}

Output Runner::invariants() {
  RunConfig cb = cfg_;
  if (!cfg_.b_beta.empty()) cb.beta = cfg_.b_beta;
  if (!cfg_.b_t.empty()) cb.t = cfg_.b_t;
  if (!cfg_.b_scale_left.empty()) cb.scale_left = cfg_.b_scale_left;
  if (!cfg_.b_scale_right.empty()) cb.scale_right = cfg_.b_scale_right;
  ScalingReport ra = analyze(lad());
  ResolvedRun rb = resolve(cb);
  RenormLadder lb = run_ladder(rb);
  ScalingReport rbr = analyze(lb);
  InvariantComparison c = compare_invariants(ra, rbr);
  meta_["second"] = rb.metadata(cfg_.digits);
  Output o;
  o.format = fmt("json");
  o.csv.header = {"quantity", "value"};
  std::vector<std::pair<std::string, std::string>> kv = {{"theta_a", dec(c.theta_a)},
                                                         {"theta_b", dec(c.theta_b)},
                                                         {"uncertainty", dec(c.uncertainty)},
                                                         {"rho", dec(c.rho)},
                                                         {"beta_match", c.beta_match ? "true" : "false"},
                                                         {"compatible", c.compatible ? "true" : "false"}};
  for (const auto& [k, v] : kv) o.csv.add({k, v});
  o.data = {{"theta_a", dec(c.theta_a)},
            {"theta_b", dec(c.theta_b)},
            {"uncertainty", dec(c.uncertainty)},
            {"rho", dec(c.rho)},
            {"beta_match", c.beta_match},
            {"compatible", c.compatible}};
  return o;
}

// --config is read before the flags so that flags override file values.
std::optional<std::string> find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  try {
    if (auto path = find_config_path(argc, argv)) cfg = json::parse(read_text(*path)).get<RunConfig>();
  } catch (const json::exception& e) {
    std::cerr << "asymlab: config: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "asymlab: " << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App app{"Numerical lab for strongly asymmetric unimodal maps"};
  app.require_subcommand(1, 1);
  std::string config_path;
  bool gate = false;
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  app.add_option("--beta", cfg.beta, "Critical order on the right (> 1)");
  app.add_option("--t", cfg.t, "Parameter value, or auto:N for the superstable parameter of level N");
  app.add_option("--scale-left", cfg.scale_left, "Left scale sL");
  app.add_option("--scale-right", cfg.scale_right, "Right scale sR");
  app.add_option("--precision-bits", cfg.precision_bits, "Working precision in bits, or auto");
  app.add_option("--max-level", cfg.max_level, "Deepest level K");
  app.add_option("--rel-tol", cfg.rel_tol, "Relative root tolerance, or auto");
  app.add_option("--grid-size", cfg.grid_size, "Grid size for sampled checks");
  app.add_option("--margin", cfg.margin, "Levels kept below the anchor before trusting");
  app.add_option("--out", cfg.out, "Output file (stdout if omitted)");
  app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--digits", cfg.digits, "Significant digits of decimal output");
  app.add_option("--jobs", cfg.jobs, "Worker threads");
  app.add_option("--eta", cfg.eta, "Double-log window factor in (0, 1)");
  app.add_option("--gamma", cfg.gamma, "Hausdorff exponents")->delimiter(',');
  app.add_option("--t-range", cfg.t_range, "Sweep range lo:hi");
  app.add_option("--points", cfg.points, "Sweep grid points");
  app.add_option("--transient", cfg.transient, "Sweep transient iterations");
  app.add_option("--samples", cfg.samples, "Sweep recorded iterates");
  app.add_option("--b-beta", cfg.b_beta, "invariants: beta of the second map");
  app.add_option("--b-t", cfg.b_t, "invariants: parameter of the second map");
  app.add_option("--b-scale-left", cfg.b_scale_left, "invariants: sL of the second map");
  app.add_option("--b-scale-right", cfg.b_scale_right, "invariants: sR of the second map");
  app.add_flag("--gate", gate, "Exit with status 2 when a check fails");

  using Fn = Output (Runner::*)();
  const std::vector<std::tuple<std::string, std::string, Fn>> subs = {
      {"cascade", "Superstable, flip and window-end parameters", &Runner::cascade},
      {"ladder", "Renormalization intervals", &Runner::ladder},
      {"scaling", "Scaling laws and their checks", &Runner::scaling},
      {"renorm-limit", "Renormalization limit shapes", &Runner::renorm_limit},
      {"semiext", "Semi-extensions, Koebe space and entry geometry", &Runner::semiext},
      {"hausdorff", "Cantor set covers and Hausdorff sums", &Runner::hausdorff},
      {"bifurcation", "Bifurcation diagram sweep (double precision)", &Runner::bifurcation},
      {"invariants", "Compare Theta of two configurations", &Runner::invariants}};
  for (const auto& [name, help, fn] : subs) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  cfg.jobs = std::max(1, cfg.jobs);

  try {
    Runner runner(cfg);
    Output out;
    for (const auto& [name, help, fn] : subs)
      if (app.got_subcommand(name)) out = (runner.*fn)();
    std::string text = out.format == "csv" ? render_csv(out.csv, runner.metadata())
                                           : render_json(runner.metadata(), out.data);
    write_text(cfg.out, text);
    if (gate && out.gate_failed) {
      std::cerr << "asymlab: gate failed\n";
      return kExitGate;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "asymlab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "asymlab: " << e.what() << "\n";
    return kExitError;
  }
}
