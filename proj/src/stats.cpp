#include "hyperconn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "json.hpp"

#include "hyperconn/analytic.hpp"
#include "hyperconn/branching.hpp"
#include "hyperconn/errors.hpp"
#include "hyperconn/version.hpp"

namespace hyperconn::stats {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fmt_int(std::int64_t x) { return std::to_string(x); }

void require_trials(std::int64_t trials) {
  if (trials < kMinTrials)
    throw InsufficientData("need at least " + std::to_string(kMinTrials) + " trials, got " + std::to_string(trials));
}

void batch_metadata(CheckReport& report, const simulation::TrialBatch& batch) {
  const auto& p = batch.params;
  report.meta("tool_version", std::string(kVersion));
  report.meta("rng", std::string(rng::kAlgorithmId));
  report.meta("model", std::string(simulation::to_string(p.model)));
  report.meta("r", fmt_int(p.r));
  report.meta(p.model == simulation::Model::Gnp ? "n" : "s", fmt_int(p.n));
  if (p.model == simulation::Model::Gnp)
    report.meta("d", fmt(p.d));
  else
    report.meta("m", fmt_int(p.m));
  report.meta("trials", fmt_int(p.trials));
  report.meta("seed", std::to_string(p.master_seed));
}

}  // namespace

GaussianSpec::GaussianSpec(double mu_x, double mu_y, double var_x, double var_y)
    : mu_X(mu_x), mu_Y(mu_y), sigma_X2(var_x), sigma_Y2(var_y) {
  if (!(var_x > 0.0) || !(var_y > 0.0)) throw DomainError("Gaussian variances must be positive");
}

double GaussianSpec::density(double x, double y) const {
  const double zx = (x - mu_X) * (x - mu_X) / sigma_X2;
  const double zy = (y - mu_Y) * (y - mu_Y) / sigma_Y2;
  return std::exp(-0.5 * (zx + zy)) / (2.0 * std::numbers::pi * std::sqrt(sigma_X2 * sigma_Y2));
}

double normal_interval_mass(double mu, double var, double lo, double hi) {
  if (!(var > 0.0)) throw DomainError("variance must be positive");
  if (!(hi > lo)) return 0.0;
  const double scale = 1.0 / std::sqrt(2.0 * var);
  const double a = (lo - mu) * scale, b = (hi - mu) * scale;
  if (a >= 0.0) return 0.5 * (std::erfc(a) - std::erfc(b));
  if (b <= 0.0) return 0.5 * (std::erfc(-b) - std::erfc(-a));
  return 0.5 * (std::erf(b) - std::erf(a));
}

double lattice_bin_mass(const simulation::BinAxis& axis, std::int64_t i, double mu, double var) {
  const std::int64_t first = axis.lower(i);
  const std::int64_t last = axis.lower(i + 1) - 1;
  if (last < first) return 0.0;
  return normal_interval_mass(mu, var, double(first) - 0.5, double(last) + 0.5);
}

double chi_square_sf(double statistic, int dof) {
  if (dof < 1) throw DomainError("chi-square needs at least one degree of freedom");
  if (!(statistic >= 0.0)) throw DomainError("chi-square statistic must be >= 0");
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

ChiSquare chi_square(const std::vector<double>& observed, const std::vector<double>& expected,
                     int fitted_parameters) {
  if (observed.size() != expected.size()) throw DomainError("observed and expected differ in length");
  ChiSquare out;
  out.cells = static_cast<int>(observed.size());
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0.0)) throw DomainError("expected counts must be positive");
    const double diff = observed[i] - expected[i];
    out.statistic += diff * diff / expected[i];
  }
  out.dof = out.cells - 1 - fitted_parameters;
  out.p_value = chi_square_sf(out.statistic, out.dof);
  return out;
}

// --- reports ---------------------------------------------------------------------

bool CheckReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void CheckReport::add_abs(std::string name, double observed, double predicted, double band, std::string note) {
  checks.push_back({std::move(name), observed, predicted, band, "abs", 0.0,
                    std::abs(observed - predicted) <= band, std::move(note)});
}

void CheckReport::add_range(std::string name, double observed, double lo, double hi, std::string note) {
  checks.push_back({std::move(name), observed, 0.0, lo, "range", hi, observed >= lo && observed <= hi, std::move(note)});
}

void CheckReport::add_max(std::string name, double observed, double bound, std::string note) {
  checks.push_back({std::move(name), observed, 0.0, bound, "max", 0.0, observed < bound, std::move(note)});
}

void CheckReport::add_pvalue(std::string name, double statistic, double p_value, double alpha, std::string note) {
  checks.push_back({std::move(name), statistic, p_value, alpha, "pvalue", 0.0, p_value >= alpha, std::move(note)});
}

void CheckReport::add_info(std::string name, double observed, double predicted, std::string note) {
  checks.push_back({std::move(name), observed, predicted, 0.0, "info", 0.0, true, std::move(note)});
}

void CheckReport::add_flag(std::string name, bool ok, std::string note) {
  checks.push_back({std::move(name), ok ? 1.0 : 0.0, 1.0, 0.0, "flag", 0.0, ok, std::move(note)});
}

void CheckReport::meta(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }

std::string render_human(const CheckReport& report) {
  std::ostringstream out;
  out << report.title << '\n';
  for (const auto& [k, v] : report.metadata) out << "  " << k << " = " << v << '\n';
  for (const auto& c : report.checks) {
    out << "  [" << (c.kind == "info" ? "INFO" : c.pass ? "PASS" : "FAIL") << "] " << c.name << ": ";
    if (c.kind == "abs")
      out << "observed " << fmt(c.observed) << ", predicted " << fmt(c.predicted) << ", |diff| "
          << fmt(std::abs(c.observed - c.predicted)) << " <= " << fmt(c.band);
    else if (c.kind == "range")
      out << fmt(c.observed) << " in [" << fmt(c.band) << ", " << fmt(c.band_hi) << "]";
    else if (c.kind == "max")
      out << fmt(c.observed) << " < " << fmt(c.band);
    else if (c.kind == "pvalue")
      out << "statistic " << fmt(c.observed) << ", p " << fmt(c.predicted) << " >= " << fmt(c.band);
    else if (c.kind == "flag")
      out << (c.pass ? "holds" : "violated");
    else
      out << fmt(c.observed) << (c.predicted != 0.0 ? " (reference " + fmt(c.predicted) + ")" : "");
    if (!c.note.empty()) out << "  -- " << c.note;
    out << '\n';
  }
  out << "  overall: " << (report.passed() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

std::string render_json(const CheckReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["title"] = report.title;
  ordered_json meta = ordered_json::object();
  for (const auto& [k, v] : report.metadata) meta[k] = v;
  j["metadata"] = meta;
  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks) {
    ordered_json row;
    row["name"] = c.name;
    row["kind"] = c.kind;
    row["observed"] = c.observed;
    row["predicted"] = c.predicted;
    row["band"] = c.band;
    if (c.kind == "range") row["band_hi"] = c.band_hi;
    row["pass"] = c.pass;
    if (!c.note.empty()) row["note"] = c.note;
    checks.push_back(row);
  }
  j["checks"] = checks;
  j["passed"] = report.passed();
  return j.dump(2);
}

// --- checks ----------------------------------------------------------------------

CheckReport llt_check(const simulation::TrialBatch& batch) {
  require_trials(batch.params.trials);
  if (!batch.llt) throw NotApplicable("LLT check needs a supercritical H^r(n, p) batch");
  const auto& l = *batch.llt;
  const auto& mo = batch.moments;
  const auto& p = batch.params;
  const double T = double(p.trials);

  CheckReport rep;
  rep.title = "llt_check";
  batch_metadata(rep, batch);

  const double se_L = std::sqrt(mo.var_L / T), se_M = std::sqrt(mo.var_M / T);
  rep.add_abs("mean_L1", mo.mean_L, l.mu_L, 4.0 * se_L, "4 SE");
  rep.add_abs("mean_M1", mo.mean_M, l.mu_M, 4.0 * se_M, "4 SE");
  rep.add_range("var_L1_ratio", mo.var_L / l.sigma_L2, 0.85, 1.15, "Var L1 / (n e^-d)");
  rep.add_range("var_M1_ratio", mo.var_M / l.sigma_M2, 0.85, 1.15, "Var M1 / (dn/r)");

  // Chi-square over lattice-aligned bins spanning +-8 sigma, plus one pooled cell.
  const double sL = std::sqrt(l.sigma_L2), sM = std::sqrt(l.sigma_M2);
  const auto iL0 = batch.axis_L.index(std::int64_t(std::floor(l.mu_L - 8.0 * sL)));
  const auto iL1 = batch.axis_L.index(std::int64_t(std::ceil(l.mu_L + 8.0 * sL)));
  const auto iM0 = batch.axis_M.index(std::int64_t(std::floor(l.mu_M - 8.0 * sM)));
  const auto iM1 = batch.axis_M.index(std::int64_t(std::ceil(l.mu_M + 8.0 * sM)));
  std::vector<double> mass_L, mass_M;
  for (auto i = iL0; i <= iL1; ++i) mass_L.push_back(lattice_bin_mass(batch.axis_L, i, l.mu_L, l.sigma_L2));
  for (auto j = iM0; j <= iM1; ++j) mass_M.push_back(lattice_bin_mass(batch.axis_M, j, l.mu_M, l.sigma_M2));
  std::vector<double> obs, expct;
  double obs_in = 0.0, exp_in = 0.0;
  for (auto i = iL0; i <= iL1; ++i)
    for (auto j = iM0; j <= iM1; ++j) {
      const double e = T * mass_L[i - iL0] * mass_M[j - iM0];
      if (e < 10.0) continue;
      const auto it = batch.joint_bins.find({i, j});
      const double o = it == batch.joint_bins.end() ? 0.0 : double(it->second);
      obs.push_back(o);
      expct.push_back(e);
      obs_in += o;
      exp_in += e;
    }
  const double obs_rest = T - obs_in, exp_rest = T - exp_in;
  if (exp_rest >= 10.0) {
    obs.push_back(obs_rest);
    expct.push_back(exp_rest);
  }
  if (obs.size() < 2) throw InsufficientData("too few bins with expected count >= 10");
  const ChiSquare chi = chi_square(obs, expct);
  rep.add_pvalue("chi_square_joint", chi.statistic, chi.p_value, 1e-3,
                 std::to_string(chi.cells) + " cells, dof " + std::to_string(chi.dof));
  rep.add_info("chi_square_pooled_cell", obs_rest, exp_rest, "observed vs expected outside the tested bins");

  const double c = l.mu_M / l.mu_L;
  const double var_Y = mo.var_M - 2.0 * c * mo.cov_LM + c * c * mo.var_L;
  rep.add_info("corr_L1_residual_M1", (mo.cov_LM - c * mo.var_L) / std::sqrt(mo.var_L * var_Y), 0.0,
               "corr(L1, M1 - L1 mu_M/mu_L)");
  rep.add_info("corr_L1_M1", mo.cov_LM / std::sqrt(mo.var_L * mo.var_M));
  rep.add_info("mean_M1_offset_over_d", (mo.mean_M - l.mu_M) / p.d, 0.0, "the mean of M1 is only claimed to O(d)");
  return rep;
}

CheckReport tree_census_check(const simulation::TrialBatch& batch, int k_max) {
  require_trials(batch.params.trials);
  const auto& p = batch.params;
  if (p.model != simulation::Model::Gnp) throw NotApplicable("tree census is defined for H^r(n, p) batches");
  const double T = double(p.trials), n = double(p.n), d = p.d;
  const int r = p.r;

  CheckReport rep;
  rep.title = "tree_census_check";
  batch_metadata(rep, batch);

  const int top = std::min(k_max, p.k_cap);
  for (int k = 0; k <= top; ++k) {
    const double s = 1.0 + double(r - 1) * k;
    const double predicted = n * branching::pi_k(r, d, k) / s;
    // Rare trees are often never observed; T_k is close to Poisson, so floor the variance at its mean.
    const double se = std::sqrt(std::max(batch.tree_var[k], predicted) / T);
    const double band = std::max(4.0 * se, 2.0 * predicted * d * d * s * s / n);
    rep.add_abs("mean_T" + std::to_string(k), batch.tree_mean[k], predicted, band, "max(4 SE, 2 E d^2 s^2 / n)");
  }

  const auto s0 = static_cast<std::int64_t>(std::ceil(1000.0 * std::log(n) / d));
  std::int64_t mid = 0, non_tree = 0;
  for (const auto& t : batch.trials) {
    mid += t.second_largest > s0 && 2 * t.second_largest <= p.n;
    non_tree += t.non_tree_small > 0;
  }
  rep.add_max("freq_mid_size_component", double(mid) / T, 0.01, "non-giant component with size in (s0, n/2], s0 = " +
                                                                    std::to_string(s0));
  rep.add_max("freq_non_tree_small_component", double(non_tree) / T, 0.05);
  return rep;
}

CheckReport connectivity_check(const ConnectivityParams& params) {
  const analytic::Uniformity r(params.r);
  double log_pred = 0.0;
  std::string formula;
  switch (params.prediction) {
    case Prediction::Universal:
      log_pred = analytic::log_P_universal(r, params.s, params.m).log_value;
      formula = "universal";
      break;
    case Prediction::Dense:
      log_pred = analytic::log_P_dense(r, params.s, params.m);
      formula = "dense";
      break;
    case Prediction::Exact:
      if (!params.table) throw DomainError("exact prediction needs a count table");
      log_pred = enumeration::exact_log_P(*params.table, params.s, params.m);
      formula = "exact";
      break;
  }
  const double P = std::exp(log_pred);
  if (!(P >= 0.01 && P <= 0.99))
    throw NotApplicable("predicted P = " + fmt(P) +
                        " is outside [0.01, 0.99]; Monte Carlo cannot separate formulas there. Choose m with "
                        "s e^{-dbar} between about 0.01 and 4.6");

  simulation::BatchParams bp;
  bp.model = simulation::Model::Gsm;
  bp.r = params.r;
  bp.n = params.s;
  bp.m = params.m;
  bp.trials = params.trials;
  bp.master_seed = params.seed;
  bp.k_cap = 0;
  bp.threads = params.threads;
  const auto batch = simulation::run_batch(bp);

  std::int64_t connected = 0;
  for (const auto& t : batch.trials) connected += t.L1 == params.s;
  const double freq = double(connected) / double(params.trials);
  const double se = std::sqrt(P * (1.0 - P) / double(params.trials));
  const bool exact = params.prediction == Prediction::Exact;
  const double band = exact ? 4.0 * se : std::max(4.0 * se, 0.1 * P);

  CheckReport rep;
  rep.title = "connectivity_check";
  batch_metadata(rep, batch);
  rep.meta("prediction", formula);
  rep.meta("dbar", fmt(double(params.r) * double(params.m) / double(params.s)));
  rep.add_abs("connected_frequency", freq, P, band, exact ? "4 SE" : "max(4 SE, 10% of P)");
  return rep;
}

CheckReport exact_vs_asymptotic_sweep(const enumeration::CountTable& table, const std::vector<std::int64_t>& s_list,
                                      double dbar) {
  if (table.r() != 2) throw DomainError("the sweep compares against the r = 2 BCM formula");
  if (s_list.empty()) throw DomainError("empty s list");
  const analytic::Uniformity r(2);

  CheckReport rep;
  rep.title = "exact_vs_asymptotic_sweep";
  rep.meta("tool_version", std::string(kVersion));
  rep.meta("r", "2");
  rep.meta("dbar", fmt(dbar));

  std::vector<double> deltas;
  for (const auto s : s_list) {
    if (s > table.s_max()) throw BudgetExceeded("s = " + std::to_string(s) + " is beyond the count table");
    const auto m = static_cast<std::int64_t>(std::llround(dbar * double(s) / 2.0));
    const double exact = enumeration::exact_log_P(table, s, m);
    if (!std::isfinite(exact)) throw DomainError("exact P is zero at s = " + std::to_string(s));
    const analytic::LogEstimate est = analytic::log_P_universal(r, s, m);
    const double universal = est.log_value;
    const double uncapped = est.components.log_G + est.components.minus_sF;
    const double bcm = analytic::bcm_log_P(s, m);
    const std::string tag = "(s=" + std::to_string(s) + ",m=" + std::to_string(m) + ")";
    deltas.push_back(std::abs(exact - universal));
    rep.add_info("delta_universal" + tag, deltas.back(), exact, "|exact - universal|; reference is exact log P");
    rep.add_info("delta_bcm" + tag, std::abs(exact - bcm));
    rep.add_abs("universal_vs_bcm" + tag, uncapped, bcm, 1e-9, est.capped ? "universal estimate capped at 0" : "");
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < deltas.size(); ++i) decreasing = decreasing && deltas[i] < deltas[i - 1];
  rep.add_flag("delta_strictly_decreasing", decreasing);
  return rep;
}

}  // namespace hyperconn::stats
