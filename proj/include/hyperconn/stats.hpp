#pragma once

// Statistical checks of Monte Carlo batches against analytic predictions.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hyperconn/enumeration.hpp"
#include "hyperconn/simulation.hpp"

namespace hyperconn::stats {

/// Product Gaussian with independent coordinates.
struct GaussianSpec {
  double mu_X = 0.0, mu_Y = 0.0;
  double sigma_X2 = 1.0, sigma_Y2 = 1.0;

  GaussianSpec() = default;
  GaussianSpec(double mu_x, double mu_y, double var_x, double var_y);
  [[nodiscard]] double density(double x, double y) const;
};

/// P(lo <= N(mu, var) <= hi), accurate in both tails.
double normal_interval_mass(double mu, double var, double lo, double hi);

/// Gaussian mass of the integers in bin i of `axis`, each integer x standing
/// for [x - 1/2, x + 1/2).
double lattice_bin_mass(const simulation::BinAxis& axis, std::int64_t i, double mu, double var);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int cells = 0;
};

/// Pearson statistic over the given cells; dof = cells - 1 - fitted_parameters.
ChiSquare chi_square(const std::vector<double>& observed, const std::vector<double>& expected,
                     int fitted_parameters = 0);
/// Upper tail of chi-square with dof degrees of freedom.
double chi_square_sf(double statistic, int dof);

struct Check {
  std::string name;
  double observed = 0.0;
  double predicted = 0.0;
  double band = 0.0;     // allowed |observed - predicted|, or a bound (see kind)
  std::string kind;      // "abs", "range", "max", "min", "pvalue", "info", "flag"
  double band_hi = 0.0;  // upper end for "range"
  bool pass = true;
  std::string note;
};

struct CheckReport {
  std::string title;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<Check> checks;

  [[nodiscard]] bool passed() const;
  void add_abs(std::string name, double observed, double predicted, double band, std::string note = {});
  void add_range(std::string name, double observed, double lo, double hi, std::string note = {});
  void add_max(std::string name, double observed, double bound, std::string note = {});
  void add_pvalue(std::string name, double statistic, double p_value, double alpha, std::string note = {});
  void add_info(std::string name, double observed, double predicted = 0.0, std::string note = {});
  void add_flag(std::string name, bool ok, std::string note = {});
  void meta(std::string key, std::string value);
};

std::string render_human(const CheckReport& report);
std::string render_json(const CheckReport& report);

/// Minimum trial count accepted by llt_check and tree_census_check.
inline constexpr std::int64_t kMinTrials = 10'000;

/// (a) means within 4 SE, (b) variance ratios in [0.85, 1.15], (c) binned
/// chi-square against the product Gaussian at significance 0.001, (d) the
/// correlation of L1 with the centred M1 residual (informational).
CheckReport llt_check(const simulation::TrialBatch& batch);

/// E[T_k] = n pi_k / s for k = 0..k_max, plus the rarity of mid-size and
/// non-tree small components.
CheckReport tree_census_check(const simulation::TrialBatch& batch, int k_max = 4);

enum class Prediction { Universal, Dense, Exact };

struct ConnectivityParams {
  int r = 3;
  std::int64_t s = 0;
  std::int64_t m = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  int threads = 0;
  Prediction prediction = Prediction::Universal;
  const enumeration::CountTable* table = nullptr;  // required for Exact
};

/// Throws NotApplicable when the predicted probability lies outside [0.01, 0.99].
CheckReport connectivity_check(const ConnectivityParams& params);

/// r = 2 only. Delta(s) = |exact - universal| must decrease along s, and the
/// universal and BCM formulas must agree to 1e-9.
CheckReport exact_vs_asymptotic_sweep(const enumeration::CountTable& table, const std::vector<std::int64_t>& s_list,
                                      double dbar);

}  // namespace hyperconn::stats
