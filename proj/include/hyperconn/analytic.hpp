#pragma once

// Closed-form and implicitly defined quantities for connected r-uniform
// hypergraphs: the fixed point xi(dbar), the exponent F_r, the prefactor G_r,
// the universal connectivity formula and its dense/BCM specialisations, and
// the local-limit parameters of (L1, M1) in H^r(n, p).
//
// Everything here is a pure function of its arguments and is safe to call
// concurrently.

#include <cstdint>
#include <string_view>

namespace hyperconn::analytic {

/// Edge size r >= 2.
class Uniformity {
 public:
  explicit Uniformity(int r);
  [[nodiscard]] int value() const noexcept { return r_; }
  /// r/(r-1): the infimum of the average degree of a connected hypergraph.
  [[nodiscard]] double sparse_threshold() const noexcept { return double(r_) / double(r_ - 1); }

 private:
  int r_;
};

/// Solution of Phi_r(xi) = dbar.
///
/// `log_excess` is u = log(xi) + dbar, kept separately because in the dense
/// regime xi = e^{-dbar} e^{u} with u ~ dbar e^{-dbar}; u carries the
/// information that a plain double xi cannot resolve.
struct FixedPoint {
  int r = 2;
  double dbar = 0.0;
  double xi = 0.0;
  double rho = 1.0;  // 1 - xi, computed without cancellation
  double log_xi = 0.0;
  double log_excess = 0.0;
};

/// Extinction probability of the branching process B_{r,d}.
struct BranchingPoint {
  int r = 2;
  double d = 0.0;
  double xi = 1.0;
  double log_xi = 0.0;
  double d_star = 0.0;  // d * xi^{r-1}
};

/// A positive number written as e^{exponent} * (1 + excess).
///
/// Used where the interesting information is a relative correction far below
/// one ulp of the value itself.
struct ExpScaled {
  double exponent = 0.0;
  double excess = 0.0;
  [[nodiscard]] double value() const;
};

enum class Regime { Sparse, Middle, Dense, VeryDense };
std::string_view to_string(Regime regime);

struct LogEstimate {
  double log_value = 0.0;
  Regime regime = Regime::Middle;
  double dbar = 0.0;
  struct Components {
    double log_G = 0.0;
    double minus_sF = 0.0;
    double prefactor = 0.0;  // log binom(N, m) or the Stirling-form prefactor
  } components;
  bool not_asymptotic = false;    // dbar within 1e-6 of r/(r-1); G replaced by its limit
  bool g_shortcut = false;        // dense regime with |G - 1| < 1e-12, log G taken as 0
  bool capped = false;            // raw log P > 0 was capped at 0
  bool validity_warning = false;  // Stirling form used with m > s^{4/3}/10
};

enum class CountForm { ExactBinomial, Stirling };
enum class FForm { Auto, Xi, Rho };

struct GTerms {
  double a = 0.0;
  double b = 0.0;
  double g = 0.0;
  double value = 0.0;
};

struct LltParameters {
  double mu_L = 0.0;
  double mu_M = 0.0;
  double sigma_L2 = 0.0;
  double sigma_M2 = 0.0;
  double xi = 0.0;
};

// --- fixed points -----------------------------------------------------------

/// Phi_r(xi) = log(1/xi)(1 - xi^r) / ((1 - xi^{r-1})(1 - xi)), 0 < xi < 1.
double phi(Uniformity r, double xi);
/// Phi_r evaluated at xi = e^{t}, t < 0. Stable for t -> 0 and t -> -inf.
double phi_of_log(Uniformity r, double log_xi);

/// xi = Phi_r^{-1}(dbar) for dbar > r/(r-1).
FixedPoint solve_xi_from_dbar(Uniformity r, double dbar);

/// Smallest root of xi = exp(-d(1 - xi^{r-1})) in (0, 1]; exactly 1 when (r-1)d <= 1.
BranchingPoint solve_xi_from_d(Uniformity r, double d);

/// d = log(1/xi) / (1 - xi^{r-1}); maps an enumerative fixed point to the
/// branching parameter with the same xi.
double d_from_xi(Uniformity r, double xi);

// --- exponent and prefactor ------------------------------------------------

double F(Uniformity r, double dbar);
double F(const FixedPoint& fp, FForm form = FForm::Auto);
/// F as e^{-dbar}(1 + excess); accurate excess whenever xi is small.
ExpScaled F_scaled(Uniformity r, double dbar);
/// xi as e^{-dbar}(1 + excess).
ExpScaled xi_scaled(const FixedPoint& fp);

GTerms G_terms(Uniformity r, double dbar);
GTerms G_terms(const FixedPoint& fp, FForm form = FForm::Auto);
double G(Uniformity r, double dbar);
/// lim G_r(dbar) as dbar -> r/(r-1): e^{r/2 + [r=2]} sqrt(3(r-1)/2).
double G_sparse_limit(Uniformity r);

// --- two-term expansions as dbar -> infinity ---------------------------------

double xi_expansion(Uniformity r, double dbar);
double F_expansion(Uniformity r, double dbar);
ExpScaled xi_expansion_scaled(Uniformity r, double dbar);
ExpScaled F_expansion_scaled(Uniformity r, double dbar);

// --- connectivity probability and counts --------------------------------------

LogEstimate log_P_universal(Uniformity r, std::int64_t s, std::int64_t m);
/// log exp(-s F_r(dbar)), the dense-range formula without prefactor.
double log_P_dense(Uniformity r, std::int64_t s, std::int64_t m);
LogEstimate log_C_asymptotic(Uniformity r, std::int64_t s, std::int64_t m, CountForm form);

/// binom(s, r) as a double (exact below 2^53).
double choose(std::int64_t s, int r);
/// log binom(N, k) for real N >= k >= 0, accurate for N >> k.
double log_choose(double N, double k);

// --- Bender-Canfield-McKay form, r = 2 -------------------------------------

/// Root y in (0,1) of 2xy = log((1+y)/(1-y)), x > 1.
double bcm_y(double x);
/// 1 - y(x) without cancellation.
double bcm_one_minus_y(double x);
/// a(x) = x(x+1)(1-y) + log(1-x+xy) - 1/2 log(1-x+xy^2).
double bcm_a(double x);
/// log(2 e^{-x} y^{1-x} / sqrt(1-y^2)).
double bcm_log_base(double x);
/// a(m/s) + s * bcm_log_base(m/s).
double bcm_log_P(std::int64_t s, std::int64_t m);

// --- H^r(n, p) parameters ----------------------------------------------------

/// ((1-xi)n, d(1-xi^r)n/r, n e^{-d}, dn/r); d must be supercritical.
LltParameters llt_parameters(Uniformity r, std::int64_t n, double d);

}  // namespace hyperconn::analytic
