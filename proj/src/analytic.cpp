#include "hyperconn/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "hyperconn/errors.hpp"

namespace hyperconn::analytic {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Below this xi the dense representation xi = e^{-dbar} e^{u} is used.
constexpr double kDenseXi = 0.05;

double ipow(double x, int k) {
  double result = 1.0;
  for (int i = 0; i < k; ++i) result *= x;
  return result;
}

// S_k(x) = 1 + x + ... + x^{k-1} = (1 - x^k)/(1 - x).
double geom_sum(double x, int k) {
  double sum = 0.0;
  for (int i = k - 1; i >= 0; --i) sum = sum * x + 1.0;
  return sum;
}

// w(x) = x / (1 - e^{-x}) - 1 - x/2, the even part of the Bernoulli generating function.
double bernoulli_even(double x) {
  if (std::abs(x) < 0.25) {
    const double x2 = x * x;
    // B_{2n} / (2n)! for n = 1..6
    constexpr double c[] = {1.0 / 12.0,           -1.0 / 720.0,         1.0 / 30240.0,
                            -1.0 / 1209600.0,     1.0 / 47900160.0,     -691.0 / 1307674368000.0};
    double sum = 0.0;
    for (int i = 5; i >= 0; --i) sum = sum * x2 + c[i];
    return sum * x2;
  }
  return x / (-std::expm1(-x)) - 1.0 - 0.5 * x;
}

// d log Phi_r / dt at t = log xi.
double dlogphi_dt(int r, double t) {
  return (bernoulli_even(r * t) - bernoulli_even((r - 1) * t) - bernoulli_even(t)) / t;
}

// mu(rho) = (-log(1-rho) - rho) / rho^2 = sum_{k>=2} rho^{k-2}/k
double mu_of(double rho) {
  if (rho < 0.5) {
    double sum = 0.0, pw = 1.0;
    for (int k = 2; k < 80; ++k) {
      const double term = pw / k;
      sum += term;
      if (term < 1e-18 * sum) break;
      pw *= rho;
    }
    return sum;
  }
  return (-std::log1p(-rho) - rho) / (rho * rho);
}

// nu(rho) = (mu(rho) - 1/2) / rho = sum_{k>=3} rho^{k-3}/k
double nu_of(double rho) {
  if (rho < 0.5) {
    double sum = 0.0, pw = 1.0;
    for (int k = 3; k < 80; ++k) {
      const double term = pw / k;
      sum += term;
      if (term < 1e-18 * sum) break;
      pw *= rho;
    }
    return sum;
  }
  return (mu_of(rho) - 0.5) / rho;
}

// Small dense polynomials in xi with exactly representable coefficients.
using Poly = std::vector<double>;

Poly poly_geom(int k) { return Poly(static_cast<std::size_t>(std::max(k, 0)), 1.0); }

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly poly_axpy(double alpha, const Poly& x, const Poly& y) {
  Poly out(std::max(x.size(), y.size()), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += alpha * x[i];
  for (std::size_t i = 0; i < y.size(); ++i) out[i] += y[i];
  return out;
}

Poly poly_shift(const Poly& p) {
  Poly out(p.size() + 1, 0.0);
  std::copy(p.begin(), p.end(), out.begin() + 1);
  return out;
}

// p(x) / (1 - x); p(1) must vanish.
Poly poly_div_one_minus(const Poly& p) {
  const std::size_t n = p.size();
  if (n < 2) return {};
  Poly q(n - 1, 0.0);
  // p = (x - 1) * q' ; q = -q'
  double carry = 0.0;
  for (std::size_t k = n - 1; k >= 1; --k) {
    carry = p[k] + carry;
    q[k - 1] = carry;
  }
  if (std::abs(p[0] + carry) > 1e-9) throw NumericError("polynomial does not vanish at 1");
  for (double& c : q) c = -c;
  return q;
}

double poly_eval(const Poly& p, double x) {
  double sum = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) sum = sum * x + *it;
  return sum;
}

// The rho-form of b_r (r >= 3) is rho^4 S_r (R1(xi) + nu xi D(xi)) / S_{r-1}.
struct BPolys {
  Poly D;
  Poly R1;
};

BPolys b_polys(int r) {
  const Poly Sr = poly_geom(r), Sr1 = poly_geom(r - 1), Sr2 = poly_geom(r - 2);
  // D = (r-1) S_{r-2} S_r - r S_{r-1}^2
  const Poly D = poly_axpy(double(r - 1), poly_mul(Sr2, Sr), poly_axpy(-double(r), poly_mul(Sr1, Sr1), {}));
  const Poly P = poly_axpy(1.0, poly_mul(Sr, Sr1), poly_shift(D));
  const Poly Q = poly_div_one_minus(P);
  const Poly R = poly_axpy(0.5, poly_shift(D), Q);
  return {D, poly_div_one_minus(R)};
}

double check_dbar(Uniformity r, double dbar) {
  if (!std::isfinite(dbar) || !(dbar > r.sparse_threshold()))
    throw DomainError("average degree " + std::to_string(dbar) + " must exceed r/(r-1) = " +
                      std::to_string(r.sparse_threshold()));
  return dbar;
}

// One step of the exact identity u = dbar (xi S_{r-1} + xi^{r-1}) / S_r, with
// xi = e^{-dbar} e^{u}. Contracts with factor ~ dbar * xi.
double excess_map(int r, double dbar, double exp_minus_dbar, double u) {
  const double xi = exp_minus_dbar * std::exp(u);
  return dbar * (xi * geom_sum(xi, r - 1) + ipow(xi, r - 1)) / geom_sum(xi, r);
}

double polish_excess(int r, double dbar, double u) {
  const double emd = std::exp(-dbar);
  for (int iter = 0; iter < 100; ++iter) {
    const double next = excess_map(r, dbar, emd, u);
    const double delta = std::abs(next - u);
    u = next;
    if (delta == 0.0 || (iter >= 2 && delta <= 2.0 * kEps * std::abs(u))) return u;
  }
  throw ConvergenceError("log-excess iteration did not converge at dbar=" + std::to_string(dbar));
}

FixedPoint make_fixed_point(int r, double dbar, double t, double u, bool dense) {
  FixedPoint fp;
  fp.r = r;
  fp.dbar = dbar;
  fp.log_xi = t;
  fp.log_excess = u;
  fp.xi = dense ? std::exp(-dbar) * std::exp(u) : std::exp(t);
  fp.rho = -std::expm1(t);
  return fp;
}

Regime classify(Uniformity r, double dbar, double xi, std::int64_t s) {
  const double log_s = std::log(double(s));
  if (dbar - log_s >= 10.0) return Regime::VeryDense;
  if (s > 1 && dbar >= 2.0 * std::log(log_s) + 10.0) return Regime::Dense;
  (void)r;
  if (xi > 0.9) return Regime::Sparse;
  return Regime::Middle;
}

// N = binom(s, r) fits and m <= N, with saturating 128-bit arithmetic.
bool within_universe(std::int64_t s, int r, std::int64_t m) {
  unsigned __int128 n = 1;
  const unsigned __int128 cap = static_cast<unsigned __int128>(1) << 100;
  for (int i = 0; i < r; ++i) {
    n = n * static_cast<unsigned __int128>(s - i) / static_cast<unsigned __int128>(i + 1);
    if (n > cap) return true;
  }
  return static_cast<unsigned __int128>(m) <= n;
}

void check_sm(Uniformity r, std::int64_t s, std::int64_t m) {
  const int rv = r.value();
  if (s < rv) throw DomainError("need s >= r");
  if (m < 0 || !within_universe(s, rv, m)) throw DomainError("m must lie in [0, binom(s, r)]");
  if (!(static_cast<long double>(m) * (rv - 1) > static_cast<long double>(s)))
    throw DomainError("m must exceed s/(r-1)");
}

}  // namespace

Uniformity::Uniformity(int r) : r_(r) {
  if (r < 2) throw DomainError("uniformity r must be >= 2, got " + std::to_string(r));
}

double ExpScaled::value() const { return std::exp(exponent) * (1.0 + excess); }

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Sparse: return "sparse";
    case Regime::Middle: return "middle";
    case Regime::Dense: return "dense";
    case Regime::VeryDense: return "very-dense";
  }
  return "?";
}

double phi_of_log(Uniformity r, double t) {
  if (!(t < 0.0) || !std::isfinite(t)) throw DomainError("log xi must be negative and finite");
  const int rv = r.value();
  // Phi = (t / expm1(t)) * (expm1(rt) / expm1((r-1)t)); each ratio is O(1).
  return (t / std::expm1(t)) * (std::expm1(rv * t) / std::expm1((rv - 1) * t));
}

double phi(Uniformity r, double xi) {
  if (!(xi > 0.0 && xi < 1.0)) throw DomainError("phi requires 0 < xi < 1");
  return phi_of_log(r, std::log(xi));
}

FixedPoint solve_xi_from_dbar(Uniformity r, double dbar) {
  check_dbar(r, dbar);
  const int rv = r.value();

  if (dbar > 30.0) {
    // xi = e^{-dbar} + c dbar e^{-2dbar} + ..., c = 2 for r = 2, else 1.
    const double c = rv == 2 ? 2.0 : 1.0;
    double u = std::log1p(c * dbar * std::exp(-dbar));
    u = polish_excess(rv, dbar, u);
    return make_fixed_point(rv, dbar, u - dbar, u, true);
  }

  const double target = std::log(dbar);
  auto g = [&](double t) { return std::log(phi_of_log(r, t)) - target; };

  // g is decreasing in t; Phi(t) >= -t gives g(lo) > 0.
  double lo = -(dbar + 1.0);
  double hi = -1e-300;
  if (g(hi) >= 0.0) return make_fixed_point(rv, dbar, hi, hi + dbar, false);

  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }

  double t = 0.5 * (lo + hi);
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    const double gv = g(t);
    (gv > 0.0 ? lo : hi) = t;
    if (std::abs(gv) <= 4.0 * kEps) {
      converged = true;
      break;
    }
    double next = t - gv / dlogphi_dt(rv, t);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - t);
    t = next;
    if (step <= 1e-14 * std::abs(t) || hi - lo <= 1e-15 * std::abs(t)) {
      converged = true;
      break;
    }
  }
  if (!converged) throw ConvergenceError("xi solver did not converge at dbar=" + std::to_string(dbar));

  if (std::exp(t) < kDenseXi) {
    const double u = polish_excess(rv, dbar, t + dbar);
    return make_fixed_point(rv, dbar, u - dbar, u, true);
  }
  return make_fixed_point(rv, dbar, t, t + dbar, false);
}

BranchingPoint solve_xi_from_d(Uniformity r, double d) {
  if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("branching parameter d must be > 0");
  const int rv = r.value();
  BranchingPoint bp;
  bp.r = rv;
  bp.d = d;
  const double lambda = (rv - 1) * d;
  if (lambda <= 1.0) {
    bp.xi = 1.0;
    bp.log_xi = 0.0;
    bp.d_star = d;
    return bp;
  }

  // t = log xi solves h(t) = t - d expm1((r-1) t) = 0 with h(lo) < 0 < h(hi).
  auto h = [&](double t) { return t - d * std::expm1((rv - 1) * t); };
  double lo = -(d + 1.0);
  double hi = -std::min(1.0, (lambda - 1.0) / (d * (rv - 1) * (rv - 1)));
  for (int i = 0; i < 2000 && !(h(hi) > 0.0); ++i) hi *= 0.5;
  if (!(h(hi) > 0.0)) throw ConvergenceError("could not bracket extinction probability");

  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  double t = 0.5 * (lo + hi);
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    const double hv = h(t);
    (hv < 0.0 ? lo : hi) = t;
    if (hv == 0.0) {
      converged = true;
      break;
    }
    double next = t - hv / (1.0 - d * (rv - 1) * std::exp((rv - 1) * t));
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - t);
    t = next;
    if (step <= 1e-15 * std::abs(t) || hi - lo <= 2e-16 * std::abs(t)) {
      converged = true;
      break;
    }
  }
  if (!converged) throw ConvergenceError("extinction solver did not converge at d=" + std::to_string(d));

  // In the dense regime refine u = t + d = d xi^{r-1} directly.
  if (std::exp(t) < kDenseXi) {
    const double emd = std::exp(-d);
    double u = t + d;
    for (int iter = 0; iter < 100; ++iter) {
      const double next = d * ipow(emd * std::exp(u), rv - 1);
      const double delta = std::abs(next - u);
      u = next;
      if (delta <= 1e-17 * std::abs(u) || delta == 0.0) break;
    }
    bp.xi = emd * std::exp(u);
    bp.log_xi = u - d;
  } else {
    bp.xi = std::exp(t);
    bp.log_xi = t;
  }
  bp.d_star = d * ipow(bp.xi, rv - 1);
  return bp;
}

double d_from_xi(Uniformity r, double xi) {
  if (!(xi > 0.0 && xi < 1.0)) throw DomainError("d_from_xi requires 0 < xi < 1");
  const double t = std::log(xi);
  return t / std::expm1((r.value() - 1) * t);
}

// --- F ------------------------------------------------------------------------

namespace {

// Series sums for the dense form, valid for small xi.
// m(xi) = (-log(1-xi) - xi)/xi,  l(xi) = (log(1-xi) + xi/(1-xi))/xi
void dense_series(double xi, double& m, double& l) {
  m = 0.0;
  l = 0.0;
  double pw = xi;
  for (int k = 2; k < 200; ++k) {
    const double a = pw / k;
    m += a;
    l += a * (k - 1);
    if (a < 1e-19 * m || pw == 0.0) break;
    pw *= xi;
  }
}

double F_xi_form(const FixedPoint& fp) {
  const int r = fp.r;
  const double xi = fp.xi, d = fp.dbar;
  return d * std::log1p(-xi) - d / r * std::log1p(-ipow(xi, r)) - xi / fp.rho * fp.log_xi - std::log1p(-xi);
}

double F_rho_form(const FixedPoint& fp) {
  const int r = fp.r;
  const double xi = fp.xi, d = fp.dbar, rho = fp.rho;
  return -d / r * std::log(geom_sum(xi, r)) + (d * (r - 1) / r - 1.0) * std::log(rho) - xi / rho * fp.log_xi;
}

ExpScaled F_dense(const FixedPoint& fp) {
  const int r = fp.r;
  const double xi = fp.xi, d = fp.dbar, u = fp.log_excess;
  double m = 0.0, l = 0.0;
  dense_series(xi, m, l);
  const double z = ipow(xi, r);
  const double log_ratio = z == 0.0 ? -1.0 : std::log1p(-z) / z;  // log(1-z)/z
  const double R = m + d * l - d / r * ipow(xi, r - 1) * log_ratio - u / fp.rho;
  return {-d, std::expm1(u) + std::exp(u) * R};
}

}  // namespace

double F(const FixedPoint& fp, FForm form) {
  switch (form) {
    case FForm::Xi: return F_xi_form(fp);
    case FForm::Rho: return F_rho_form(fp);
    case FForm::Auto: break;
  }
  if (fp.xi < kDenseXi) return F_dense(fp).value();
  if (fp.xi <= 0.5) return F_xi_form(fp);
  return F_rho_form(fp);
}

double F(Uniformity r, double dbar) { return F(solve_xi_from_dbar(r, dbar)); }

ExpScaled F_scaled(Uniformity r, double dbar) {
  const FixedPoint fp = solve_xi_from_dbar(r, dbar);
  if (fp.xi < kDenseXi) return F_dense(fp);
  return {-dbar, F(fp) * std::exp(dbar) - 1.0};
}

ExpScaled xi_scaled(const FixedPoint& fp) { return {-fp.dbar, std::expm1(fp.log_excess)}; }

// --- G ------------------------------------------------------------------------

double G_sparse_limit(Uniformity r) {
  const int rv = r.value();
  return std::exp(rv / 2.0 + (rv == 2 ? 1.0 : 0.0)) * std::sqrt(3.0 * (rv - 1) / 2.0);
}

GTerms G_terms(const FixedPoint& fp, FForm form) {
  const int r = fp.r;
  const double xi = fp.xi, rho = fp.rho, d = fp.dbar;
  const bool rho_form = form == FForm::Rho || (form == FForm::Auto && xi > 0.5);
  GTerms out;
  if (r == 2) {
    out.g = (2.0 * d * xi + d * d * xi) / (2.0 * (1.0 + xi));
    if (rho_form) {
      out.a = (1.0 + xi) * rho * (1.0 - xi * mu_of(rho));
      out.b = (1.0 + xi) * rho * rho * (1.0 - 2.0 * xi * nu_of(rho));
    } else {
      out.a = 1.0 + xi - d * xi;
      out.b = (1.0 + xi) * (1.0 + xi) - 2.0 * d * xi;
    }
  } else {
    const double Sr = geom_sum(xi, r), Sr1 = geom_sum(xi, r - 1);
    const double xr1 = ipow(xi, r - 1);
    out.g = (r - 1) * d * (xi * Sr1 + xr1) / (2.0 * Sr);
    if (rho_form) {
      // T(xi) = sum_{k=0}^{r-2} (k+1) xi^k
      double T = 0.0;
      for (int k = r - 2; k >= 0; --k) T = T * xi + (k + 1);
      out.a = rho * rho * Sr * (T - (r - 1) * xr1 * mu_of(rho)) / Sr1;
      const BPolys bp = b_polys(r);
      const double inner = poly_eval(bp.R1, xi) + nu_of(rho) * xi * poly_eval(bp.D, xi);
      out.b = rho * rho * rho * rho * Sr * inner / Sr1;
    } else {
      const double xr = xr1 * xi;
      out.a = 1.0 - xr - rho * (r - 1) * d * xr1;
      const double one_minus_xr1 = -std::expm1((r - 1) * fp.log_xi);
      out.b = (1.0 - xr + d * (r - 1) * (xi - xr1)) * (1.0 - xr) - r * d * xi * one_minus_xr1 * one_minus_xr1;
    }
  }
  if (!(out.b > 0.0))
    throw NumericError("b_r(dbar) <= 0 at dbar=" + std::to_string(d) + "; outside the formula's validity");
  out.value = out.a / std::sqrt(out.b) * std::exp(out.g);
  return out;
}

GTerms G_terms(Uniformity r, double dbar) { return G_terms(solve_xi_from_dbar(r, dbar)); }

double G(Uniformity r, double dbar) { return G_terms(r, dbar).value; }

// --- expansions ---------------------------------------------------------------

namespace {
void check_expansion_domain(double dbar) {
  if (!(dbar >= 5.0) || !std::isfinite(dbar)) throw DomainError("expansions require dbar >= 5");
}
double xi_coef(Uniformity r, double dbar) { return (r.value() == 2 ? 2.0 : 1.0) * dbar; }
double F_coef(Uniformity r, double dbar) { return r.value() == 2 ? dbar + 0.5 : 0.5 * (dbar + 1.0); }
}  // namespace

double xi_expansion(Uniformity r, double dbar) {
  check_expansion_domain(dbar);
  return std::exp(-dbar) + xi_coef(r, dbar) * std::exp(-2.0 * dbar);
}

double F_expansion(Uniformity r, double dbar) {
  check_expansion_domain(dbar);
  return std::exp(-dbar) + F_coef(r, dbar) * std::exp(-2.0 * dbar);
}

ExpScaled xi_expansion_scaled(Uniformity r, double dbar) {
  check_expansion_domain(dbar);
  return {-dbar, xi_coef(r, dbar) * std::exp(-dbar)};
}

ExpScaled F_expansion_scaled(Uniformity r, double dbar) {
  check_expansion_domain(dbar);
  return {-dbar, F_coef(r, dbar) * std::exp(-dbar)};
}

// --- probabilities and counts ----------------------------------------------------

double choose(std::int64_t s, int r) {
  if (s < r || r < 0) return 0.0;
  double n = 1.0;
  for (int i = 0; i < r; ++i) n = n * double(s - i) / double(i + 1);
  return n < 9e15 ? std::round(n) : n;
}

double log_choose(double N, double k) {
  if (!(k >= 0.0) || !(N >= k)) throw DomainError("log_choose requires 0 <= k <= N");
  if (k == 0.0 || k == N) return 0.0;
  const double K = N - k;
  if (K >= 1e4 && N > 1e6) {
    // Stirling difference for log(N!/K!): exact to O(K^{-7}).
    auto corr = [](double x) { return 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x * x) + 1.0 / (1260.0 * std::pow(x, 5)); };
    const double log_falling = k * std::log(N) - (K + 0.5) * std::log1p(-k / N) - k + corr(N) - corr(K);
    return log_falling - std::lgamma(k + 1.0);
  }
  return std::lgamma(N + 1.0) - std::lgamma(k + 1.0) - std::lgamma(K + 1.0);
}

LogEstimate log_P_universal(Uniformity r, std::int64_t s, std::int64_t m) {
  check_sm(r, s, m);
  const int rv = r.value();
  const double dbar = double(rv) * double(m) / double(s);
  LogEstimate est;
  est.dbar = dbar;

  if (dbar <= r.sparse_threshold() + 1e-6) {
    est.not_asymptotic = true;
    est.regime = Regime::Sparse;
    est.components.log_G = std::log(G_sparse_limit(r));
    est.components.minus_sF = -double(s) * F(r, dbar);
  } else {
    const FixedPoint fp = solve_xi_from_dbar(r, dbar);
    est.regime = classify(r, dbar, fp.xi, s);
    const GTerms gt = G_terms(fp);
    est.components.log_G = std::log(gt.value);
    est.components.minus_sF = -double(s) * F(fp);
    if ((est.regime == Regime::Dense || est.regime == Regime::VeryDense) && std::abs(gt.value - 1.0) < 1e-12) {
      est.g_shortcut = true;
      est.components.log_G = 0.0;
    }
  }
  const double raw = est.components.log_G + est.components.minus_sF;
  est.capped = raw > 0.0;
  est.log_value = std::min(raw, 0.0);
  return est;
}

double log_P_dense(Uniformity r, std::int64_t s, std::int64_t m) {
  check_sm(r, s, m);
  const double dbar = double(r.value()) * double(m) / double(s);
  return -double(s) * F(r, dbar);
}

LogEstimate log_C_asymptotic(Uniformity r, std::int64_t s, std::int64_t m, CountForm form) {
  const int rv = r.value();
  if (form == CountForm::ExactBinomial) {
    LogEstimate est = log_P_universal(r, s, m);
    est.components.prefactor = log_choose(choose(s, rv), double(m));
    est.log_value += est.components.prefactor;
    return est;
  }
  check_sm(r, s, m);
  const double s43 = std::pow(double(s), 4.0 / 3.0);
  if (double(m) > s43) throw DomainError("Stirling count form requires m <= s^{4/3}");
  LogEstimate est;
  const double dbar = double(rv) * double(m) / double(s);
  est.dbar = dbar;
  est.validity_warning = double(m) > s43 / 10.0;
  const FixedPoint fp = solve_xi_from_dbar(r, dbar);
  est.regime = classify(r, dbar, fp.xi, s);
  est.components.prefactor = double(rv) * double(m) * std::log(double(s)) - std::lgamma(double(m) + 1.0) -
                             double(m) * std::lgamma(rv + 1.0) - (rv - 1) * dbar / 2.0 -
                             (rv == 2 ? dbar * dbar / 4.0 : 0.0);
  est.components.minus_sF = -double(s) * F(fp);
  est.log_value = est.components.prefactor + est.components.minus_sF;
  return est;
}

// --- LLT parameters -----------------------------------------------------------

LltParameters llt_parameters(Uniformity r, std::int64_t n, double d) {
  const int rv = r.value();
  if (n < 1) throw DomainError("n must be >= 1");
  if (!((rv - 1) * d > 1.0)) throw DomainError("llt_parameters requires supercritical d > 1/(r-1)");
  const BranchingPoint bp = solve_xi_from_d(r, d);
  LltParameters p;
  p.xi = bp.xi;
  const double nn = double(n);
  p.mu_L = -std::expm1(bp.log_xi) * nn;
  p.mu_M = d * (-std::expm1(rv * bp.log_xi)) * nn / rv;
  p.sigma_L2 = nn * std::exp(-d);
  p.sigma_M2 = d * nn / rv;
  return p;
}

}  // namespace hyperconn::analytic
