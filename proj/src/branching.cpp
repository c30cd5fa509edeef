#include "hyperconn/branching.hpp"

#include <cmath>
#include <string>

#include "hyperconn/analytic.hpp"
#include "hyperconn/errors.hpp"

namespace hyperconn::branching {

namespace {

void check_law(int r, double d) {
  if (r < 2) throw DomainError("uniformity r must be >= 2");
  if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("branching parameter d must be > 0");
}

}  // namespace

OffspringLaw::OffspringLaw(int r_, double d_) : r(r_), d(d_) { check_law(r_, d_); }

double log_pi_k(int r, double d, std::int64_t k) {
  check_law(r, d);
  if (k < 0) throw DomainError("k must be >= 0");
  if (k == 0) return -d;
  const double s = 1.0 + double(r - 1) * double(k);
  const double kd = double(k);
  return (kd - 1.0) * std::log(s) + kd * std::log(d) - std::lgamma(kd + 1.0) - d * s;
}

double pi_k(int r, double d, std::int64_t k) { return std::exp(log_pi_k(r, d, k)); }

double decay_threshold(int r) {
  if (r < 2) throw DomainError("uniformity r must be >= 2");
  // log(e r d e^{-(r-1)d/2}) peaks at d = 2/(r-1) and decreases afterwards.
  auto h = [r](double d) { return 1.0 + std::log(double(r)) + std::log(d) - 0.5 * (r - 1) * d; };
  double lo = 2.0 / (r - 1), hi = lo;
  while (h(hi) > 0.0) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 0.0 ? lo : hi) = mid;
  }
  return hi;
}

double pi_tail_bound(int r, double d, std::int64_t k_from) {
  check_law(r, d);
  if (k_from < 0) throw DomainError("k_from must be >= 0");
  const double d0 = decay_threshold(r);
  if (d < d0)
    throw NotApplicable("decay bound needs d >= d0(" + std::to_string(r) + ") = " + std::to_string(d0));
  // e^{-d(s+1)/2} = e^{-d} q^k with q = e^{-(r-1)d/2}
  const double log_q = -0.5 * (r - 1) * d;
  return std::exp(-d + double(k_from) * log_q) / -std::expm1(log_q);
}

PointMassTable point_masses(int r, double d, std::int64_t k_max) {
  check_law(r, d);
  if (k_max < 0) throw DomainError("k_max must be >= 0");
  PointMassTable t;
  t.r = r;
  t.d = d;
  t.k_max = k_max;
  t.logpi.reserve(static_cast<std::size_t>(k_max) + 1);
  for (std::int64_t k = 0; k <= k_max; ++k) t.logpi.push_back(log_pi_k(r, d, k));
  if (d >= decay_threshold(r)) t.tail_bound = pi_tail_bound(r, d, k_max + 1);
  return t;
}

ExtinctionCheck extinction_check(int r, double d, std::int64_t k_max) {
  check_law(r, d);
  if (k_max < 0) throw DomainError("k_max must be >= 0");
  ExtinctionCheck out;
  // Terms rise then fall; summing in increasing k keeps rounding at a few ulp.
  double sum = 0.0, comp = 0.0;
  for (std::int64_t k = 0; k <= k_max; ++k) {
    const double y = pi_k(r, d, k) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  out.sum_pi = sum;
  out.xi = analytic::solve_xi_from_d(analytic::Uniformity(r), d).xi;
  if (d >= decay_threshold(r)) out.tail_bound = pi_tail_bound(r, d, k_max + 1);
  return out;
}

double negative_moment(int r, double d) {
  if (r < 2) throw DomainError("uniformity r must be >= 2");
  if (!(d >= 0.0) || !((r - 1) * d < 1.0)) throw DomainError("negative moment formula needs 0 <= (r-1)d < 1");
  return 1.0 - (r - 1) * d / r;
}

double negative_moment_series(int r, double d, std::int64_t k_max) {
  if (d == 0.0) return 1.0;
  double sum = 0.0, comp = 0.0;
  for (std::int64_t k = 0; k <= k_max; ++k) {
    const double s = 1.0 + double(r - 1) * double(k);
    const double y = pi_k(r, d, k) / s - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

BigCount tree_count(int r, std::int64_t k) {
  if (r < 2) throw DomainError("uniformity r must be >= 2");
  if (k < 0) throw DomainError("k must be >= 0");
  if (k == 0) return 1;
  const auto s = static_cast<unsigned long>(1 + (r - 1) * k);
  BigCount num, den, tmp;
  mpz_ui_pow_ui(num.get_mpz_t(), s, static_cast<unsigned long>(k - 1));
  mpz_fac_ui(tmp.get_mpz_t(), s - 1);
  num *= tmp;
  mpz_fac_ui(den.get_mpz_t(), static_cast<unsigned long>(k));
  mpz_fac_ui(tmp.get_mpz_t(), static_cast<unsigned long>(r - 1));
  mpz_pow_ui(tmp.get_mpz_t(), tmp.get_mpz_t(), static_cast<unsigned long>(k));
  den *= tmp;
  BigCount out;
  mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return out;
}

BpOutcome simulate_bp(int r, double d, rng::Engine& eng, std::int64_t edge_cap) {
  check_law(r, d);
  if (edge_cap < 1) throw DomainError("edge_cap must be >= 1");
  std::int64_t unexplored = 1;
  std::int64_t edges = 0;
  while (unexplored > 0) {
    const auto groups = static_cast<std::int64_t>(rng::poisson(eng, d));
    edges += groups;
    if (edges > edge_cap) return {true, 0};
    unexplored += groups * (r - 1) - 1;
  }
  return {false, edges};
}

}  // namespace hyperconn::branching
