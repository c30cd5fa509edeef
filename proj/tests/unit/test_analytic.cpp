#include <cmath>
#include <vector>

#include "doctest.h"
#include "hyperconn/analytic.hpp"
#include "hyperconn/errors.hpp"
#include "oracle/oracle.hpp"

using namespace hyperconn;
using namespace hyperconn::analytic;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("uniformity rejects r < 2") {
  CHECK_THROWS_AS(Uniformity(1), DomainError);
  CHECK(Uniformity(2).sparse_threshold() == doctest::Approx(2.0));
}

TEST_CASE("phi tends to r/(r-1) as xi -> 1") {
  for (int r : {2, 3}) {
    double prev = 0.0;
    for (double rho : {1e-2, 1e-4, 1e-6, 1e-9}) {
      const double v = phi(Uniformity(r), 1.0 - rho);
      if (prev != 0.0) CHECK(std::abs(v - double(r) / (r - 1)) < std::abs(prev - double(r) / (r - 1)));
      prev = v;
    }
    CHECK(prev == doctest::Approx(double(r) / (r - 1)).epsilon(1e-8));
  }
}

TEST_CASE("phi at small xi matches the 50-digit oracle") {
  const double v = phi(Uniformity(3), 1e-6);
  CHECK(rel(v, oracle::phi(3, oracle::hp(1e-6)).convert_to<double>()) < 1e-14);
  CHECK(v == doctest::Approx(13.815524).epsilon(1e-7));
}

TEST_CASE("phi is strictly decreasing") {
  for (int r = 2; r <= 5; ++r) {
    double prev = INFINITY;
    for (int i = 1; i < 2000; ++i) {
      const double v = phi(Uniformity(r), i / 2000.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("phi rejects xi outside (0,1)") {
  CHECK_THROWS_AS(phi(Uniformity(3), 0.0), DomainError);
  CHECK_THROWS_AS(phi(Uniformity(3), 1.0), DomainError);
}

TEST_CASE("fixed point inverts phi") {
  for (int r : {2, 3, 4}) {
    for (double d : {1.6, 2.0, 5.0, 10.0, 40.0}) {
      if (d <= double(r) / (r - 1)) continue;
      const FixedPoint fp = solve_xi_from_dbar(Uniformity(r), d);
      CHECK(rel(phi_of_log(Uniformity(r), fp.log_xi), d) < 1e-12);
      CHECK(fp.rho == doctest::Approx(1.0 - fp.xi));
      CHECK(fp.xi > 0.0);
      CHECK(fp.xi < 1.0);
    }
  }
}

TEST_CASE("fixed point round trip over the full range") {
  for (int r = 2; r <= 5; ++r) {
    const double lo = double(r) / (r - 1) + 1e-6;
    for (double d : log_grid(lo, 700.0, 120)) {
      const FixedPoint fp = solve_xi_from_dbar(Uniformity(r), d);
      CHECK(std::abs(phi_of_log(Uniformity(r), fp.log_xi) - d) <= 1e-10 * d);
    }
  }
  const FixedPoint far = solve_xi_from_dbar(Uniformity(3), 1e4);
  CHECK(far.log_xi == doctest::Approx(-1e4).epsilon(1e-12));
}

TEST_CASE("fixed point matches the 50-digit oracle") {
  for (int r : {2, 3, 5}) {
    for (double d : {double(r) / (r - 1) + 0.01, 3.0, 7.5, 15.0}) {
      const double xi = solve_xi_from_dbar(Uniformity(r), d).xi;
      CHECK(rel(xi, oracle::xi_from_dbar(r, oracle::hp(d)).convert_to<double>()) < 1e-12);
    }
  }
}

TEST_CASE("fixed point near the sparse boundary") {
  const FixedPoint fp = solve_xi_from_dbar(Uniformity(3), 1.5 + 1e-12);
  CHECK(fp.xi > 1.0 - 1e-3);
  CHECK(fp.xi < 1.0);
  CHECK_THROWS_AS(solve_xi_from_dbar(Uniformity(3), 1.5), DomainError);
  CHECK_THROWS_AS(solve_xi_from_dbar(Uniformity(3), 1.4), DomainError);
  CHECK_THROWS_AS(solve_xi_from_dbar(Uniformity(2), NAN), DomainError);
}

TEST_CASE("xi at dbar = 20 follows the two-term expansion") {
  const double d = 20.0;
  const FixedPoint fp = solve_xi_from_dbar(Uniformity(3), d);
  // compare xi e^{d} - 1 with d e^{-d}; tolerance 3 d^2 e^{-2d} after scaling
  const double excess = xi_scaled(fp).excess;
  CHECK(std::abs(excess - d * std::exp(-d)) <= 3.0 * d * d * std::exp(-2.0 * d));
}

TEST_CASE("expansion coefficients differ between r = 2 and r >= 3") {
  const double d = 30.0;
  const double second2 = xi_expansion_scaled(Uniformity(2), d).excess;
  const double second3 = xi_expansion_scaled(Uniformity(3), d).excess;
  CHECK(second2 == doctest::Approx(2.0 * second3));
  CHECK(xi_expansion(Uniformity(3), d) == doctest::Approx(std::exp(-d) + d * std::exp(-2 * d)));
  CHECK(F_expansion(Uniformity(2), d) == doctest::Approx(std::exp(-d) + (d + 0.5) * std::exp(-2 * d)));
  CHECK_THROWS_AS(xi_expansion(Uniformity(3), 4.0), DomainError);
}

TEST_CASE("F at dbar = 30 follows the two-term expansion for r = 3, 4") {
  for (int r : {3, 4}) {
    const double d = 30.0;
    const double tol = 5.0 * d * d * std::exp(-2.0 * d);  // scaled by e^{d}
    CHECK(std::abs(F_scaled(Uniformity(r), d).excess - F_expansion_scaled(Uniformity(r), d).excess) <= tol);
    const FixedPoint fp = solve_xi_from_dbar(Uniformity(r), d);
    CHECK(std::abs(xi_scaled(fp).excess - xi_expansion_scaled(Uniformity(r), d).excess) <= tol);
  }
}

TEST_CASE("F at dbar = 25") {
  const double d = 25.0;
  const double tol = 3.0 * d * d * std::exp(-2.0 * d);
  CHECK(std::abs(F_scaled(Uniformity(3), d).excess - 13.0 * std::exp(-d)) <= tol);
  CHECK(std::abs(F_scaled(Uniformity(2), d).excess - 25.5 * std::exp(-d)) <= 5.0 * d * d * std::exp(-2.0 * d));
}

TEST_CASE("F matches the 50-digit oracle") {
  for (int r : {2, 3, 4}) {
    for (double d : {double(r) / (r - 1) + 0.05, 2.0, 4.0, 9.0}) {
      if (d <= double(r) / (r - 1)) continue;
      const double f = F(Uniformity(r), d);
      CHECK(f > 0.0);
      CHECK(rel(f, oracle::F(r, oracle::hp(d)).convert_to<double>()) < 1e-12);
    }
  }
  CHECK(F(Uniformity(3), 2.0) == doctest::Approx(0.18581028343998965).epsilon(1e-14));
}

TEST_CASE("xi-form and rho-form of F agree on the overlap band") {
  for (int r = 2; r <= 5; ++r) {
    for (double xi = 0.25; xi <= 0.75; xi += 0.01) {
      const double d = phi(Uniformity(r), xi);
      const FixedPoint fp = solve_xi_from_dbar(Uniformity(r), d);
      CHECK(rel(F(fp, FForm::Xi), F(fp, FForm::Rho)) < 1e-12);
      CHECK(rel(G_terms(fp, FForm::Xi).value, G_terms(fp, FForm::Rho).value) < 1e-12);
    }
  }
}

TEST_CASE("F stays accurate at the sparse boundary") {
  // F tends to 1 - log(r)/(r-1) there.
  for (int r : {2, 3, 4}) {
    const double f = F(Uniformity(r), double(r) / (r - 1) + 1e-9);
    CHECK(f == doctest::Approx(1.0 - std::log(double(r)) / (r - 1)).epsilon(1e-6));
  }
}

TEST_CASE("G matches the 50-digit oracle") {
  for (int r : {2, 3, 4}) {
    for (double d : {double(r) / (r - 1) + 0.1, 2.5, 6.0, 12.0}) {
      CHECK(rel(G(Uniformity(r), d), oracle::G(r, oracle::hp(d)).convert_to<double>()) < 1e-11);
    }
  }
}

TEST_CASE("G tends to its sparse limit") {
  const double lim3 = std::exp(1.5) * std::sqrt(3.0);
  const double lim2 = std::exp(2.0) * std::sqrt(1.5);
  CHECK(G_sparse_limit(Uniformity(3)) == doctest::Approx(lim3).epsilon(1e-15));
  CHECK(G_sparse_limit(Uniformity(2)) == doctest::Approx(lim2).epsilon(1e-15));
  // the approach is slow, roughly like sqrt(eps)
  double prev3 = INFINITY, prev2 = INFINITY;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-8, 1e-10}) {
    const double g3 = std::abs(G(Uniformity(3), 1.5 + eps) - lim3);
    const double g2 = std::abs(G(Uniformity(2), 2.0 + eps) - lim2);
    CHECK(g3 < prev3);
    CHECK(g2 < prev2);
    prev3 = g3;
    prev2 = g2;
  }
  CHECK(prev3 < 1e-3 * lim3);
  CHECK(prev2 < 1e-3 * lim2);
}

TEST_CASE("G tends to 1 in the dense range") {
  for (int r : {2, 3, 4}) {
    CHECK(std::abs(G(Uniformity(r), 20.0) - 1.0) < 1e-6);
    CHECK(std::abs(G(Uniformity(r), 40.0) - 1.0) < 1e-12);
  }
}

TEST_CASE("G terms are positive") {
  for (int r = 2; r <= 5; ++r)
    for (double d : log_grid(double(r) / (r - 1) + 1e-6, 200.0, 60)) {
      const GTerms t = G_terms(Uniformity(r), d);
      CHECK(t.b > 0.0);
      CHECK(t.value > 0.0);
    }
}

TEST_CASE("branching fixed point") {
  const BranchingPoint sub = solve_xi_from_d(Uniformity(3), 0.4);
  CHECK(sub.xi == 1.0);
  CHECK(sub.d_star == doctest::Approx(0.4));

  const BranchingPoint bp = solve_xi_from_d(Uniformity(2), 2.0);
  CHECK(rel(bp.xi, oracle::xi_from_d(2, oracle::hp(2)).convert_to<double>()) < 1e-12);
  CHECK(bp.xi == doctest::Approx(0.203188).epsilon(1e-6));
  CHECK(bp.d_star == doctest::Approx(2.0 * bp.xi));

  const BranchingPoint big = solve_xi_from_d(Uniformity(3), 15.0);
  CHECK(big.xi > std::exp(-15.0));
  CHECK(big.xi < 2.0 * std::exp(-15.0));
  CHECK(rel(big.xi, std::exp(-15.0 * (1.0 - big.xi * big.xi))) < 1e-14);

  CHECK_THROWS_AS(solve_xi_from_d(Uniformity(3), 0.0), DomainError);
  CHECK_THROWS_AS(solve_xi_from_d(Uniformity(3), -1.0), DomainError);
}

TEST_CASE("branching fixed point near criticality") {
  for (int r : {2, 3}) {
    const double dc = 1.0 / (r - 1);
    for (double eps : {1e-2, 1e-4, 1e-6}) {
      const BranchingPoint bp = solve_xi_from_d(Uniformity(r), dc * (1.0 + eps));
      CHECK(bp.xi < 1.0);
      // near criticality 1 - xi is about 2 eps / (r - 1)
      CHECK(1.0 - bp.xi == doctest::Approx(2.0 * eps / (r - 1)).epsilon(0.05));
      const double resid = bp.xi - std::exp(-bp.d * (1.0 - std::pow(bp.xi, r - 1)));
      CHECK(std::abs(resid) < 1e-14);
    }
  }
}

TEST_CASE("the two parametrisations of xi agree") {
  for (int r : {2, 3, 4}) {
    for (double dbar : log_grid(double(r) / (r - 1) + 1e-3, 50.0, 40)) {
      const FixedPoint fp = solve_xi_from_dbar(Uniformity(r), dbar);
      const double d = d_from_xi(Uniformity(r), fp.xi);
      CHECK(rel(solve_xi_from_d(Uniformity(r), d).xi, fp.xi) < 1e-10);
    }
  }
}

TEST_CASE("universal formula in the very dense range") {
  const std::int64_t s = 1'000'000;
  const double target = std::log(double(s)) + 5.0;
  const auto m = static_cast<std::int64_t>(std::llround(target * double(s) / 3.0));
  const LogEstimate est = log_P_universal(Uniformity(3), s, m);
  const double dbar = 3.0 * double(m) / double(s);
  CHECK(est.log_value == doctest::Approx(-double(s) * std::exp(-dbar)).epsilon(1e-4));
  CHECK(est.log_value == doctest::Approx(-std::exp(-5.0)).epsilon(1e-3));

  const std::int64_t s9 = 1'000'000'000;
  const auto m9 = static_cast<std::int64_t>(std::llround(2.0 * std::log(double(s9)) * double(s9) / 3.0));
  const LogEstimate vd = log_P_universal(Uniformity(3), s9, m9);
  CHECK(vd.regime == Regime::VeryDense);
  CHECK(std::abs(vd.log_value) < 1e-6);
}

TEST_CASE("universal formula never exceeds probability one") {
  for (int r : {2, 3, 4})
    for (std::int64_t s : {10, 40, 300, 5000, 100000})
      for (double dbar : {double(r) / (r - 1) + 1e-3, 2.5, 4.0, 8.0, 20.0, 60.0}) {
        const auto m = static_cast<std::int64_t>(std::ceil(dbar * double(s) / r));
        if (double(m) > choose(s, r)) continue;
        CHECK(log_P_universal(Uniformity(r), s, m).log_value <= 1e-9);
      }
}

TEST_CASE("universal formula domain") {
  CHECK_THROWS_AS(log_P_universal(Uniformity(2), 10, 10), DomainError);  // m = s/(r-1)
  CHECK_THROWS_AS(log_P_universal(Uniformity(3), 10, 5), DomainError);
  CHECK_THROWS_AS(log_P_universal(Uniformity(2), 10, 46), DomainError);  // beyond binom(10,2)
  CHECK_THROWS_AS(log_P_universal(Uniformity(3), 2, 1), DomainError);
}

TEST_CASE("universal formula flags the sparse boundary") {
  // dbar = 2(s+1)/s within 1e-6 of 2
  const LogEstimate est = log_P_universal(Uniformity(2), 4'000'000, 4'000'001);
  CHECK(est.not_asymptotic);
  CHECK(est.components.log_G == doctest::Approx(std::log(G_sparse_limit(Uniformity(2)))));
}

TEST_CASE("count forms converge as s grows") {
  // The exact-binomial form includes log G while the Stirling form does not.
  double prev = INFINITY;
  for (std::int64_t s : {1000, 10000, 100000}) {
    const auto m = static_cast<std::int64_t>(8.0 * double(s) / 3.0);
    const LogEstimate ex = log_C_asymptotic(Uniformity(3), s, m, CountForm::ExactBinomial);
    const LogEstimate st = log_C_asymptotic(Uniformity(3), s, m, CountForm::Stirling);
    const double gap = std::abs(ex.log_value - st.log_value - ex.components.log_G);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("Stirling count form carries the dbar^2/4 term for r = 2") {
  const std::int64_t s = 10000, m = 30000;
  const LogEstimate st = log_C_asymptotic(Uniformity(2), s, m, CountForm::Stirling);
  const double dbar = 6.0;
  const double without = 2.0 * double(m) * std::log(double(s)) - std::lgamma(double(m) + 1.0) -
                         double(m) * std::log(2.0) - dbar / 2.0 - double(s) * F(Uniformity(2), dbar);
  CHECK(st.log_value == doctest::Approx(without - dbar * dbar / 4.0).epsilon(1e-14));
  const LogEstimate ex = log_C_asymptotic(Uniformity(2), s, m, CountForm::ExactBinomial);
  CHECK(std::abs(ex.log_value - ex.components.log_G - st.log_value) < 0.05);
  CHECK(std::abs(ex.log_value - ex.components.log_G - (without)) > 8.9);
  CHECK_THROWS_AS(log_C_asymptotic(Uniformity(2), 100, 4000, CountForm::Stirling), DomainError);
  CHECK(log_C_asymptotic(Uniformity(2), 1000, 5000, CountForm::Stirling).validity_warning);
}

TEST_CASE("log_choose agrees with lgamma") {
  for (double N : {10.0, 1e3, 1e7, 1e12})
    for (double k : {0.0, 1.0, 5.0, 200.0, 3e4})
      if (k <= N) {
        // log(N^k / k!) + sum log(1 - i/N) avoids the cancellation of lgamma(N) - lgamma(N - k)
        double ref = k * std::log(N) - std::lgamma(k + 1);
        for (double i = 0; i < k; ++i) ref += std::log1p(-i / N);
        CHECK(std::abs(log_choose(N, k) - ref) <= 1e-11 * std::max(1.0, std::abs(ref)));
      }
  CHECK(choose(10, 3) == 120.0);
  CHECK(choose(2, 3) == 0.0);
}

TEST_CASE("BCM y solves its defining equation") {
  for (double x : {1.001, 1.1, 2.0, 5.0, 10.0, 20.0}) {
    CHECK(std::abs(bcm_y(x) - oracle::bcm_y(oracle::hp(x)).convert_to<double>()) < 1e-12);
  }
  CHECK_THROWS_AS(bcm_y(1.0), DomainError);
  CHECK_THROWS_AS(bcm_y(0.5), DomainError);
  double prev = 1.0;
  for (double x : {1.5, 2.0, 5.0, 10.0, 20.0, 40.0}) {
    const double gap = bcm_one_minus_y(x);
    CHECK(gap > 0.0);
    CHECK(gap < prev);
    CHECK(std::abs(gap - (1.0 - bcm_y(x))) <= 1e-15);
    prev = gap;
  }
}

TEST_CASE("BCM form is the r = 2 case of the universal formula") {
  for (double x : log_grid(1.0 + 1e-3, 20.0, 50)) {
    const FixedPoint fp = solve_xi_from_dbar(Uniformity(2), 2.0 * x);
    CHECK(std::abs(bcm_y(x) - fp.rho / (1.0 + fp.xi)) < 1e-10);
    const double g = G(Uniformity(2), 2.0 * x);
    CHECK(std::abs(std::exp(bcm_a(x)) - g) <= 1e-9 * g);
    CHECK(std::abs(bcm_log_base(x) + F(Uniformity(2), 2.0 * x)) <= 1e-10);
  }
  const LogEstimate u = log_P_universal(Uniformity(2), 1000, 3000);
  CHECK(std::abs(u.log_value - bcm_log_P(1000, 3000)) < 1e-9);
}

TEST_CASE("local limit parameters") {
  const LltParameters p = llt_parameters(Uniformity(3), 20000, 6.0);
  const double xi = solve_xi_from_d(Uniformity(3), 6.0).xi;
  CHECK(p.mu_L == doctest::Approx((1.0 - xi) * 20000).epsilon(1e-9));
  CHECK(p.sigma_L2 == doctest::Approx(20000 * std::exp(-6.0)));
  CHECK(p.sigma_M2 == doctest::Approx(40000.0));
  const LltParameters q = llt_parameters(Uniformity(2), 5000, 3.0);
  CHECK(q.mu_M == doctest::Approx(3.0 * (1.0 - q.xi * q.xi) * 5000 / 2.0));
  for (double d : {2.0, 5.0, 9.0})
    CHECK(llt_parameters(Uniformity(3), 1000, d).sigma_M2 / llt_parameters(Uniformity(3), 1000, d).sigma_L2 ==
          doctest::Approx(d / 3.0 * std::exp(d)));
  CHECK_THROWS_AS(llt_parameters(Uniformity(3), 1000, 0.5), DomainError);
}
