// Bender-Canfield-McKay parametrisation of P_2(s, m).
//
// Solved independently of the Phi_r machinery: with w = atanh(y) the defining
// equation 2xy = log((1+y)/(1-y)) becomes w / tanh(w) = x, and every quantity
// below is expressed through w so that 1 - y stays resolvable when y -> 1.

#include <cmath>
#include <numbers>
#include <string>

#include "hyperconn/analytic.hpp"
#include "hyperconn/errors.hpp"

namespace hyperconn::analytic {

namespace {

// w / tanh(w) - 1
double coth_ratio_minus_one(double w) {
  if (w < 0.1) {
    const double w2 = w * w;
    return w2 * (1.0 / 3.0 + w2 * (-1.0 / 45.0 + w2 * (2.0 / 945.0 + w2 * (-1.0 / 4725.0 + w2 * 2.0 / 93555.0))));
  }
  return w / std::tanh(w) - 1.0;
}

double coth_ratio_derivative(double w) {
  if (w < 0.1) {
    const double w2 = w * w;
    return w * (2.0 / 3.0 + w2 * (-4.0 / 45.0 + w2 * (12.0 / 945.0 + w2 * (-8.0 / 4725.0))));
  }
  const double sh = std::sinh(w);
  return 1.0 / std::tanh(w) - w / (sh * sh);
}

double solve_w(double x) {
  if (!(x > 1.0) || !std::isfinite(x)) throw DomainError("BCM parameter x = m/s must exceed 1");
  const double target = x - 1.0;
  double lo = 0.0, hi = x + 1.0;
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (coth_ratio_minus_one(mid) < target ? lo : hi) = mid;
  }
  double w = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = coth_ratio_minus_one(w) - target;
    (f < 0.0 ? lo : hi) = w;
    if (f == 0.0) return w;
    double next = w - f / coth_ratio_derivative(w);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - w);
    w = next;
    if (step <= 1e-15 * w || hi - lo <= 4e-16 * w) return w;
  }
  throw ConvergenceError("BCM y-equation did not converge at x=" + std::to_string(x));
}

struct BcmPoint {
  double x;
  double y;
  double z;      // 1 - y
  double log_y;
};

BcmPoint bcm_point(double x) {
  const double w = solve_w(x);
  BcmPoint p;
  p.x = x;
  p.y = std::tanh(w);
  p.z = 2.0 / (1.0 + std::exp(2.0 * w));
  p.log_y = p.y < 0.5 ? std::log(p.y) : std::log1p(-p.z);
  return p;
}

}  // namespace

double bcm_y(double x) { return bcm_point(x).y; }

double bcm_one_minus_y(double x) { return bcm_point(x).z; }

double bcm_a(double x) {
  const BcmPoint p = bcm_point(x);
  // 1 - x + xy and 1 - x + xy^2, arranged to avoid cancellation at both ends
  const double one_minus_x = 1.0 - x;
  const double lin = p.y < 0.5 ? one_minus_x + x * p.y : 1.0 - x * p.z;
  const double quad = p.y < 0.5 ? one_minus_x + x * p.y * p.y : 1.0 - x * p.z * (2.0 - p.z);
  return x * (x + 1.0) * p.z + std::log(lin) - 0.5 * std::log(quad);
}

double bcm_log_base(double x) {
  const BcmPoint p = bcm_point(x);
  const double log_one_minus_y2 = std::log(p.z) + std::log(2.0 - p.z);
  return std::numbers::ln2 - x + (1.0 - x) * p.log_y - 0.5 * log_one_minus_y2;
}

double bcm_log_P(std::int64_t s, std::int64_t m) {
  if (s < 2) throw DomainError("BCM formula needs s >= 2");
  if (m < 0 || double(m) > choose(s, 2)) throw DomainError("m must lie in [0, binom(s, 2)]");
  const double x = double(m) / double(s);
  return bcm_a(x) + double(s) * bcm_log_base(x);
}

}  // namespace hyperconn::analytic
