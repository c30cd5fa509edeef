#include "hyperconn/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperconn::rng {

double normal(Engine& eng) noexcept {
  for (;;) {
    const double x = 2.0 * uniform01(eng) - 1.0;
    const double y = 2.0 * uniform01(eng) - 1.0;
    const double s = x * x + y * y;
    if (s > 0.0 && s < 1.0) return x * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double gamma(Engine& eng, double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) throw std::invalid_argument("gamma shape must be positive");
  if (shape < 1.0) {
    const double g = gamma(eng, shape + 1.0);
    return g * std::exp(std::log(uniform_open(eng)) / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal(eng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    const double w = std::expm1(3.0 * std::log1p(c * x));  // v^3 - 1
    const double u = uniform_open(eng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * (1.0 + w);
    // log v^3 - (v^3 - 1), kept accurate when d is huge and w tiny
    const double log1p_minus = std::abs(w) < 1e-4
                                   ? w * w * (-0.5 + w * (1.0 / 3.0 + w * (-0.25 + w * 0.2)))
                                   : std::log1p(w) - w;
    if (std::log(u) < 0.5 * x * x + d * log1p_minus) return d * (1.0 + w);
  }
}

double beta(Engine& eng, double a, double b) {
  const double x = gamma(eng, a);
  const double y = gamma(eng, b);
  return x / (x + y);
}

namespace {

std::uint64_t poisson_inversion(Engine& eng, double mean) {
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double prod = uniform01(eng);
  while (prod > limit) {
    ++k;
    prod *= uniform01(eng);
  }
  return k;
}

// Hormann (1993), "The transformed rejection method for generating Poisson
// random variables", algorithm PTRS.
std::uint64_t poisson_ptrs(Engine& eng, double lam) {
  const double slam = std::sqrt(lam);
  const double loglam = std::log(lam);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double U = uniform01(eng) - 0.5;
    const double V = uniform01(eng);
    const double us = 0.5 - std::abs(U);
    const double k = std::floor((2.0 * a / us + b) * U + lam + 0.43);
    if (us >= 0.07 && V <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && V > us)) continue;
    if (std::log(V) + std::log(invalpha) - std::log(a / (us * us) + b) <= -lam + k * loglam - std::lgamma(k + 1.0))
      return static_cast<std::uint64_t>(k);
  }
}

// Sequential search from P(0) = (1-p)^n; used only when n p is small.
std::uint64_t binomial_inversion(Engine& eng, std::uint64_t n, double p) {
  if (p > 0.5) return n - binomial_inversion(eng, n, 1.0 - p);
  const double q = 1.0 - p;
  const double ratio = p / q;
  for (;;) {
    double u = uniform01(eng);
    double pk = std::exp(double(n) * std::log1p(-p));
    std::uint64_t k = 0;
    while (u > pk) {
      u -= pk;
      if (k == n) break;
      pk *= ratio * double(n - k) / double(k + 1);
      ++k;
      if (pk == 0.0 && k > 10) break;
    }
    if (u <= pk) return k;
    // fell off the representable tail: redraw (probability ~ 1e-16)
  }
}

}  // namespace

std::uint64_t poisson(Engine& eng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::invalid_argument("poisson mean must be >= 0");
  if (mean == 0.0) return 0;
  return mean < 10.0 ? poisson_inversion(eng, mean) : poisson_ptrs(eng, mean);
}

std::uint64_t binomial(Engine& eng, std::uint64_t trials, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial p must lie in [0, 1]");
  std::uint64_t offset = 0;
  bool flipped = false;
  std::uint64_t n = trials;
  if (p > 0.5) {
    p = 1.0 - p;
    flipped = true;
  }
  // Knuth 3.4.1: with a = 1 + floor(n/2), the a-th order statistic of n
  // uniforms is Beta(a, n + 1 - a); condition on which side of p it falls.
  while (n > 0 && p > 0.0 && double(n) * p >= 10.0) {
    const std::uint64_t a = 1 + n / 2;
    const double x = beta(eng, double(a), double(n + 1 - a));
    if (x >= p) {
      n = a - 1;
      p = p / x;
    } else {
      offset += a;
      n -= a;
      p = (p - x) / (1.0 - x);
    }
  }
  std::uint64_t k = offset;
  if (n > 0 && p > 0.0) k += binomial_inversion(eng, n, p);
  return flipped ? trials - k : k;
}

}  // namespace hyperconn::rng
