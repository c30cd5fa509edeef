#pragma once

#include <gmpxx.h>

#include <string>

namespace hyperconn {

/// Arbitrary-precision nonnegative integer.
using BigCount = mpz_class;

inline std::string to_decimal(const BigCount& x) { return x.get_str(10); }

/// Natural log of a positive BigCount, accurate to double precision.
double log_big(const BigCount& x);

/// binom(n, k) exactly.
BigCount big_choose(unsigned long n, unsigned long k);

}  // namespace hyperconn
