#include "hyperconn/bigcount.hpp"

#include <cmath>
#include <numbers>

#include "hyperconn/errors.hpp"

namespace hyperconn {

double log_big(const BigCount& x) {
  if (sgn(x) <= 0) throw DomainError("log of a non-positive count");
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, x.get_mpz_t());
  return std::log(mant) + double(exp2) * std::numbers::ln2;
}

BigCount big_choose(unsigned long n, unsigned long k) {
  BigCount out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

}  // namespace hyperconn
