#include "ecmh/baselines/security.hpp"

#include <cmath>

namespace ecmh::security {

double nfs_log2_cost(unsigned modulus_bits) {
  const double c = std::cbrt(64.0 / 9.0);
  const double ln_p = modulus_bits * std::log(2.0);
  return c * std::cbrt(ln_p) * std::pow(std::log(ln_p), 2.0 / 3.0) / std::log(2.0);
}

double muhash_security_bits(unsigned modulus_bits) { return nfs_log2_cost(modulus_bits) - (nfs_log2_cost(1024) - 80.0); }

unsigned muhash_modulus_bits_for(double security) {
  unsigned bits = 64;
  while (muhash_security_bits(bits) < security) bits += 64;
  return bits;
}

double adhash_set_security_bits(unsigned n) { return 2.0 * std::sqrt(static_cast<double>(n)); }

unsigned adhash_bits_for(double security) {
  unsigned n = 8;
  while (adhash_set_security_bits(n) < security) n += 8;
  return n;
}

double ecmh_security_bits(const mpz_class& subgroup_order) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, subgroup_order.get_mpz_t());
  return (std::log2(mant) + static_cast<double>(exp)) / 2.0;
}

}  // namespace ecmh::security
