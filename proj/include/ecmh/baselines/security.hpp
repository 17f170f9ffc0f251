#pragma once

#include <gmpxx.h>

namespace ecmh::security {

/// log2 of L_p[1/3, (64/9)^(1/3)] = exp(c (ln p)^(1/3) (ln ln p)^(2/3)),
/// the number field sieve estimate with the o(1) term dropped.
double nfs_log2_cost(unsigned modulus_bits);

/// nfs_log2_cost shifted so that a 1024-bit modulus maps to 80 bits, the
/// anchor of the usual key-size tables (which then give ~110 bits at 2048
/// and ~132 bits at 3072).
double muhash_security_bits(unsigned modulus_bits);

/// Smallest modulus size (multiple of 64 bits) reaching `security` bits.
unsigned muhash_modulus_bits_for(double security);

/// 2 sqrt(n): generalized-birthday bound for set hashing in Z_{2^n}.
double adhash_set_security_bits(unsigned n);

/// Smallest n (multiple of 8) with 2 sqrt(n) >= security.
unsigned adhash_bits_for(double security);

/// log2(rho) / 2: generic discrete-log cost in a group of prime order rho.
double ecmh_security_bits(const mpz_class& subgroup_order);

}  // namespace ecmh::security
