#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

// Bit-serial GF(2^m) arithmetic for m <= 31. Independent of the library code
// paths: no tables, no addition chains, inversion by extended Euclid.
namespace oracle {

struct NaiveField {
  unsigned m;
  std::uint64_t poly;  // includes the z^m term

  std::uint64_t reduce(std::uint64_t v) const {
    for (int i = deg(v); i >= static_cast<int>(m); --i) {
      if ((v >> i) & 1) v ^= poly << (i - m);
    }
    return v;
  }
  static std::uint64_t clmul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    for (; b != 0; b >>= 1, a <<= 1) {
      if (b & 1) r ^= a;
    }
    return r;
  }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return reduce(clmul(a, b)); }
  std::uint64_t sq(std::uint64_t a) const { return mul(a, a); }

  static int deg(std::uint64_t v) { return v == 0 ? -1 : 63 - __builtin_clzll(v); }

  std::uint64_t inv(std::uint64_t a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    std::uint64_t r0 = poly, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
      std::uint64_t q = 0;
      while (deg(r0) >= deg(r1)) {
        const int sh = deg(r0) - deg(r1);
        q ^= std::uint64_t{1} << sh;
        r0 ^= r1 << sh;
      }
      std::swap(r0, r1);
      const std::uint64_t s = s0 ^ clmul(q, s1);
      s0 = s1;
      s1 = s;
    }
    if (r0 != 1) throw std::logic_error("modulus not irreducible");
    return reduce(s0);
  }

  unsigned trace(std::uint64_t a) const {
    std::uint64_t t = 0;
    for (unsigned i = 0; i < m; ++i, a = sq(a)) t ^= a;
    if (t > 1) throw std::logic_error("trace outside GF(2)");
    return static_cast<unsigned>(t);
  }
};

/// Log/antilog tables built from NaiveField::mul; speeds up exhaustive
/// sweeps without touching library code.
struct LogTables {
  const NaiveField& f;
  std::vector<std::uint32_t> log, exp;
  explicit LogTables(const NaiveField& field) : f(field) {
    const std::uint32_t q = (1u << f.m) - 1;
    log.assign(q + 1, 0);
    exp.assign(2 * q, 0);
    std::uint64_t g = 1;
    for (std::uint32_t i = 0; i < q; ++i) {
      exp[i] = exp[i + q] = static_cast<std::uint32_t>(g);
      log[g] = i;
      g = f.mul(g, 2);
    }
    if (g != 1) throw std::logic_error("z is not a generator");
  }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return (a == 0 || b == 0) ? 0 : exp[log[a] + log[b]]; }
  std::uint64_t inv(std::uint64_t a) const {
    const std::uint32_t q = (1u << f.m) - 1;
    return exp[(q - log[a]) % q];
  }
};

inline NaiveField toy_field() { return {13, (1u << 13) | (1u << 4) | (1u << 3) | (1u << 1) | 1u}; }

}  // namespace oracle
