#pragma once

#include <gmp.h>
#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ecmh/bytes.hpp"
#include "ecmh/hash/element_hash.hpp"
#include "ecmh/registry.hpp"

namespace ecmh {

/// Multiplicative multiset hash over Z_p^*, with the running value kept as
/// a triplet (w, y, z) meaning y / z * r^w mod p, r = 2^(64 n) for an n-limb
/// p. Every multiplication is a Montgomery reduction; no division happens
/// until finalize().
class MuHash {
 public:
  using Limbs = std::vector<mp_limb_t>;

  struct State {
    std::int64_t w = 0;
    Limbs y;  // in [1, p-1]
    Limbs z;
  };

  /// `p` must be an odd prime > 2 (probabilistic check).
  MuHash(mpz_class p, Bytes key, std::string name = "custom", unsigned security_bits = 0);
  static MuHash from_registry(const std::string& name, Bytes key, const Registry& reg = Registry::instance());

  const std::string& name() const noexcept { return name_; }
  const mpz_class& modulus() const noexcept { return p_; }
  unsigned modulus_bits() const noexcept { return bits_; }
  unsigned security_bits() const noexcept { return security_bits_; }
  std::size_t limb_count() const noexcept { return n_; }
  std::size_t digest_length() const noexcept { return (bits_ + 7) / 8; }
  std::unique_ptr<MuHash> thread_copy() const;

  /// Hash to bits(p) bits, minus p if >= p, and 0 mapped to 1.
  Limbs element(ByteView e) const;
  mpz_class element_value(ByteView e) const { return to_mpz(element(e)); }

  State empty() const;
  void insert(State& s, ByteView e) const { insert_residue(s, element(e)); }
  void remove(State& s, ByteView e) const { remove_residue(s, element(e)); }
  void insert_residue(State& s, const Limbs& x) const;
  void remove_residue(State& s, const Limbs& x) const;
  /// Product of the represented values.
  State combine(const State& a, const State& b) const;

  /// y * z^-1 * r^w mod p, in [1, p-1].
  mpz_class finalize(const State& s) const;
  /// State representing the residue v (w = 0, z = 1).
  State from_residue(const mpz_class& v) const;

  /// Big-endian, ceil(bits(p)/8) bytes.
  Bytes serialize(const mpz_class& v) const;
  /// Rejects wrong length and values outside [1, p-1].
  mpz_class deserialize(ByteView bytes) const;

  /// t = a * b * r^-1 mod p (exposed for tests).
  void redc_mul(mp_limb_t* out, const mp_limb_t* a, const mp_limb_t* b) const;

  Limbs to_limbs(const mpz_class& v) const;
  mpz_class to_mpz(const Limbs& v) const;

 private:
  mpz_class p_;
  Bytes key_;
  std::string name_;
  unsigned security_bits_;
  unsigned bits_;
  std::size_t n_;
  Limbs p_limbs_;
  mp_limb_t p_inv_;  // -p^-1 mod 2^64
  std::unique_ptr<ElementHasher> hasher_;
  mutable Limbs scratch_;
};

/// Additive multiset hash: sum of delta * h(element) mod 2^n.
class AdHash {
 public:
  using Limbs = std::vector<mp_limb_t>;

  /// n >= 8 and a multiple of 8.
  AdHash(unsigned bits, Bytes key, std::string name = "");
  static AdHash from_registry(const std::string& name, Bytes key, const Registry& reg = Registry::instance());

  const std::string& name() const noexcept { return name_; }
  unsigned bits() const noexcept { return bits_; }
  std::size_t digest_length() const noexcept { return bits_ / 8; }
  std::unique_ptr<AdHash> thread_copy() const;

  /// h(element) as an n-bit value, little-endian limbs.
  Limbs element(ByteView e) const;
  mpz_class element_value(ByteView e) const;

  Limbs empty() const { return Limbs(limb_count(), 0); }
  /// acc + delta * h(element) mod 2^n; delta = 0 is rejected.
  void update(Limbs& acc, ByteView e, std::int64_t delta) const;
  void add_value(Limbs& acc, const Limbs& h, std::int64_t delta) const;
  Limbs combine(const Limbs& a, const Limbs& b) const;

  /// n/8 bytes, big-endian.
  Bytes serialize(const Limbs& acc) const;
  Limbs deserialize(ByteView bytes) const;
  mpz_class to_mpz(const Limbs& v) const;

 private:
  std::size_t limb_count() const noexcept { return (bits_ + 63) / 64; }
  void mask(Limbs& v) const;

  unsigned bits_;
  Bytes key_;
  std::string name_;
  std::unique_ptr<ElementHasher> hasher_;
};

}  // namespace ecmh
