#include "ecmh/baselines/muhash.hpp"

#include <algorithm>

#include "ecmh/error.hpp"

namespace ecmh {

namespace {

// -p^-1 mod 2^64 by Newton iteration (p odd).
mp_limb_t neg_inverse_limb(mp_limb_t p) {
  mp_limb_t x = p;  // correct to 3 bits since p * p = 1 mod 8
  for (int i = 0; i < 5; ++i) x *= 2 - p * x;
  return static_cast<mp_limb_t>(0) - x;
}

void load_le_bits(const std::uint8_t* bytes, std::size_t len, mp_limb_t* out, std::size_t limbs) {
  std::fill(out, out + limbs, 0);
  for (std::size_t i = 0; i < len; ++i) out[i / 8] |= static_cast<mp_limb_t>(bytes[i]) << (8 * (i % 8));
}

}  // namespace

MuHash::MuHash(mpz_class p, Bytes key, std::string name, unsigned security_bits)
    : p_(std::move(p)), key_(std::move(key)), name_(std::move(name)), security_bits_(security_bits) {
  if (p_ < 3 || mpz_even_p(p_.get_mpz_t())) throw ParameterError("MuHash modulus must be an odd prime");
  if (mpz_probab_prime_p(p_.get_mpz_t(), 30) == 0) throw ParameterError("MuHash modulus is not prime");
  bits_ = static_cast<unsigned>(mpz_sizeinbase(p_.get_mpz_t(), 2));
  n_ = (bits_ + 63) / 64;
  p_limbs_ = to_limbs(p_);
  p_inv_ = neg_inverse_limb(p_limbs_[0]);
  hasher_ = std::make_unique<Blake2Hasher>(key_, (bits_ + 7) / 8);
  scratch_.assign(2 * n_ + n_, 0);
}

MuHash MuHash::from_registry(const std::string& name, Bytes key, const Registry& reg) {
  const MuHashRecord& r = reg.muhash(name);
  return MuHash(mpz_class(r.p), std::move(key), name, r.security_bits);
}

std::unique_ptr<MuHash> MuHash::thread_copy() const {
  return std::make_unique<MuHash>(p_, key_, name_, security_bits_);
}

MuHash::Limbs MuHash::to_limbs(const mpz_class& v) const {
  Limbs out(n_, 0);
  std::size_t count = 0;
  mpz_export(out.data(), &count, -1, sizeof(mp_limb_t), 0, 0, v.get_mpz_t());
  if (count > n_) throw InternalError("value wider than the modulus");
  return out;
}

mpz_class MuHash::to_mpz(const Limbs& v) const {
  mpz_class r;
  mpz_import(r.get_mpz_t(), v.size(), -1, sizeof(mp_limb_t), 0, 0, v.data());
  return r;
}

MuHash::Limbs MuHash::element(ByteView e) const {
  Bytes buf((bits_ + 7) / 8);
  hasher_->hash(e, buf);
  truncate_to_bits(buf, bits_);
  Limbs v(n_);
  load_le_bits(buf.data(), buf.size(), v.data(), n_);
  // v < 2^bits < 2p, so one subtraction reduces it
  if (mpn_cmp(v.data(), p_limbs_.data(), n_) >= 0) mpn_sub_n(v.data(), v.data(), p_limbs_.data(), n_);
  if (mpn_zero_p(v.data(), n_)) v[0] = 1;
  return v;
}

void MuHash::redc_mul(mp_limb_t* out, const mp_limb_t* a, const mp_limb_t* b) const {
  const std::size_t n = n_;
  mp_limb_t* t = scratch_.data();
  mp_limb_t* carries = t + 2 * n;
  mpn_mul_n(t, a, b, static_cast<mp_size_t>(n));
  // clear one low limb per step: t += u p 2^(64 i) with u = t_i * (-p^-1)
  for (std::size_t i = 0; i < n; ++i) {
    const mp_limb_t u = t[i] * p_inv_;
    carries[i] = mpn_addmul_1(t + i, p_limbs_.data(), static_cast<mp_size_t>(n), u);
  }
  const mp_limb_t top = mpn_add_n(out, t + n, carries, static_cast<mp_size_t>(n));
  if (top != 0 || mpn_cmp(out, p_limbs_.data(), static_cast<mp_size_t>(n)) >= 0) {
    mpn_sub_n(out, out, p_limbs_.data(), static_cast<mp_size_t>(n));
  }
}

MuHash::State MuHash::empty() const {
  State s;
  s.y.assign(n_, 0);
  s.z.assign(n_, 0);
  s.y[0] = 1;
  s.z[0] = 1;
  return s;
}

void MuHash::insert_residue(State& s, const Limbs& x) const {
  if (x.size() != n_) throw ParameterMismatch("MuHash residue has wrong width");
  redc_mul(s.y.data(), s.y.data(), x.data());
  ++s.w;
}

void MuHash::remove_residue(State& s, const Limbs& x) const {
  if (x.size() != n_) throw ParameterMismatch("MuHash residue has wrong width");
  redc_mul(s.z.data(), s.z.data(), x.data());
  --s.w;
}

MuHash::State MuHash::combine(const State& a, const State& b) const {
  if (a.y.size() != n_ || b.y.size() != n_) throw ParameterMismatch("MuHash state from another modulus");
  State r;
  r.w = a.w + b.w;
  r.y.assign(n_, 0);
  r.z.assign(n_, 0);
  redc_mul(r.y.data(), a.y.data(), b.y.data());
  redc_mul(r.z.data(), a.z.data(), b.z.data());
  // each Redc contributes r^-1 to y and to z; the quotient is unaffected
  return r;
}

mpz_class MuHash::finalize(const State& s) const {
  mpz_class zi;
  if (mpz_invert(zi.get_mpz_t(), to_mpz(s.z).get_mpz_t(), p_.get_mpz_t()) == 0) throw InternalError("z not invertible");
  mpz_class r = mpz_class(1) << static_cast<mp_bitcnt_t>(64 * n_);
  mpz_class rw;
  mpz_class w;
  mpz_set_si(w.get_mpz_t(), static_cast<long>(s.w));
  mpz_powm(rw.get_mpz_t(), r.get_mpz_t(), w.get_mpz_t(), p_.get_mpz_t());  // negative w uses r^-1
  mpz_class out = to_mpz(s.y) * zi % p_;
  out = out * rw % p_;
  return out;
}

MuHash::State MuHash::from_residue(const mpz_class& v) const {
  if (v <= 0 || v >= p_) throw InvalidEncoding("MuHash value outside [1, p-1]");
  State s = empty();
  s.y = to_limbs(v);
  return s;
}

Bytes MuHash::serialize(const mpz_class& v) const {
  Bytes out(digest_length(), 0);
  std::size_t count = 0;
  Bytes tmp(digest_length() + 8);
  mpz_export(tmp.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
  if (count > out.size()) throw InternalError("MuHash value wider than the digest");
  std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(count), out.end() - static_cast<std::ptrdiff_t>(count));
  return out;
}

mpz_class MuHash::deserialize(ByteView bytes) const {
  if (bytes.size() != digest_length()) {
    throw InvalidEncoding("MuHash digest must be " + std::to_string(digest_length()) + " bytes, got " +
                          std::to_string(bytes.size()));
  }
  mpz_class v;
  mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  if (v <= 0 || v >= p_) throw InvalidEncoding("MuHash digest outside [1, p-1]");
  return v;
}

AdHash::AdHash(unsigned bits, Bytes key, std::string name)
    : bits_(bits), key_(std::move(key)), name_(name.empty() ? "n" + std::to_string(bits) : std::move(name)) {
  if (bits_ < 8 || bits_ % 8 != 0) throw ParameterError("AdHash size must be a multiple of 8 bits, at least 8");
  hasher_ = std::make_unique<Blake2Hasher>(key_, bits_ / 8);
}

AdHash AdHash::from_registry(const std::string& name, Bytes key, const Registry& reg) {
  const AdHashRecord r = reg.adhash(name);
  return AdHash(r.bits, std::move(key), name);
}

std::unique_ptr<AdHash> AdHash::thread_copy() const { return std::make_unique<AdHash>(bits_, key_, name_); }

void AdHash::mask(Limbs& v) const {
  if (bits_ % 64 != 0) v.back() &= (mp_limb_t{1} << (bits_ % 64)) - 1;
}

AdHash::Limbs AdHash::element(ByteView e) const {
  Bytes buf(bits_ / 8);
  hasher_->hash(e, buf);
  Limbs v(limb_count());
  load_le_bits(buf.data(), buf.size(), v.data(), v.size());
  return v;
}

mpz_class AdHash::element_value(ByteView e) const { return to_mpz(element(e)); }

void AdHash::add_value(Limbs& acc, const Limbs& h, std::int64_t delta) const {
  if (delta == 0) throw InvalidUpdate("multiplicity change must be nonzero");
  if (acc.size() != limb_count() || h.size() != limb_count()) throw ParameterMismatch("AdHash value has wrong width");
  const auto n = static_cast<mp_size_t>(acc.size());
  if (delta == 1) {
    mpn_add_n(acc.data(), acc.data(), h.data(), n);
  } else if (delta == -1) {
    mpn_sub_n(acc.data(), acc.data(), h.data(), n);
  } else if (delta > 0) {
    mpn_addmul_1(acc.data(), h.data(), n, static_cast<mp_limb_t>(delta));
  } else {
    mpn_submul_1(acc.data(), h.data(), n, static_cast<mp_limb_t>(0) - static_cast<mp_limb_t>(delta));
  }
  mask(acc);
}

void AdHash::update(Limbs& acc, ByteView e, std::int64_t delta) const {
  if (delta == 0) throw InvalidUpdate("multiplicity change must be nonzero");
  add_value(acc, element(e), delta);
}

AdHash::Limbs AdHash::combine(const Limbs& a, const Limbs& b) const {
  if (a.size() != limb_count() || b.size() != limb_count()) throw ParameterMismatch("AdHash value has wrong width");
  Limbs r(a.size());
  mpn_add_n(r.data(), a.data(), b.data(), static_cast<mp_size_t>(a.size()));
  mask(r);
  return r;
}

mpz_class AdHash::to_mpz(const Limbs& v) const {
  mpz_class r;
  mpz_import(r.get_mpz_t(), v.size(), -1, sizeof(mp_limb_t), 0, 0, v.data());
  return r;
}

Bytes AdHash::serialize(const Limbs& acc) const {
  Bytes out(digest_length());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[out.size() - 1 - i] = static_cast<std::uint8_t>(acc[i / 8] >> (8 * (i % 8)));
  }
  return out;
}

AdHash::Limbs AdHash::deserialize(ByteView bytes) const {
  if (bytes.size() != digest_length()) {
    throw InvalidEncoding("AdHash digest must be " + std::to_string(digest_length()) + " bytes, got " +
                          std::to_string(bytes.size()));
  }
  Limbs v(limb_count(), 0);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    v[i / 8] |= static_cast<mp_limb_t>(bytes[bytes.size() - 1 - i]) << (8 * (i % 8));
  }
  return v;
}

}  // namespace ecmh
