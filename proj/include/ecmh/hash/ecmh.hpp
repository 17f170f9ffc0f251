#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ecmh/encoding/sw_encoder.hpp"
#include "ecmh/hash/element_hash.hpp"

namespace ecmh {

/// One multiset update: `delta` copies of `element` (negative removes).
struct UpdateOp {
  Bytes element;
  std::int64_t delta = 1;
};

template <std::size_t Limbs>
class Ecmh;

/// An ECMH value: a curve point kept in lambda-projective form.
template <std::size_t Limbs>
class EcmhDigest {
 public:
  using Projective = ProjectivePoint<Limbs>;

  const Projective& point() const noexcept { return acc_; }
  const Ecmh<Limbs>* owner() const noexcept { return owner_; }

 private:
  friend class Ecmh<Limbs>;
  EcmhDigest(const Ecmh<Limbs>* owner, const Projective& acc) : owner_(owner), acc_(acc) {}
  const Ecmh<Limbs>* owner_;
  Projective acc_;
};

/// Elliptic curve multiset hash: element -> BLAKE2 -> SW encoding -> sum of
/// points. Digests are values; an Ecmh instance is shared read-only, except
/// that hashing an element uses the instance's hasher (see thread_copy()).
template <std::size_t Limbs>
class Ecmh {
 public:
  using Encoder = SwEncoder<Limbs>;
  using Curve = BinaryCurve<Limbs>;
  using Field = BinaryField<Limbs>;
  using Element = FieldElement<Limbs>;
  using Affine = AffinePoint<Limbs>;
  using Projective = ProjectivePoint<Limbs>;
  using Digest = EcmhDigest<Limbs>;

  static constexpr std::size_t default_batch = 256;

  /// Keyed when `key` is nonempty (1..32 bytes for m <= 256, 1..64 for m <= 512).
  Ecmh(std::shared_ptr<const Encoder> encoder, Bytes key)
      : encoder_(std::move(encoder)),
        key_(std::move(key)),
        hasher_(std::make_unique<Blake2Hasher>(key_, field().byte_length())) {
    if (field().degree() > 512) throw Unsupported("element hash for m > 512 is not provided");
  }

  /// Copy with its own hasher state, for use on another thread.
  std::unique_ptr<Ecmh> thread_copy() const { return std::make_unique<Ecmh>(encoder_, key_); }

  const Encoder& encoder() const noexcept { return *encoder_; }
  const Curve& curve() const noexcept { return encoder_->curve(); }
  const Field& field() const noexcept { return encoder_->field(); }
  const Bytes& key() const noexcept { return key_; }
  std::string hasher_name() const { return hasher_->name(); }

  /// Two instances produce interchangeable digests iff they share curve and key.
  bool compatible(const Ecmh& o) const noexcept {
    return this == &o || (curve().name() == o.curve().name() && key_ == o.key_);
  }

  Element element_hash(ByteView element) const {
    std::uint8_t buf[64];
    const std::size_t n = field().byte_length();
    hasher_->hash(element, std::span<std::uint8_t>(buf, n));
    truncate_to_bits(std::span<std::uint8_t>(buf, n), field().degree());
    return field().from_bytes(ByteView(buf, n));
  }

  Affine hash_element_to_curve(ByteView element) const { return encoder_->encode(element_hash(element)); }

  Digest empty() const noexcept { return Digest(this, Curve::projective_identity()); }

  /// d + delta * encode(hash(element)); delta = 0 is rejected.
  void update(Digest& d, ByteView element, std::int64_t delta) const {
    if (delta == 0) throw InvalidUpdate("multiplicity change must be nonzero");
    check(d);
    add_point(d, hash_element_to_curve(element), delta);
  }

  /// Adds an already-encoded point with multiplicity delta.
  void add_point(Digest& d, const Affine& p, std::int64_t delta) const {
    const Curve& c = curve();
    if (delta == 1) {
      d.acc_ = c.add_mixed(d.acc_, p);
    } else if (delta == -1) {
      d.acc_ = c.add_mixed(d.acc_, c.negate(p));
    } else {
      d.acc_ = c.add_full(d.acc_, c.scalar_mul(c.to_projective(p), delta));
    }
  }

  Digest unite(const Digest& a, const Digest& b) const {
    check(a);
    check(b);
    return Digest(this, curve().add_full(a.acc_, b.acc_));
  }

  /// Inverse element: the digest of the negated multiset.
  Digest negate(const Digest& a) const {
    check(a);
    return Digest(this, curve().negate(a.acc_));
  }

  bool equal(const Digest& a, const Digest& b) const {
    check(a);
    check(b);
    return curve().equal(a.acc_, b.acc_);
  }

  /// Compressed point, ceil((m+1)/8) bytes.
  Bytes serialize(const Digest& d) const {
    check(d);
    return curve().compress(d.acc_);
  }

  Digest deserialize(ByteView bytes) const { return Digest(this, curve().to_projective(curve().decompress(bytes))); }

  std::size_t digest_length() const noexcept { return curve().compressed_length(); }

  /// Fold of `ops` from the empty digest, encoding up to `batch` elements per
  /// field inversion. With `blind` set, encodings use the blinded variant.
  Digest hash_multiset(std::span<const UpdateOp> ops, std::size_t batch = default_batch,
                       RandomSource* blind = nullptr) const {
    Digest d = empty();
    if (batch == 0) batch = 1;
    std::vector<Element> ws;
    std::vector<Affine> pts;
    ws.reserve(batch);
    pts.resize(batch);
    for (std::size_t off = 0; off < ops.size(); off += batch) {
      const std::size_t n = std::min(batch, ops.size() - off);
      ws.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (ops[off + i].delta == 0) throw InvalidUpdate("multiplicity change must be nonzero");
        ws.push_back(element_hash(ops[off + i].element));
      }
      const std::span<Affine> out(pts.data(), n);
      if (blind != nullptr) {
        encoder_->encode_blinded_batch(ws, out, *blind);
      } else if (n == 1) {
        out[0] = encoder_->encode(ws[0]);
      } else {
        encoder_->encode_batch(ws, out);
      }
      for (std::size_t i = 0; i < n; ++i) add_point(d, out[i], ops[off + i].delta);
    }
    return d;
  }

  /// Same digest as hash_multiset, one element at a time with no batching.
  Digest hash_multiset_incremental(std::span<const UpdateOp> ops) const {
    Digest d = empty();
    for (const auto& op : ops) update(d, op.element, op.delta);
    return d;
  }

 private:
  void check(const Digest& d) const {
    if (d.owner_ == nullptr || !compatible(*d.owner_)) throw ParameterMismatch("digest belongs to another ECMH instance");
  }

  std::shared_ptr<const Encoder> encoder_;
  Bytes key_;
  std::unique_ptr<ElementHasher> hasher_;
};

/// Buffers elements and encodes them in batches; flush() folds the rest in.
template <std::size_t Limbs>
class EcmhAccumulator {
 public:
  using Hash = Ecmh<Limbs>;

  explicit EcmhAccumulator(const Hash& h, std::size_t batch = Hash::default_batch)
      : h_(h), batch_(batch == 0 ? 1 : batch), digest_(h.empty()) {
    ws_.reserve(batch_);
    deltas_.reserve(batch_);
    pts_.resize(batch_);
  }

  void add(ByteView element, std::int64_t delta = 1) {
    if (delta == 0) throw InvalidUpdate("multiplicity change must be nonzero");
    ws_.push_back(h_.element_hash(element));
    deltas_.push_back(delta);
    if (ws_.size() == batch_) flush();
  }

  void flush() {
    if (ws_.empty()) return;
    const std::span<typename Hash::Affine> out(pts_.data(), ws_.size());
    h_.encoder().encode_batch(ws_, out);
    for (std::size_t i = 0; i < ws_.size(); ++i) h_.add_point(digest_, out[i], deltas_[i]);
    ws_.clear();
    deltas_.clear();
  }

  const typename Hash::Digest& digest() {
    flush();
    return digest_;
  }

 private:
  const Hash& h_;
  std::size_t batch_;
  typename Hash::Digest digest_;
  std::vector<typename Hash::Element> ws_;
  std::vector<std::int64_t> deltas_;
  std::vector<typename Hash::Affine> pts_;
};

}  // namespace ecmh
