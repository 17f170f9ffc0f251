#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include "ecmh/bytes.hpp"
#include "ecmh/hash/ecmh.hpp"

namespace ecmh {

/// Streaming sink: add elements, then take the digest.
class MultisetSink {
 public:
  virtual ~MultisetSink() = default;
  virtual void add(ByteView element, std::int64_t delta = 1) = 0;
  virtual Bytes finish() = 0;
};

/// Any of the three constructions behind canonical serialized digests.
/// Equal multisets give byte-identical digests, so equality is byte equality
/// once both operands have been validated.
class MultisetHash {
 public:
  virtual ~MultisetHash() = default;

  virtual std::string construction() const = 0;  // "ecmh", "muhash" or "adhash"
  virtual std::string param() const = 0;
  virtual double security_bits() const = 0;
  virtual std::size_t digest_length() const = 0;

  virtual Bytes empty() const = 0;
  virtual std::unique_ptr<MultisetSink> sink() const = 0;
  virtual Bytes update(ByteView digest, ByteView element, std::int64_t delta) const = 0;
  virtual Bytes unite(ByteView a, ByteView b) const = 0;
  /// Throws InvalidEncoding when the bytes are not a digest of this instance.
  virtual void validate(ByteView digest) const = 0;
  virtual std::unique_ptr<MultisetHash> thread_copy() const = 0;

  bool equal(ByteView a, ByteView b) const {
    validate(a);
    validate(b);
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  }
  Bytes hash(std::span<const UpdateOp> ops) const {
    auto s = sink();
    for (const auto& op : ops) s->add(op.element, op.delta);
    return s->finish();
  }
};

/// construction in {ecmh, muhash, adhash}; param names a registry entry
/// (curve, p<bits> modulus, or n<bits>). Throws ParameterError if unknown.
std::unique_ptr<MultisetHash> make_multiset_hash(const std::string& construction, const std::string& param,
                                                 const Bytes& key);

}  // namespace ecmh
