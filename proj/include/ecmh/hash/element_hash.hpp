#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include "ecmh/bytes.hpp"

namespace ecmh {

/// Intermediate hash A -> {0,1}^k with a caller-chosen output length.
/// Instances hold mutable library state: use one per thread (see clone()).
class ElementHasher {
 public:
  virtual ~ElementHasher() = default;
  /// Fills `out` with the first out.size() bytes of the output stream.
  virtual void hash(ByteView element, std::span<std::uint8_t> out) = 0;
  virtual std::unique_ptr<ElementHasher> clone() const = 0;
  virtual std::string name() const = 0;
};

/// BLAKE2 through OpenSSL. Outputs up to 32 bytes use BLAKE2s, up to 64 bytes
/// BLAKE2b (one call, truncated). Longer outputs concatenate
/// BLAKE2b(element || le32(i)) for i = 0, 1, ... An empty key selects the
/// unkeyed hash; keys are 1..32 bytes for BLAKE2s and 1..64 for BLAKE2b.
class Blake2Hasher final : public ElementHasher {
 public:
  Blake2Hasher(Bytes key, std::size_t output_bytes);
  ~Blake2Hasher() override;
  Blake2Hasher(const Blake2Hasher&) = delete;
  Blake2Hasher& operator=(const Blake2Hasher&) = delete;

  void hash(ByteView element, std::span<std::uint8_t> out) override;
  std::unique_ptr<ElementHasher> clone() const override;
  std::string name() const override;

  std::size_t output_bytes() const noexcept { return output_bytes_; }
  bool uses_blake2s() const noexcept { return small_; }
  const Bytes& key() const noexcept { return key_; }

 private:
  void digest_once(ByteView a, ByteView b, std::uint8_t* out);

  Bytes key_;
  std::size_t output_bytes_;
  bool small_;
  struct State;
  std::unique_ptr<State> state_;
};

/// Hash output truncated to `bits` bits in the field packing (bit i of the
/// value is bit i % 8 of byte i / 8); the unused high bits are cleared.
void truncate_to_bits(std::span<std::uint8_t> bytes, unsigned bits);

}  // namespace ecmh
