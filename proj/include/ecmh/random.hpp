#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>

namespace ecmh {

/// Source of uniform 64-bit words for blinding and sampling.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual std::uint64_t next_u64() = 0;

  /// Uniform integer in [0, bound); bound > 0.
  std::uint64_t uniform(std::uint64_t bound);
};

/// OS-seeded CSPRNG output (OpenSSL RAND_bytes), buffered.
class SystemRandom final : public RandomSource {
 public:
  std::uint64_t next_u64() override;

 private:
  void refill();
  std::array<std::uint64_t, 512> buffer_{};
  std::size_t pos_ = buffer_.size();
};

/// Reproducible stream for tests and benchmarks. Not for blinding secrets.
class DeterministicRandom final : public RandomSource {
 public:
  explicit DeterministicRandom(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next_u64() override { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ecmh
