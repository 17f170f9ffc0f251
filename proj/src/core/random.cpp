#include "ecmh/random.hpp"

#include <openssl/rand.h>

#include "ecmh/error.hpp"

namespace ecmh {

std::uint64_t RandomSource::uniform(std::uint64_t bound) {
  if (bound == 0) throw ParameterError("uniform: bound must be positive");
  // Rejection sampling on the largest multiple of bound.
  const std::uint64_t limit = std::uint64_t(0) - (std::uint64_t(0) - bound) % bound;
  for (;;) {
    const std::uint64_t v = next_u64();
    if (limit == 0 || v < limit) return v % bound;
  }
}

std::uint64_t SystemRandom::next_u64() {
  if (pos_ == buffer_.size()) refill();
  return buffer_[pos_++];
}

void SystemRandom::refill() {
  if (RAND_bytes(reinterpret_cast<unsigned char*>(buffer_.data()), static_cast<int>(sizeof(buffer_))) != 1) {
    throw Error("RAND_bytes failed");
  }
  pos_ = 0;
}

}  // namespace ecmh
