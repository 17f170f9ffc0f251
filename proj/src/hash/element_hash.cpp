#include "ecmh/hash/element_hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstring>

#include "ecmh/error.hpp"

namespace ecmh {

struct Blake2Hasher::State {
  EVP_MAC* mac = nullptr;
  EVP_MAC_CTX* keyed = nullptr;  // initialized with the key; duplicated per call
  EVP_MD* md = nullptr;
  EVP_MD_CTX* fresh = nullptr;  // initialized digest context; copied per call
  EVP_MD_CTX* work = nullptr;

  ~State() {
    EVP_MAC_CTX_free(keyed);
    EVP_MAC_free(mac);
    EVP_MD_CTX_free(fresh);
    EVP_MD_CTX_free(work);
    EVP_MD_free(md);
  }
};

namespace {
[[noreturn]] void openssl_failure(const char* what) { throw InternalError(std::string("OpenSSL: ") + what); }
}  // namespace

Blake2Hasher::Blake2Hasher(Bytes key, std::size_t output_bytes)
    : key_(std::move(key)), output_bytes_(output_bytes), small_(output_bytes <= 32), state_(std::make_unique<State>()) {
  if (output_bytes_ == 0) throw ParameterError("hash output length must be positive");
  const std::size_t max_key = small_ ? 32 : 64;
  if (key_.size() > max_key) {
    throw ParameterError("key too long for " + std::string(small_ ? "BLAKE2s" : "BLAKE2b") + ": " +
                         std::to_string(key_.size()) + " > " + std::to_string(max_key) + " bytes");
  }
  State& s = *state_;
  if (key_.empty()) {
    s.md = EVP_MD_fetch(nullptr, small_ ? "BLAKE2S-256" : "BLAKE2B-512", nullptr);
    s.fresh = EVP_MD_CTX_new();
    s.work = EVP_MD_CTX_new();
    if (s.md == nullptr || s.fresh == nullptr || s.work == nullptr) openssl_failure("BLAKE2 digest unavailable");
    if (EVP_DigestInit_ex2(s.fresh, s.md, nullptr) != 1) openssl_failure("digest init");
  } else {
    s.mac = EVP_MAC_fetch(nullptr, small_ ? "BLAKE2SMAC" : "BLAKE2BMAC", nullptr);
    if (s.mac == nullptr) openssl_failure("BLAKE2 MAC unavailable");
    s.keyed = EVP_MAC_CTX_new(s.mac);
    if (s.keyed == nullptr || EVP_MAC_init(s.keyed, key_.data(), key_.size(), nullptr) != 1) openssl_failure("MAC init");
  }
}

Blake2Hasher::~Blake2Hasher() = default;

std::unique_ptr<ElementHasher> Blake2Hasher::clone() const {
  return std::make_unique<Blake2Hasher>(key_, output_bytes_);
}

std::string Blake2Hasher::name() const {
  std::string n = small_ ? "blake2s" : "blake2b";
  if (output_bytes_ > 64) n += "-ctr";
  return n + (key_.empty() ? "" : "-keyed");
}

void Blake2Hasher::digest_once(ByteView a, ByteView b, std::uint8_t* out) {
  State& s = *state_;
  if (s.keyed != nullptr) {
    EVP_MAC_CTX* ctx = EVP_MAC_CTX_dup(s.keyed);
    if (ctx == nullptr) openssl_failure("MAC dup");
    std::size_t len = 0;
    const bool ok = EVP_MAC_update(ctx, a.data(), a.size()) == 1 && (b.empty() || EVP_MAC_update(ctx, b.data(), b.size()) == 1) &&
                    EVP_MAC_final(ctx, out, &len, 64) == 1;
    EVP_MAC_CTX_free(ctx);
    if (!ok) openssl_failure("MAC");
  } else {
    unsigned len = 0;
    if (EVP_MD_CTX_copy_ex(s.work, s.fresh) != 1 || EVP_DigestUpdate(s.work, a.data(), a.size()) != 1 ||
        (!b.empty() && EVP_DigestUpdate(s.work, b.data(), b.size()) != 1) || EVP_DigestFinal_ex(s.work, out, &len) != 1) {
      openssl_failure("digest");
    }
  }
}

void Blake2Hasher::hash(ByteView element, std::span<std::uint8_t> out) {
  if (out.size() != output_bytes_) throw ParameterMismatch("hash output buffer has wrong length");
  std::array<std::uint8_t, 64> block;
  if (output_bytes_ <= 64) {
    digest_once(element, {}, block.data());
    std::memcpy(out.data(), block.data(), output_bytes_);
    return;
  }
  for (std::size_t off = 0, i = 0; off < output_bytes_; off += 64, ++i) {
    const std::array<std::uint8_t, 4> ctr{static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(i >> 8),
                                          static_cast<std::uint8_t>(i >> 16), static_cast<std::uint8_t>(i >> 24)};
    digest_once(element, ctr, block.data());
    std::memcpy(out.data() + off, block.data(), std::min<std::size_t>(64, output_bytes_ - off));
  }
}

void truncate_to_bits(std::span<std::uint8_t> bytes, unsigned bits) {
  const std::size_t full = bits / 8;
  if (bytes.size() * 8 < bits) throw ParameterMismatch("truncate_to_bits: buffer shorter than bit count");
  if (bits % 8 != 0) bytes[full] &= static_cast<std::uint8_t>((1u << (bits % 8)) - 1);
  for (std::size_t i = full + (bits % 8 != 0); i < bytes.size(); ++i) bytes[i] = 0;
}

}  // namespace ecmh
