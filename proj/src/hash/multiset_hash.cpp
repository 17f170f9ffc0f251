#include "ecmh/hash/multiset_hash.hpp"

#include "ecmh/baselines/muhash.hpp"
#include "ecmh/baselines/security.hpp"
#include "ecmh/error.hpp"

namespace ecmh {

namespace {

template <std::size_t L>
class EcmhFront final : public MultisetHash {
 public:
  using Hash = Ecmh<L>;

  explicit EcmhFront(std::shared_ptr<const SwEncoder<L>> enc, const Bytes& key)
      : enc_(std::move(enc)), h_(std::make_unique<Hash>(enc_, key)) {}

  std::string construction() const override { return "ecmh"; }
  std::string param() const override { return h_->curve().name(); }
  double security_bits() const override { return security::ecmh_security_bits(h_->curve().subgroup_order()); }
  std::size_t digest_length() const override { return h_->digest_length(); }
  Bytes empty() const override { return h_->serialize(h_->empty()); }

  std::unique_ptr<MultisetSink> sink() const override {
    struct Sink final : MultisetSink {
      const Hash& h;
      EcmhAccumulator<L> acc;
      explicit Sink(const Hash& hash) : h(hash), acc(hash) {}
      void add(ByteView e, std::int64_t delta) override { acc.add(e, delta); }
      Bytes finish() override { return h.serialize(acc.digest()); }
    };
    return std::make_unique<Sink>(*h_);
  }

  Bytes update(ByteView digest, ByteView element, std::int64_t delta) const override {
    auto d = h_->deserialize(digest);
    h_->update(d, element, delta);
    return h_->serialize(d);
  }
  Bytes unite(ByteView a, ByteView b) const override {
    return h_->serialize(h_->unite(h_->deserialize(a), h_->deserialize(b)));
  }
  void validate(ByteView digest) const override { (void)h_->deserialize(digest); }
  std::unique_ptr<MultisetHash> thread_copy() const override {
    return std::make_unique<EcmhFront>(enc_, h_->key());
  }

 private:
  std::shared_ptr<const SwEncoder<L>> enc_;
  std::unique_ptr<Hash> h_;
};

class MuHashFront final : public MultisetHash {
 public:
  explicit MuHashFront(std::unique_ptr<MuHash> h) : h_(std::move(h)) {}

  std::string construction() const override { return "muhash"; }
  std::string param() const override { return h_->name(); }
  double security_bits() const override {
    return h_->security_bits() != 0 ? h_->security_bits() : security::muhash_security_bits(h_->modulus_bits());
  }
  std::size_t digest_length() const override { return h_->digest_length(); }
  Bytes empty() const override { return h_->serialize(h_->finalize(h_->empty())); }

  std::unique_ptr<MultisetSink> sink() const override {
    struct Sink final : MultisetSink {
      const MuHash& h;
      MuHash::State s;
      explicit Sink(const MuHash& hash) : h(hash), s(hash.empty()) {}
      void add(ByteView e, std::int64_t delta) override { apply(h, s, e, delta); }
      Bytes finish() override { return h.serialize(h.finalize(s)); }
    };
    return std::make_unique<Sink>(*h_);
  }

  Bytes update(ByteView digest, ByteView element, std::int64_t delta) const override {
    MuHash::State s = h_->from_residue(h_->deserialize(digest));
    apply(*h_, s, element, delta);
    return h_->serialize(h_->finalize(s));
  }
  Bytes unite(ByteView a, ByteView b) const override {
    const auto s = h_->combine(h_->from_residue(h_->deserialize(a)), h_->from_residue(h_->deserialize(b)));
    return h_->serialize(h_->finalize(s));
  }
  void validate(ByteView digest) const override { (void)h_->deserialize(digest); }
  std::unique_ptr<MultisetHash> thread_copy() const override {
    return std::make_unique<MuHashFront>(h_->thread_copy());
  }

 private:
  static void apply(const MuHash& h, MuHash::State& s, ByteView e, std::int64_t delta) {
    if (delta == 0) throw InvalidUpdate("multiplicity change must be nonzero");
    const auto x = h.element(e);
    for (std::int64_t i = 0; i < delta; ++i) h.insert_residue(s, x);
    for (std::int64_t i = 0; i > delta; --i) h.remove_residue(s, x);
  }
  std::unique_ptr<MuHash> h_;
};

class AdHashFront final : public MultisetHash {
 public:
  explicit AdHashFront(std::unique_ptr<AdHash> h) : h_(std::move(h)) {}

  std::string construction() const override { return "adhash"; }
  std::string param() const override { return h_->name(); }
  double security_bits() const override { return security::adhash_set_security_bits(h_->bits()); }
  std::size_t digest_length() const override { return h_->digest_length(); }
  Bytes empty() const override { return h_->serialize(h_->empty()); }

  std::unique_ptr<MultisetSink> sink() const override {
    struct Sink final : MultisetSink {
      const AdHash& h;
      AdHash::Limbs acc;
      explicit Sink(const AdHash& hash) : h(hash), acc(hash.empty()) {}
      void add(ByteView e, std::int64_t delta) override { h.update(acc, e, delta); }
      Bytes finish() override { return h.serialize(acc); }
    };
    return std::make_unique<Sink>(*h_);
  }

  Bytes update(ByteView digest, ByteView element, std::int64_t delta) const override {
    auto acc = h_->deserialize(digest);
    h_->update(acc, element, delta);
    return h_->serialize(acc);
  }
  Bytes unite(ByteView a, ByteView b) const override {
    return h_->serialize(h_->combine(h_->deserialize(a), h_->deserialize(b)));
  }
  void validate(ByteView digest) const override { (void)h_->deserialize(digest); }
  std::unique_ptr<MultisetHash> thread_copy() const override {
    return std::make_unique<AdHashFront>(h_->thread_copy());
  }

 private:
  std::unique_ptr<AdHash> h_;
};

template <std::size_t L>
std::unique_ptr<MultisetHash> make_ecmh(const std::string& curve, const Bytes& key) {
  auto c = std::make_shared<const BinaryCurve<L>>(BinaryCurve<L>::from_registry(curve));
  auto enc = std::make_shared<const SwEncoder<L>>(SwEncoder<L>::for_registry_curve(c));
  return std::make_unique<EcmhFront<L>>(std::move(enc), key);
}

}  // namespace

std::unique_ptr<MultisetHash> make_multiset_hash(const std::string& construction, const std::string& param,
                                                 const Bytes& key) {
  const Registry& reg = Registry::instance();
  if (construction == "ecmh") {
    const unsigned m = reg.field(reg.curve(param).field).degree;
    switch ((m + 63) / 64) {
      case 1: return make_ecmh<1>(param, key);
      case 2: return make_ecmh<2>(param, key);
      case 3: return make_ecmh<3>(param, key);
      case 4: return make_ecmh<4>(param, key);
      case 5: return make_ecmh<5>(param, key);
      default: throw Unsupported("curve " + param + ": field degree " + std::to_string(m) + " above 320 bits");
    }
  }
  if (construction == "muhash") return std::make_unique<MuHashFront>(std::make_unique<MuHash>(MuHash::from_registry(param, key)));
  if (construction == "adhash") return std::make_unique<AdHashFront>(std::make_unique<AdHash>(AdHash::from_registry(param, key)));
  throw ParameterError("unknown construction: " + construction + " (expected ecmh, muhash or adhash)");
}

}  // namespace ecmh
