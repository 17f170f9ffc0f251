#include <algorithm>
#include <random>

#include "doctest.h"
#include "ecmh/hash/ecmh.hpp"
#include "ecmh/hash/grothendieck.hpp"
#include "ecmh/hash/multiset_hash.hpp"
#include "support.hpp"

using namespace ecmh;
using namespace test_support;

namespace {

Bytes hex_or_empty(const std::string& s) { return s == "-" ? Bytes{} : from_hex(s); }

template <std::size_t L>
std::shared_ptr<const SwEncoder<L>> shared_encoder(const char* curve) {
  using C = BinaryCurve<L>;
  return std::make_shared<const SwEncoder<L>>(SwEncoder<L>::for_registry_curve(shared_curve<C>(curve)));
}

std::vector<UpdateOp> random_ops(std::mt19937_64& rng, std::size_t count) {
  std::vector<UpdateOp> ops;
  for (std::size_t i = 0; i < count; ++i) {
    UpdateOp op;
    op.element.resize(rng() % 65);
    for (auto& b : op.element) b = static_cast<std::uint8_t>(rng());
    do op.delta = static_cast<std::int64_t>(rng() % 11) - 5; while (op.delta == 0);
    ops.push_back(std::move(op));
  }
  return ops;
}

std::vector<UpdateOp> parse_ops(const std::string& spec) {
  std::vector<UpdateOp> ops;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t end = spec.find(',', pos);
    if (end == std::string::npos) end = spec.size();
    const std::string item = spec.substr(pos, end - pos);
    const std::size_t colon = item.find(':');
    ops.push_back({from_hex(item.substr(0, colon)), std::stoll(item.substr(colon + 1))});
    pos = end + 1;
  }
  return ops;
}

template <std::size_t L>
void check_properties(const char* curve) {
  using H = Ecmh<L>;
  const H h(shared_encoder<L>(curve), from_hex("000102030405060708090a0b0c0d0e0f"));
  const auto& c = h.curve();
  std::mt19937_64 rng(1234);

  // identity
  const auto e = h.empty();
  CHECK(h.serialize(e) == c.compress(c.identity()));
  CHECK(h.hash_multiset({}) .point().kind == PointKind::identity);

  // singleton
  const Bytes a = {'a'};
  UpdateOp single{a, 1};
  CHECK(h.serialize(h.hash_multiset(std::span(&single, 1))) == c.compress(h.hash_element_to_curve(a)));

  // homomorphism, union identity and commutativity
  for (int trial = 0; trial < 20; ++trial) {
    const auto m1 = random_ops(rng, 1 + rng() % 20);
    const auto m2 = random_ops(rng, 1 + rng() % 20);
    auto both = m1;
    both.insert(both.end(), m2.begin(), m2.end());
    const auto d1 = h.hash_multiset(m1);
    const auto d2 = h.hash_multiset(m2);
    CHECK(h.equal(h.unite(d1, d2), h.hash_multiset(both)));
    CHECK(h.equal(h.unite(d1, d2), h.unite(d2, d1)));
    CHECK(h.equal(h.unite(d1, e), d1));
    CHECK(h.equal(h.unite(d1, h.negate(d1)), e));
  }

  // inverse updates
  auto d = h.hash_multiset(random_ops(rng, 10));
  const auto before = h.serialize(d);
  h.update(d, a, 1);
  h.update(d, a, -1);
  CHECK(h.serialize(d) == before);

  // permutations of 100 ops give byte-identical serializations
  auto ops = random_ops(rng, 100);
  const Bytes ref = h.serialize(h.hash_multiset_incremental(ops));
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(ops.begin(), ops.end(), rng);
    CHECK(h.serialize(h.hash_multiset(ops, 1 + rng() % 40)) == ref);
  }

  // repeated insertion
  auto k7 = h.empty();
  h.update(k7, a, 7);
  auto folded = h.empty();
  for (int i = 0; i < 7; ++i) h.update(folded, a, 1);
  CHECK(h.equal(k7, folded));
  CHECK(h.serialize(k7) == h.serialize(folded));

  // batch == incremental == blinded on 1000 elements
  const auto big = random_ops(rng, 1000);
  DeterministicRandom blind(5);
  const auto inc = h.serialize(h.hash_multiset_incremental(big));
  CHECK(h.serialize(h.hash_multiset(big)) == inc);
  CHECK(h.serialize(h.hash_multiset(big, 256, &blind)) == inc);
  EcmhAccumulator<L> acc(h, 64);
  for (const auto& op : big) acc.add(op.element, op.delta);
  CHECK(h.serialize(acc.digest()) == inc);

  // round trip
  const auto r = h.deserialize(h.serialize(d));
  CHECK(h.equal(r, d));
  CHECK(h.serialize(r).size() == h.digest_length());

  CHECK_THROWS_AS(h.update(d, a, 0), InvalidUpdate);
  const H other(shared_encoder<L>(curve), Bytes{});
  CHECK_THROWS_AS(h.unite(d, other.empty()), ParameterMismatch);
  CHECK_THROWS_AS(other.serialize(d), ParameterMismatch);
  const H same_key(shared_encoder<L>(curve), h.key());
  CHECK(h.equal(same_key.empty(), e));
}

/// Monoid over integers that counts calls, to pin the wrapper's overhead.
struct CountingMonoid {
  using Digest = long long;
  mutable int inserts = 0;
  mutable int combines = 0;
  Digest empty() const { return 0; }
  void insert(Digest& d, long long e) const {
    ++inserts;
    d += e;
  }
  Digest combine(const Digest& a, const Digest& b) const {
    ++combines;
    return a + b;
  }
  bool equal(const Digest& a, const Digest& b) const { return a == b; }
};

}  // namespace

TEST_CASE("BLAKE2 matches RFC 7693 abc vectors") {
  const auto abc = as_bytes("abc");
  Bytes out(32);
  Blake2Hasher s({}, 32);
  s.hash(abc, out);
  CHECK(to_hex(out) == "508c5e8c327c14e2e1a72ba34eeb452f37458b209ed63a294d999b4c86675982");
  Blake2Hasher b({}, 64);
  out.resize(64);
  b.hash(abc, out);
  CHECK(to_hex(out) ==
        "ba80a53f981c4d0d6a2797b69f12f6e94c212f14685ac4b74b12bb6fdbffa2d17d87c5392aab792dc252d5de4533cc95"
        "18d38aa8dbf1925ab92386edd4009923");
  CHECK(s.uses_blake2s());
  CHECK_FALSE(b.uses_blake2s());
}

TEST_CASE("element hash known answers") {
  const auto rows = read_rows("golden/element_hash.txt");
  int field_rows = 0, raw_rows = 0;
  const Ecmh<1> h13(shared_encoder<1>("toy13"), {});
  const Ecmh<3> h163(shared_encoder<3>("sect163k1"), {});
  const Ecmh<4> h233(shared_encoder<4>("sect233k1"), {});
  for (const auto& r : rows) {
    const Bytes key = hex_or_empty(r[1]);
    const Bytes data = hex_or_empty(r[2]);
    if (r[0] == "raw") {
      Blake2Hasher hs(key, std::stoul(r[3]));
      Bytes out(std::stoul(r[3]));
      hs.hash(data, out);
      CHECK(to_hex(out) == r[4]);
      ++raw_rows;
    } else if (r[0] == "13") {
      CHECK(gf13().to_hex(Ecmh<1>(shared_encoder<1>("toy13"), key).element_hash(data)) == r[3]);
      ++field_rows;
    } else if (r[0] == "163") {
      CHECK(gf163().to_hex(Ecmh<3>(shared_encoder<3>("sect163k1"), key).element_hash(data)) == r[3]);
      ++field_rows;
    } else {
      CHECK(gf233().to_hex(Ecmh<4>(shared_encoder<4>("sect233k1"), key).element_hash(data)) == r[3]);
      ++field_rows;
    }
  }
  CHECK(field_rows == 24);
  CHECK(raw_rows == 10);
  CHECK(h13.hasher_name() == "blake2s");
  CHECK(h233.hasher_name() == "blake2s");
}

TEST_CASE("element hash is deterministic and keyed") {
  std::mt19937_64 rng(77);
  const auto enc = shared_encoder<4>("sect233k1");
  const Bytes element = {'e'};
  const Ecmh<4> fixed(enc, Bytes{9});
  CHECK(fixed.element_hash(element) == fixed.element_hash(element));
  int differ = 0;
  for (int i = 0; i < 100; ++i) {
    Bytes k1(16), k2(16);
    for (auto& b : k1) b = static_cast<std::uint8_t>(rng());
    k2 = k1;
    k2[rng() % 16] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    differ += Ecmh<4>(enc, k1).element_hash(element) != Ecmh<4>(enc, k2).element_hash(element);
  }
  CHECK(differ == 100);
  CHECK_THROWS_AS(Blake2Hasher(Bytes(33, 1), 32), ParameterError);
  CHECK_NOTHROW(Blake2Hasher(Bytes(64, 1), 48));
  CHECK_THROWS_AS(Blake2Hasher(Bytes{}, 0), ParameterError);
  std::uint8_t buf[3] = {0xff, 0xff, 0xff};
  truncate_to_bits(buf, 13);
  CHECK(buf[0] == 0xff);
  CHECK(buf[1] == 0x1f);
  CHECK(buf[2] == 0);
}

TEST_CASE("digests match the independent oracle") {
  const auto rows = read_rows("golden/digests.txt");
  REQUIRE(rows.size() == 42);
  for (const auto& r : rows) {
    const auto h = make_multiset_hash(r[0], r[1], hex_or_empty(r[2]));
    const auto ops = parse_ops(r[3]);
    INFO(r[0] << " " << r[1] << " " << r[3]);
    CHECK(to_hex(h->hash(ops)) == r[4]);
  }
}

TEST_CASE("ECMH properties on toy13") { check_properties<1>("toy13"); }
TEST_CASE("ECMH properties on sect163k1") { check_properties<3>("sect163k1"); }
TEST_CASE("ECMH properties on sect233k1") { check_properties<4>("sect233k1"); }

TEST_CASE("type-erased front end") {
  std::mt19937_64 rng(4);
  const Bytes key = {1, 2, 3};
  for (const char* spec : {"ecmh:toy13", "ecmh:sect163k1", "ecmh:sect233k1", "muhash:p1024", "adhash:n128", "adhash:n4096"}) {
    const std::string s(spec);
    const auto colon = s.find(':');
    const auto h = make_multiset_hash(s.substr(0, colon), s.substr(colon + 1), key);
    INFO(spec);
    CHECK(h->empty().size() == h->digest_length());
    const auto m1 = random_ops(rng, 30);
    const auto m2 = random_ops(rng, 30);
    auto both = m1;
    both.insert(both.end(), m2.begin(), m2.end());
    const Bytes d1 = h->hash(m1);
    const Bytes d2 = h->hash(m2);
    CHECK(h->unite(d1, d2) == h->hash(both));
    CHECK(h->equal(h->unite(d1, h->empty()), d1));
    const Bytes up = h->update(d1, m2[0].element, 3);
    CHECK(h->update(up, m2[0].element, -3) == d1);
    CHECK(h->thread_copy()->hash(m1) == d1);
    CHECK(h->security_bits() > 0);
  }
  const auto e = make_multiset_hash("ecmh", "toy13", key);
  const auto m = make_multiset_hash("muhash", "p1024", key);
  CHECK_THROWS_AS(e->validate(m->empty()), InvalidEncoding);
  CHECK_THROWS_AS(m->validate(Bytes(m->digest_length(), 0)), InvalidEncoding);
  CHECK_THROWS_AS(make_multiset_hash("ecmh", "nosuch", key), ParameterError);
  CHECK_THROWS_AS(make_multiset_hash("sha", "toy13", key), ParameterError);
  CHECK_THROWS_AS(make_multiset_hash("adhash", "n12", key), ParameterError);
}

TEST_CASE("Grothendieck wrapper") {
  const Ecmh<1> h(shared_encoder<1>("toy13"), Bytes{7});
  const InsertOnly<Ecmh<1>> add_only(h);
  const Grothendieck<InsertOnly<Ecmh<1>>> g(add_only);
  const Bytes a = {'a'};

  auto w = g.empty();
  g.insert(w, a);
  g.remove(w, a);
  CHECK(g.equal(w, g.empty()));

  std::mt19937_64 rng(99);
  for (int seq = 0; seq < 100; ++seq) {
    auto native = h.empty();
    auto wrapped = g.empty();
    for (int i = 0; i < 12; ++i) {
      const Bytes e = {static_cast<std::uint8_t>(rng() % 6)};
      const bool ins = rng() % 2;
      h.update(native, e, ins ? 1 : -1);
      ins ? g.insert(wrapped, e) : g.remove(wrapped, e);
    }
    CHECK(h.equal(native, h.unite(wrapped.pos, h.negate(wrapped.neg))));
    // compare against a wrapped value built in a different order
    auto other = g.empty();
    g.insert(other, Bytes{'z'});
    g.remove(other, Bytes{'z'});
    CHECK(g.equal(g.combine(wrapped, other), wrapped));
  }

  CountingMonoid cm;
  const Grothendieck<CountingMonoid> gc(cm);
  auto x = gc.empty();
  auto y = gc.empty();
  static_assert(sizeof(decltype(x)) == 2 * sizeof(CountingMonoid::Digest));
  gc.insert(x, 5);
  gc.remove(x, 3);
  CHECK(cm.inserts == 2);
  gc.insert(y, 2);
  cm.combines = 0;
  CHECK(gc.equal(x, y));
  CHECK(cm.combines == 2);
  cm.combines = 0;
  (void)gc.combine(x, y);
  CHECK(cm.combines == 2);
}
