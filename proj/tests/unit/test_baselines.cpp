#include <cmath>
#include <random>

#include "doctest.h"
#include "ecmh/baselines/muhash.hpp"
#include "ecmh/baselines/security.hpp"
#include "support.hpp"

using namespace ecmh;
using namespace test_support;

namespace {

const mpz_class kSmallPrime = 65521;  // largest prime below 2^16

Bytes random_element(std::mt19937_64& rng) {
  Bytes e(rng() % 40);
  for (auto& b : e) b = static_cast<std::uint8_t>(rng());
  return e;
}

mpz_class inverse_mod(const mpz_class& a, const mpz_class& p) {
  mpz_class r;
  REQUIRE(mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()) != 0);
  return r;
}

// Naive running product against the triplet state, checked after every op.
void check_against_naive(const MuHash& h, int ops, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const mpz_class& p = h.modulus();
  auto s = h.empty();
  mpz_class naive = 1;
  std::vector<Bytes> inserted;
  for (int i = 0; i < ops; ++i) {
    const bool remove = !inserted.empty() && rng() % 3 == 0;
    const Bytes e = remove ? inserted[rng() % inserted.size()] : random_element(rng);
    const mpz_class x = h.element_value(e);
    if (remove) {
      h.remove(s, e);
      naive = naive * inverse_mod(x, p) % p;
    } else {
      h.insert(s, e);
      inserted.push_back(e);
      naive = naive * x % p;
    }
    REQUIRE(h.finalize(s) == naive);
  }
}

}  // namespace

TEST_CASE("MuHash basics") {
  const MuHash h(kSmallPrime, Bytes{1});
  CHECK(h.modulus_bits() == 16);
  CHECK(h.finalize(h.empty()) == 1);
  auto s = h.empty();
  const Bytes e = {'q'};
  h.insert(s, e);
  h.remove(s, e);
  CHECK(h.finalize(s) == 1);
  CHECK(h.element(e) == h.element(e));
  CHECK(h.serialize(1) == Bytes{0, 1});
  CHECK(h.deserialize(Bytes{0xff, 0xf0}) == 65520);
  CHECK_THROWS_AS(h.deserialize(Bytes{0, 0}), InvalidEncoding);
  CHECK_THROWS_AS(h.deserialize(Bytes{0xff, 0xf1}), InvalidEncoding);
  CHECK_THROWS_AS(h.deserialize(Bytes{1}), InvalidEncoding);
  CHECK_THROWS_AS(MuHash(mpz_class(65535), Bytes{}), ParameterError);
  CHECK_THROWS_AS(MuHash(mpz_class(2), Bytes{}), ParameterError);
}

TEST_CASE("MuHash matches the naive oracle on a small prime") {
  check_against_naive(MuHash(kSmallPrime, Bytes{3, 1, 4}), 10000, 1);
}

TEST_CASE("MuHash matches the naive oracle on registry primes") {
  for (const char* name : {"p1024", "p2048", "p3072"}) {
    const MuHash h = MuHash::from_registry(name, Bytes{});
    INFO(name);
    CHECK(mpz_probab_prime_p(h.modulus().get_mpz_t(), 30) != 0);
    check_against_naive(h, 300, 2);
  }
}

TEST_CASE("MuHash Montgomery multiply and triplet algebra") {
  std::mt19937_64 rng(8);
  const MuHash h = MuHash::from_registry("p2048", Bytes{});
  const mpz_class& p = h.modulus();
  const mpz_class r = mpz_class(1) << static_cast<unsigned>(64 * h.limb_count());
  const mpz_class r_inv = inverse_mod(r, p);
  gmp_randclass gr(gmp_randinit_default);
  gr.seed(5);
  for (int i = 0; i < 200; ++i) {
    const mpz_class a = gr.get_z_range(p);
    const mpz_class b = gr.get_z_range(p);
    MuHash::Limbs out(h.limb_count());
    h.redc_mul(out.data(), h.to_limbs(a).data(), h.to_limbs(b).data());
    CHECK(h.to_mpz(out) == a * b * r_inv % p);
  }
  // combine and from_residue
  auto s1 = h.empty();
  auto s2 = h.empty();
  for (int i = 0; i < 20; ++i) h.insert(s1, random_element(rng));
  for (int i = 0; i < 20; ++i) h.remove(s2, random_element(rng));
  const mpz_class v = h.finalize(h.combine(s1, s2));
  CHECK(v == h.finalize(s1) * h.finalize(s2) % p);
  CHECK(h.finalize(h.from_residue(v)) == v);
  CHECK(h.deserialize(h.serialize(v)) == v);
}

TEST_CASE("MuHash element range and distribution") {
  const MuHash h(kSmallPrime, Bytes{0x5a});
  std::mt19937_64 rng(11);
  // exact target distribution: hash values are uniform on [0, 2^16), reduced once, 0 -> 1
  std::vector<double> weight(65521, 0.0);
  for (std::uint32_t v = 0; v < 65536; ++v) {
    std::uint32_t r = v >= 65521 ? v - 65521 : v;
    if (r == 0) r = 1;
    weight[r] += 1.0 / 65536;
  }
  constexpr int kBuckets = 256;
  std::vector<double> expect(kBuckets, 0.0);
  for (std::uint32_t v = 0; v < 65521; ++v) expect[v * kBuckets / 65521] += weight[v];
  std::vector<long> seen(kBuckets, 0);
  constexpr int kSamples = 1000000;
  std::uint8_t buf[8];
  for (int i = 0; i < kSamples; ++i) {
    for (int j = 0; j < 8; ++j) buf[j] = static_cast<std::uint8_t>(i >> (8 * (j % 4)) ^ j);
    const auto x = h.element(ByteView(buf, 8))[0];
    REQUIRE(x >= 1);
    REQUIRE(x < 65521);
    ++seen[x * kBuckets / 65521];
  }
  double chi2 = 0;
  for (int b = 0; b < kBuckets; ++b) {
    const double e = expect[b] * kSamples;
    chi2 += (seen[b] - e) * (seen[b] - e) / e;
  }
  // df = 255: mean 255, sd ~22.6; reject beyond ~5 sd
  CHECK(chi2 < 370);

  const MuHash big = MuHash::from_registry("p1024", Bytes{});
  for (int i = 0; i < 100000; ++i) {
    const auto x = big.element_value(random_element(rng));
    REQUIRE(x >= 1);
    REQUIRE(x < big.modulus());
  }
}

TEST_CASE("AdHash matches a big-integer sum") {
  std::mt19937_64 rng(21);
  for (unsigned n : {8u, 128u, 200u, 512u, 4096u}) {
    const AdHash h(n, Bytes{7, 7});
    INFO(n);
    const mpz_class mod = mpz_class(1) << n;
    auto acc = h.empty();
    mpz_class naive = 0;
    for (int i = 0; i < 500; ++i) {
      const Bytes e = random_element(rng);
      std::int64_t delta = static_cast<std::int64_t>(rng() % 9) - 4;
      if (delta == 0) delta = i % 2 ? (std::int64_t{1} << 40) : -(std::int64_t{1} << 62);
      h.update(acc, e, delta);
      naive += mpz_class(std::to_string(delta)) * h.element_value(e);
      naive %= mod;
      if (naive < 0) naive += mod;
      REQUIRE(h.to_mpz(acc) == naive);
    }
    CHECK(h.deserialize(h.serialize(acc)) == acc);
    CHECK(h.serialize(acc).size() == n / 8);
    const auto before = acc;
    h.update(acc, Bytes{1}, 1);
    h.update(acc, Bytes{1}, -1);
    CHECK(acc == before);
    CHECK_THROWS_AS(h.update(acc, Bytes{1}, 0), InvalidUpdate);
    CHECK_THROWS_AS(h.deserialize(Bytes(n / 8 + 1)), InvalidEncoding);
  }
  CHECK(to_hex(AdHash(16, {}).serialize({0x1234})) == "1234");
  CHECK_THROWS_AS(AdHash(12, {}), ParameterError);
  CHECK_THROWS_AS(AdHash(0, {}), ParameterError);
  CHECK(AdHash::from_registry("n1600", {}).bits() == 1600);
  CHECK(AdHash::from_registry("n24", {}).bits() == 24);
}

TEST_CASE("security sizing functions agree with the registry") {
  const auto& reg = Registry::instance();
  for (const auto& name : reg.muhash_names()) {
    const auto& rec = reg.muhash(name);
    const unsigned bits = static_cast<unsigned>(MuHash::from_registry(name, {}).modulus_bits());
    INFO(name);
    CHECK(std::abs(security::muhash_security_bits(bits) - rec.security_bits) <= 5.0);
  }
  CHECK(security::muhash_security_bits(1024) == doctest::Approx(80.0));
  // a 128-bit target lands near the 3000-3200 bit range of the usual tables
  const unsigned p128 = security::muhash_modulus_bits_for(128);
  CHECK(p128 >= 2816);
  CHECK(p128 <= 3328);
  CHECK(security::nfs_log2_cost(2048) > security::nfs_log2_cost(1024));

  CHECK(security::adhash_set_security_bits(1600) == doctest::Approx(80.0));
  CHECK(security::adhash_bits_for(128) == 4096);
  CHECK(security::adhash_bits_for(80) == 1600);

  CHECK(security::ecmh_security_bits(sect163k1().subgroup_order()) == doctest::Approx(81.0).epsilon(0.01));
  CHECK(security::ecmh_security_bits(sect233k1().subgroup_order()) == doctest::Approx(115.5).epsilon(0.01));
  CHECK(security::ecmh_security_bits(mpz_class(1) << 200) == doctest::Approx(100.0));
}
