#include "ecmh/field/binary_field.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "ecmh/error.hpp"

namespace ecmh {

namespace detail {

std::uint64_t& inversion_counter() noexcept {
  thread_local std::uint64_t count = 0;
  return count;
}

namespace {

// Dense GF(2)[z] polynomials for the registration-time irreducibility test.
using Poly = std::vector<std::uint64_t>;

int poly_degree(const Poly& p) {
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] != 0) return static_cast<int>(64 * i + 63 - std::countl_zero(p[i]));
  }
  return -1;
}

void poly_xor_shifted(Poly& dst, const Poly& src, unsigned shift) {
  const std::size_t words = shift / 64;
  const unsigned bits = shift % 64;
  if (dst.size() < src.size() + words + 1) dst.resize(src.size() + words + 1, 0);
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i + words] ^= src[i] << bits;
    if (bits != 0) dst[i + words + 1] ^= src[i] >> (64 - bits);
  }
}

Poly poly_mod(Poly a, const Poly& b) {
  const int db = poly_degree(b);
  for (int da = poly_degree(a); da >= db; da = poly_degree(a)) poly_xor_shifted(a, b, static_cast<unsigned>(da - db));
  return a;
}

Poly poly_gcd(Poly a, Poly b) {
  while (poly_degree(b) >= 0) {
    Poly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<unsigned> prime_divisors(unsigned n) {
  std::vector<unsigned> out;
  for (unsigned d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace
}  // namespace detail

template <std::size_t Limbs>
BinaryField<Limbs>::BinaryField(FieldParams params) : params_(std::move(params)), degree_(params_.degree) {
  validate_params();

  std::vector<unsigned> terms = params_.reduction_terms;
  std::sort(terms.begin(), terms.end(), std::greater<>());
  term_count_ = terms.size();
  std::copy(terms.begin(), terms.end(), terms_.begin());
  for (std::size_t k = 0; k < term_count_; ++k) {
    const unsigned d = degree_ - terms_[k];
    folds_[k] = Fold{d / 64, d % 64};
    self_fold_ = self_fold_ || d < 64;
  }
  const auto shape = std::make_pair(degree_, terms);
  if (Limbs == 1 && shape == std::make_pair(13u, std::vector<unsigned>{4, 3, 1, 0})) kernel_ = Kernel::k13;
  if (Limbs == 3 && shape == std::make_pair(163u, std::vector<unsigned>{7, 6, 3, 0})) kernel_ = Kernel::k163;
  if (Limbs == 4 && shape == std::make_pair(233u, std::vector<unsigned>{74, 0})) kernel_ = Kernel::k233;

  for (unsigned i = degree_; i < 64 * Limbs; ++i) high_mask_.flip_bit(i);

  if (!reduction_polynomial_irreducible()) {
    throw ParameterError("field " + params_.name + ": reduction polynomial is not irreducible");
  }

  // Tr is linear; bit i of the mask is Tr(z^i).
  for (unsigned i = 0; i < degree_; ++i) {
    Element zi{};
    zi.flip_bit(i);
    if (trace_by_definition(zi)) trace_mask_.flip_bit(i);
  }

  const unsigned beta = params_.table_block_bits;
  const auto basis = [](unsigned i) {
    Element e{};
    e.flip_bit(i);
    return e;
  };
  for (unsigned k : params_.table_multi_squares) {
    multi_square_tables_.emplace(
        k, LinearTable<Limbs>(degree_, beta, [&](unsigned i) { return multi_square_iterated(basis(i), k); }));
  }
  sqrt_table_ = LinearTable<Limbs>(degree_, beta, [&](unsigned i) { return multi_square_iterated(basis(i), degree_ - 1); });
  if (degree_ % 2 == 1) {
    // Half-trace solves r^2 + r = a for trace-0 a when m is odd. Clearing
    // coefficient 0 picks the canonical root and keeps the map linear.
    qs_table_ = LinearTable<Limbs>(degree_, beta, [&](unsigned i) {
      Element r = half_trace(basis(i));
      if (coeff0(r)) r.flip_bit(0);
      return r;
    });
  }

  // Itoh-Tsujii: beta_k = a^(2^k - 1); beta_{i+j} = beta_i^(2^j) * beta_j.
  const auto& chain = params_.inversion_chain;
  for (std::size_t n = 1; n < chain.size(); ++n) {
    bool found = false;
    for (std::size_t i = 0; i < n && !found; ++i) {
      for (std::size_t j = 0; j <= i && !found; ++j) {
        if (chain[i] + chain[j] == chain[n]) {
          const auto table = multi_square_tables_.find(chain[j]);
          chain_steps_.push_back(
              ChainStep{i, j, chain[j], table == multi_square_tables_.end() ? nullptr : &table->second});
          found = true;
        }
      }
    }
    if (!found) {
      throw ParameterError("field " + params_.name + ": inversion chain entry " + std::to_string(chain[n]) +
                           " is not a sum of two earlier entries");
    }
  }
}

template <std::size_t Limbs>
void BinaryField<Limbs>::validate_params() const {
  const auto fail = [&](const std::string& what) { throw ParameterError("field " + params_.name + ": " + what); };
  if (degree_ < 2) fail("degree must be at least 2");
  if (degree_ > 64 * Limbs) fail("degree exceeds limb capacity");
  const auto& terms = params_.reduction_terms;
  if (terms.empty() || terms.size() > 8) fail("reduction polynomial needs 1 to 8 lower terms");
  if (std::find(terms.begin(), terms.end(), 0u) == terms.end()) fail("reduction polynomial must have a constant term");
  for (unsigned t : terms) {
    if (t >= degree_) fail("reduction term " + std::to_string(t) + " is not below the degree");
  }
  std::vector<unsigned> sorted = terms;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) fail("duplicate reduction term");
  const auto& chain = params_.inversion_chain;
  if (chain.empty() || chain.front() != 1 || chain.back() != degree_ - 1) {
    fail("inversion chain must run from 1 to degree - 1");
  }
  if (chain.size() > 32) fail("inversion chain longer than 32 entries");
  if (!std::is_sorted(chain.begin(), chain.end()) ||
      std::adjacent_find(chain.begin(), chain.end()) != chain.end()) {
    fail("inversion chain must be strictly increasing");
  }
  if (params_.table_block_bits < 1 || params_.table_block_bits > 16) fail("table block bits must be in [1, 16]");
  for (unsigned k : params_.table_multi_squares) {
    if (k == 0 || k >= degree_) fail("multi-square table amount out of range");
  }
}

template <std::size_t Limbs>
bool BinaryField<Limbs>::reduction_polynomial_irreducible() const {
  // Rabin: f of degree m is irreducible iff z^(2^m) = z mod f and
  // gcd(z^(2^(m/q)) - z, f) = 1 for every prime q dividing m.
  if (multi_square_iterated(z(), degree_) != z()) return false;
  detail::Poly f(Limbs + 1, 0);
  f[degree_ / 64] |= std::uint64_t{1} << (degree_ % 64);
  for (unsigned t : params_.reduction_terms) f[t / 64] |= std::uint64_t{1} << (t % 64);
  for (unsigned q : detail::prime_divisors(degree_)) {
    Element v = multi_square_iterated(z(), degree_ / q) ^ z();
    detail::Poly p(v.limbs.begin(), v.limbs.end());
    if (detail::poly_degree(detail::poly_gcd(f, p)) != 0) return false;
  }
  return true;
}

template <std::size_t Limbs>
void BinaryField<Limbs>::validate(const Element& a) const {
  if (!is_valid(a)) throw ParameterMismatch("element has coefficients beyond degree " + std::to_string(degree_));
}

template <std::size_t Limbs>
bool BinaryField<Limbs>::is_valid(const Element& a) const noexcept {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < Limbs; ++i) acc |= a.limbs[i] & high_mask_.limbs[i];
  return acc == 0;
}

template <std::size_t Limbs>
auto BinaryField<Limbs>::multi_square(const Element& a, unsigned k) const -> Element {
  if (k == 0) return a;
  const auto it = multi_square_tables_.find(k);
  if (it != multi_square_tables_.end()) return it->second.apply(a);
  return multi_square_iterated(a, k);
}

template <std::size_t Limbs>
auto BinaryField<Limbs>::invert(const Element& a) const -> Element {
  if (a.is_zero()) throw DivisionByZero("inverse of zero");
  ++detail::inversion_counter();
  std::array<Element, 32> powers;
  powers[0] = a;
  for (std::size_t n = 0; n < chain_steps_.size(); ++n) {
    const ChainStep& s = chain_steps_[n];
    const Element lifted = s.table ? s.table->apply(powers[s.base]) : multi_square_iterated(powers[s.base], s.shift);
    powers[n + 1] = mul(lifted, powers[s.other]);
  }
  // a^(2^(m-1) - 1) squared is a^(2^m - 2) = a^-1.
  return square(powers[chain_steps_.size()]);
}

template <std::size_t Limbs>
void BinaryField<Limbs>::batch_invert(std::span<const Element> in, std::span<Element> out) const {
  if (in.size() != out.size()) throw ParameterMismatch("batch_invert: output size differs from input size");
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i].is_zero()) throw ZeroElementInBatch(i);
  }
  if (in.empty()) return;
  // out[i] holds the prefix product in[0] * ... * in[i] until the back-substitution.
  out[0] = in[0];
  for (std::size_t i = 1; i < in.size(); ++i) out[i] = mul(out[i - 1], in[i]);
  Element acc = invert(out[in.size() - 1]);
  for (std::size_t i = in.size() - 1; i > 0; --i) {
    out[i] = mul(acc, out[i - 1]);
    acc = mul(acc, in[i]);
  }
  out[0] = acc;
}

template <std::size_t Limbs>
void BinaryField<Limbs>::blinded_batch_invert(std::span<const Element> in, std::span<Element> out,
                                              RandomSource& rng) const {
  if (in.size() != out.size()) throw ParameterMismatch("batch_invert: output size differs from input size");
  if (in.empty()) return;
  out[0] = in[0];
  for (std::size_t i = 1; i < in.size(); ++i) out[i] = mul(out[i - 1], in[i]);
  Element acc = blinded_invert(out[in.size() - 1], rng);
  for (std::size_t i = in.size() - 1; i > 0; --i) {
    out[i] = mul(acc, out[i - 1]);
    acc = mul(acc, in[i]);
  }
  out[0] = acc;
}

template <std::size_t Limbs>
auto BinaryField<Limbs>::batch_invert(std::span<const Element> in) const -> std::vector<Element> {
  std::vector<Element> out(in.size());
  batch_invert(in, out);
  return out;
}

template <std::size_t Limbs>
auto BinaryField<Limbs>::blinded_invert(const Element& a, RandomSource& rng) const -> Element {
  if (a.is_zero()) throw DivisionByZero("inverse of zero");
  const Element r = random_nonzero(rng);
  return mul(invert(mul(r, a)), r);
}

template <std::size_t Limbs>
bool BinaryField<Limbs>::trace_by_definition(const Element& a) const {
  Element acc{};
  Element x = a;
  for (unsigned i = 0; i < degree_; ++i) {
    acc ^= x;
    x = square(x);
  }
  if (acc != zero() && acc != one()) throw InternalError("trace is not in GF(2)");
  return coeff0(acc);
}

template <std::size_t Limbs>
auto BinaryField<Limbs>::half_trace(const Element& a) const -> Element {
  Element acc{};
  Element x = a;
  for (unsigned i = 0; i <= (degree_ - 1) / 2; ++i) {
    acc ^= x;
    x = square(square(x));
  }
  return acc;
}

template <std::size_t Limbs>
auto BinaryField<Limbs>::qs(const Element& a) const -> Element {
  if (qs_table_.empty()) throw Unsupported("quadratic solver needs an odd-degree field");
  if (trace(a)) throw NoSolution("x^2 + x = a has no solution: trace(a) = 1");
  return qs_table_.apply(a);
}

template <std::size_t Limbs>
auto BinaryField<Limbs>::qs_by_definition(const Element& a) const -> Element {
  if (degree_ % 2 == 0) throw Unsupported("quadratic solver needs an odd-degree field");
  if (trace_by_definition(a)) throw NoSolution("x^2 + x = a has no solution: trace(a) = 1");
  Element r = half_trace(a);
  if (coeff0(r)) r.flip_bit(0);
  return r;
}

template <std::size_t Limbs>
auto BinaryField<Limbs>::blinded_qs(const Element& a, RandomSource& rng) const -> Element {
  if (qs_table_.empty()) throw Unsupported("quadratic solver needs an odd-degree field");
  if (trace(a)) throw NoSolution("x^2 + x = a has no solution: trace(a) = 1");
  return blinded_qs_unchecked(a, rng);
}

template <std::size_t Limbs>
auto BinaryField<Limbs>::blinded_qs_unchecked(const Element& a, RandomSource& rng) const -> Element {
  // With coeff0(s) = 0, s is the canonical root of s^2 + s, so by linearity
  // qs(a + s^2 + s) + s = qs(a).
  Element s = random(rng);
  s.limbs[0] &= ~std::uint64_t{1};
  return qs_table_.apply(a ^ square(s) ^ s) ^ s;
}

template <std::size_t Limbs>
auto BinaryField<Limbs>::random(RandomSource& rng) const noexcept -> Element {
  Element r;
  for (auto& w : r.limbs) w = rng.next_u64();
  for (std::size_t i = 0; i < Limbs; ++i) r.limbs[i] &= ~high_mask_.limbs[i];
  return r;
}

template <std::size_t Limbs>
auto BinaryField<Limbs>::random_nonzero(RandomSource& rng) const noexcept -> Element {
  for (;;) {
    Element r = random(rng);
    if (!r.is_zero()) return r;
  }
}

template <std::size_t Limbs>
void BinaryField<Limbs>::to_bytes(const Element& a, std::span<std::uint8_t> out) const {
  if (out.size() != byte_length()) throw ParameterMismatch("field element buffer has wrong length");
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::uint8_t>(a.limbs[i / 8] >> (8 * (i % 8)));
}

template <std::size_t Limbs>
Bytes BinaryField<Limbs>::to_bytes(const Element& a) const {
  Bytes out(byte_length());
  to_bytes(a, out);
  return out;
}

template <std::size_t Limbs>
auto BinaryField<Limbs>::from_bytes(ByteView bytes) const -> Element {
  if (bytes.size() != byte_length()) {
    throw InvalidEncoding("field element must be " + std::to_string(byte_length()) + " bytes, got " +
                          std::to_string(bytes.size()));
  }
  Element r{};
  for (std::size_t i = 0; i < bytes.size(); ++i) r.limbs[i / 8] |= std::uint64_t{bytes[i]} << (8 * (i % 8));
  if (!is_valid(r)) throw InvalidEncoding("field element has nonzero padding bits");
  return r;
}

template <std::size_t Limbs>
std::string BinaryField<Limbs>::to_hex(const Element& a) const {
  return to_hex_reversed(to_bytes(a));
}

template <std::size_t Limbs>
auto BinaryField<Limbs>::from_hex(std::string_view hex) const -> Element {
  return from_bytes(from_hex_reversed(hex));
}

template <std::size_t Limbs>
auto BinaryField<Limbs>::from_uint(std::uint64_t v) const -> Element {
  Element r{};
  r.limbs[0] = v;
  if (!is_valid(r)) throw ParameterMismatch("value exceeds field degree");
  return r;
}

template <std::size_t Limbs>
std::size_t BinaryField<Limbs>::table_memory_bytes() const noexcept {
  std::size_t total = sqrt_table_.memory_bytes() + qs_table_.memory_bytes();
  for (const auto& [k, t] : multi_square_tables_) total += t.memory_bytes();
  return total;
}

template class BinaryField<1>;
template class BinaryField<2>;
template class BinaryField<3>;
template class BinaryField<4>;
template class BinaryField<5>;

}  // namespace ecmh
