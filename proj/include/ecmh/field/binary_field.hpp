#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecmh/bytes.hpp"
#include "ecmh/field/clmul.hpp"
#include "ecmh/random.hpp"

namespace ecmh {

/// Element of GF(2^m) in polynomial basis: bit i of the limb array is the
/// coefficient of z^i. Bits at positions >= m are always zero.
template <std::size_t Limbs>
struct FieldElement {
  static constexpr std::size_t limb_count = Limbs;
  std::array<std::uint64_t, Limbs> limbs{};

  constexpr bool is_zero() const noexcept {
    std::uint64_t acc = 0;
    for (auto w : limbs) acc |= w;
    return acc == 0;
  }
  constexpr bool bit(unsigned i) const noexcept { return (limbs[i / 64] >> (i % 64)) & 1; }
  constexpr void flip_bit(unsigned i) noexcept { limbs[i / 64] ^= std::uint64_t{1} << (i % 64); }

  constexpr FieldElement& operator^=(const FieldElement& o) noexcept {
    for (std::size_t i = 0; i < Limbs; ++i) limbs[i] ^= o.limbs[i];
    return *this;
  }
  friend constexpr FieldElement operator^(FieldElement a, const FieldElement& b) noexcept { return a ^= b; }
  friend constexpr bool operator==(const FieldElement&, const FieldElement&) = default;
};

/// Field definition as stored in the parameter registry.
struct FieldParams {
  std::string name;
  unsigned degree = 0;
  /// Exponents of the non-leading terms of the reduction polynomial (must include 0).
  std::vector<unsigned> reduction_terms;
  /// Itoh-Tsujii addition chain 1 = c_0 < c_1 < ... < c_k = degree - 1.
  std::vector<unsigned> inversion_chain;
  /// Multi-squaring amounts that get a precomputed table.
  std::vector<unsigned> table_multi_squares;
  unsigned table_block_bits = 8;
};

namespace detail {
/// Number of field inversions performed on this thread (instrumentation).
std::uint64_t& inversion_counter() noexcept;

inline std::uint64_t ct_mask(bool condition) noexcept { return 0 - static_cast<std::uint64_t>(condition); }
}  // namespace detail

/// Branch-free select: `mask` all-ones picks `a`, all-zeros picks `b`.
template <std::size_t Limbs>
FieldElement<Limbs> ct_select(std::uint64_t mask, const FieldElement<Limbs>& a, const FieldElement<Limbs>& b) noexcept {
  FieldElement<Limbs> r;
  for (std::size_t i = 0; i < Limbs; ++i) r.limbs[i] = (a.limbs[i] & mask) | (b.limbs[i] & ~mask);
  return r;
}

/// All-ones iff `a` is zero, computed without branching.
template <std::size_t Limbs>
std::uint64_t ct_is_zero_mask(const FieldElement<Limbs>& a) noexcept {
  std::uint64_t acc = 0;
  for (auto w : a.limbs) acc |= w;
  return ((acc | (0 - acc)) >> 63) - 1;
}

/// A GF(2)-linear map GF(2^m) -> GF(2^m) evaluated by table lookup: the
/// input is cut into ceil(m / beta) blocks of beta bits and each block
/// indexes its own table of 2^beta precomputed images.
template <std::size_t Limbs>
class LinearTable {
 public:
  using Element = FieldElement<Limbs>;

  LinearTable() = default;
  /// `basis_image(i)` must return the image of z^i.
  template <class BasisImage>
  LinearTable(unsigned degree, unsigned block_bits, BasisImage&& basis_image)
      : block_bits_(block_bits), blocks_((degree + block_bits - 1) / block_bits) {
    const std::size_t per_block = std::size_t{1} << block_bits;
    entries_.assign(blocks_ * per_block, Element{});
    for (std::size_t blk = 0; blk < blocks_; ++blk) {
      Element* table = &entries_[blk * per_block];
      for (unsigned b = 0; b < block_bits; ++b) {
        const unsigned i = static_cast<unsigned>(blk * block_bits + b);
        if (i >= degree) break;
        const Element image = basis_image(i);
        const std::size_t step = std::size_t{1} << b;
        for (std::size_t v = step; v < 2 * step; ++v) table[v] = table[v - step] ^ image;
      }
    }
  }

  Element apply(const Element& x) const noexcept {
    Element r{};
    const std::size_t per_block_shift = block_bits_;
    const std::uint64_t mask = (std::uint64_t{1} << block_bits_) - 1;
    for (std::size_t blk = 0; blk < blocks_; ++blk) {
      const std::size_t off = blk * block_bits_;
      const std::size_t word = off / 64;
      const unsigned shift = off % 64;
      std::uint64_t idx = x.limbs[word] >> shift;
      if (shift + block_bits_ > 64 && word + 1 < Limbs) idx |= x.limbs[word + 1] << (64 - shift);
      r ^= entries_[(blk << per_block_shift) | (idx & mask)];
    }
    return r;
  }

  std::size_t memory_bytes() const noexcept { return entries_.size() * sizeof(Element); }
  bool empty() const noexcept { return entries_.empty(); }

 private:
  unsigned block_bits_ = 0;
  std::size_t blocks_ = 0;
  std::vector<Element> entries_;
};

/// GF(2^m) with a sparse reduction polynomial, m <= 64 * Limbs.
///
/// Construction validates the parameters (irreducibility included) and
/// builds the linear-map tables; afterwards the object is immutable and may
/// be shared across threads.
template <std::size_t Limbs>
class BinaryField {
 public:
  using Element = FieldElement<Limbs>;
  static constexpr std::size_t limb_count = Limbs;

  explicit BinaryField(FieldParams params);

  const FieldParams& params() const noexcept { return params_; }
  const std::string& name() const noexcept { return params_.name; }
  unsigned degree() const noexcept { return degree_; }
  std::size_t byte_length() const noexcept { return (degree_ + 7) / 8; }

  Element zero() const noexcept { return {}; }
  Element one() const noexcept {
    Element r{};
    r.limbs[0] = 1;
    return r;
  }
  /// The polynomial indeterminate z.
  Element z() const noexcept {
    Element r{};
    r.limbs[0] = 2;
    return r;
  }

  /// Throws ParameterMismatch if `a` has bits at or above the degree.
  void validate(const Element& a) const;
  bool is_valid(const Element& a) const noexcept;

  Element add(const Element& a, const Element& b) const noexcept { return a ^ b; }

  Element mul(const Element& a, const Element& b) const noexcept {
    std::array<std::uint64_t, 2 * Limbs> p{};
    for (std::size_t i = 0; i < Limbs; ++i) {
      for (std::size_t j = 0; j < Limbs; ++j) {
        const auto t = detail::clmul64(a.limbs[i], b.limbs[j]);
        p[i + j] ^= t[0];
        p[i + j + 1] ^= t[1];
      }
    }
    return reduce(p);
  }

  Element square(const Element& a) const noexcept {
    std::array<std::uint64_t, 2 * Limbs> p{};
    for (std::size_t i = 0; i < Limbs; ++i) {
      const auto t = detail::clsquare64(a.limbs[i]);
      p[2 * i] = t[0];
      p[2 * i + 1] = t[1];
    }
    return reduce(p);
  }

  /// a^(2^k); uses a precomputed table when one exists for k.
  Element multi_square(const Element& a, unsigned k) const;
  /// a^(2^k) by k plain squarings.
  Element multi_square_iterated(const Element& a, unsigned k) const noexcept {
    Element r = a;
    for (unsigned i = 0; i < k; ++i) r = square(r);
    return r;
  }
  bool has_multi_square_table(unsigned k) const noexcept { return multi_square_tables_.count(k) != 0; }

  Element sqrt(const Element& a) const noexcept { return sqrt_table_.apply(a); }

  /// Itoh-Tsujii inversion. Throws DivisionByZero for a = 0.
  Element invert(const Element& a) const;
  /// Montgomery's trick: one inversion plus 3(n-1) multiplications.
  /// Throws ZeroElementInBatch (before writing anything) if an input is zero.
  void batch_invert(std::span<const Element> in, std::span<Element> out) const;
  std::vector<Element> batch_invert(std::span<const Element> in) const;
  /// batch_invert whose single inversion is blinded_invert; inputs must be nonzero.
  void blinded_batch_invert(std::span<const Element> in, std::span<Element> out, RandomSource& rng) const;
  /// Returns exactly invert(a), computed as r * invert(r * a) for a random nonzero r.
  Element blinded_invert(const Element& a, RandomSource& rng) const;

  bool trace(const Element& a) const noexcept {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < Limbs; ++i) acc ^= a.limbs[i] & trace_mask_.limbs[i];
    return std::popcount(acc) & 1;
  }
  /// Sum of a^(2^i) for i < m; reference for `trace`.
  bool trace_by_definition(const Element& a) const;

  /// Root r of r^2 + r = a with coeff0(r) = 0. Throws NoSolution if trace(a) = 1.
  Element qs(const Element& a) const;
  /// qs without the trace check; meaningless for trace-1 inputs.
  Element qs_unchecked(const Element& a) const noexcept { return qs_table_.apply(a); }
  /// Same output as qs(a); the table is indexed by a + s^2 + s for a random s.
  Element blinded_qs(const Element& a, RandomSource& rng) const;
  Element blinded_qs_unchecked(const Element& a, RandomSource& rng) const;
  /// Canonical root by summing a^(4^i) (half-trace); reference for `qs`.
  Element qs_by_definition(const Element& a) const;

  static bool coeff0(const Element& a) noexcept { return a.limbs[0] & 1; }

  Element random(RandomSource& rng) const noexcept;
  Element random_nonzero(RandomSource& rng) const noexcept;

  /// ceil(m/8) bytes, coefficient i at bit i (little-endian packing).
  Bytes to_bytes(const Element& a) const;
  void to_bytes(const Element& a, std::span<std::uint8_t> out) const;
  /// Throws InvalidEncoding on wrong length or nonzero padding bits.
  Element from_bytes(ByteView bytes) const;
  /// Big-endian hex of the byte packing, 2 * ceil(m/8) digits.
  std::string to_hex(const Element& a) const;
  Element from_hex(std::string_view hex) const;
  /// Element whose coefficients are the low bits of `v` (m <= 64 fields; tests).
  Element from_uint(std::uint64_t v) const;

  /// Bytes held by all precomputed tables.
  std::size_t table_memory_bytes() const noexcept;

  Element reduce(const std::array<std::uint64_t, 2 * Limbs>& product) const noexcept {
    if constexpr (Limbs == 1) {
      if (kernel_ == Kernel::k13) return reduce_fixed<13, 4, 3, 1, 0>(product);
    } else if constexpr (Limbs == 3) {
      if (kernel_ == Kernel::k163) return reduce_fixed<163, 7, 6, 3, 0>(product);
    } else if constexpr (Limbs == 4) {
      if (kernel_ == Kernel::k233) return reduce_fixed<233, 74, 0>(product);
    }
    return reduce_sparse(product);
  }

 private:
  // Fixed polynomial z^M + sum z^T with every T < M / 2, top term first.
  // p = low + z^M high = low + sum high z^T; the first round leaves degree
  // < M - 1 + T0, the second < 2 T0 < M.
  template <unsigned M, unsigned T0, unsigned... T>
  static Element reduce_fixed(const std::array<std::uint64_t, 2 * Limbs>& product) noexcept {
    constexpr std::size_t mw = M / 64;
    constexpr unsigned ms = M % 64;
    static_assert(ms != 0 && mw < Limbs && 2 * T0 < M && ((T < T0) && ...));
    std::array<std::uint64_t, 2 * Limbs + 1> p{};
    for (std::size_t i = 0; i < 2 * Limbs; ++i) p[i] = product[i];
    const auto round = [&p]<std::size_t HighWords>() {
      std::array<std::uint64_t, HighWords> h;
      for (std::size_t i = 0; i < HighWords; ++i) h[i] = (p[i + mw] >> ms) | (p[i + mw + 1] << (64 - ms));
      for (std::size_t i = mw + 1; i < p.size(); ++i) p[i] = 0;
      p[mw] &= (std::uint64_t{1} << ms) - 1;
      const auto add_shifted = [&]<unsigned Shift>() {
        for (std::size_t i = 0; i < HighWords; ++i) {
          p[i + Shift / 64] ^= h[i] << (Shift % 64);
          if constexpr (Shift % 64 != 0) p[i + Shift / 64 + 1] ^= h[i] >> (64 - Shift % 64);
        }
      };
      add_shifted.template operator()<T0>();
      (add_shifted.template operator()<T>(), ...);
    };
    round.template operator()<2 * Limbs - mw>();
    round.template operator()<(T0 - 1) / 64 + 1>();
    Element r;
    for (std::size_t i = 0; i < Limbs; ++i) r.limbs[i] = p[i];
    return r;
  }

  // Word-serial folding for polynomials whose low part does not fit in two words.
  Element reduce_sparse(const std::array<std::uint64_t, 2 * Limbs>& product) const noexcept {
    std::array<std::uint64_t, 2 * Limbs + 1> p{};
    for (std::size_t i = 0; i < 2 * Limbs; ++i) p[i] = product[i];
    const std::size_t top = degree_ / 64;
    // word i, bit j is z^(64 i + j); z^m = sum of z^term, so each fold moves
    // the word down by m - term bits
    for (std::size_t i = 2 * Limbs; i-- > top + 1;) {
      do {
        const std::uint64_t t = p[i];
        p[i] = 0;
        for (std::size_t k = 0; k < term_count_; ++k) {
          const Fold& f = folds_[k];
          if (f.bits == 0) {
            p[i - f.words] ^= t;
          } else {
            p[i - f.words - 1] ^= t << (64 - f.bits);
            p[i - f.words] ^= t >> f.bits;
          }
        }
      } while (self_fold_ && p[i] != 0);
    }
    const unsigned top_shift = degree_ % 64;
    for (;;) {
      const std::uint64_t t = p[top] >> top_shift;
      if (t == 0) break;
      p[top] ^= t << top_shift;
      for (std::size_t k = 0; k < term_count_; ++k) xor_shifted(p, terms_[k], t);
    }
    Element r;
    for (std::size_t i = 0; i < Limbs; ++i) r.limbs[i] = p[i];
    return r;
  }

  struct ChainStep {
    std::size_t base;   // index into the chain whose power is multi-squared
    std::size_t other;  // index multiplied in afterwards
    unsigned shift;     // chain[other], the multi-squaring amount
    const LinearTable<Limbs>* table;
  };

  static void xor_shifted(std::array<std::uint64_t, 2 * Limbs + 1>& p, unsigned offset, std::uint64_t v) noexcept {
    const std::size_t w = offset / 64;
    const unsigned s = offset % 64;
    p[w] ^= v << s;
    if (s != 0) p[w + 1] ^= v >> (64 - s);
  }

  void validate_params() const;
  bool reduction_polynomial_irreducible() const;
  Element half_trace(const Element& a) const;

  FieldParams params_;
  unsigned degree_ = 0;
  std::array<unsigned, 8> terms_{};
  std::size_t term_count_ = 0;
  struct Fold {
    std::size_t words;  // (m - term) / 64
    unsigned bits;      // (m - term) % 64
  };
  std::array<Fold, 8> folds_{};
  bool self_fold_ = false;  // some m - term < 64: a fold can land in its own word
  enum class Kernel { generic, k13, k163, k233 };
  Kernel kernel_ = Kernel::generic;
  Element high_mask_{};  // bits >= m in the limb array
  Element trace_mask_{};
  std::vector<ChainStep> chain_steps_;
  std::map<unsigned, LinearTable<Limbs>> multi_square_tables_;
  LinearTable<Limbs> sqrt_table_;
  LinearTable<Limbs> qs_table_;
};

extern template class BinaryField<1>;
extern template class BinaryField<2>;
extern template class BinaryField<3>;
extern template class BinaryField<4>;
extern template class BinaryField<5>;

/// Limb count needed for degree m.
constexpr std::size_t limbs_for_degree(unsigned m) { return (m + 63) / 64; }

}  // namespace ecmh
