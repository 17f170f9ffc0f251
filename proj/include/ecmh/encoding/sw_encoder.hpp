#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ecmh/curve/binary_curve.hpp"
#include "ecmh/error.hpp"

namespace ecmh {

/// Shallue-van de Woestijne map GF(2^m) -> E(GF(2^m)) for characteristic 2,
/// in the single-inversion form, returning lambda-affine points.
template <std::size_t Limbs>
class SwEncoder {
 public:
  using Curve = BinaryCurve<Limbs>;
  using Field = BinaryField<Limbs>;
  using Element = FieldElement<Limbs>;
  using Affine = AffinePoint<Limbs>;

  /// Precomputes t_j = t/(t^2+t+1), (1+t)/(t^2+t+1), t(1+t)/(t^2+t+1) and inverses.
  SwEncoder(std::shared_ptr<const Curve> curve, const Element& t) : curve_(std::move(curve)), t_(t) {
    const Field& f = field();
    f.validate(t);
    const Element one = f.one();
    const Element d = f.square(t) ^ t ^ one;
    if (f.mul(f.mul(t, t ^ one), d).is_zero()) throw ParameterError("encoder parameter t must satisfy t^4 + t != 0");
    const Element di = f.invert(d);
    tj_[0] = f.mul(t, di);
    tj_[1] = f.mul(t ^ one, di);
    tj_[2] = f.mul(f.mul(t, t ^ one), di);
    for (int j = 0; j < 3; ++j) tj_inv_[j] = f.invert(tj_[j]);
    b_is_one_ = curve_->b() == one;
  }

  /// Uses the curve's registered t.
  static SwEncoder for_registry_curve(std::shared_ptr<const Curve> curve,
                                      const Registry& reg = Registry::instance()) {
    const Element t = Curve::parse_coefficient(curve->field(), reg.curve(curve->name()).encoder_t);
    return SwEncoder(std::move(curve), t);
  }

  const Curve& curve() const noexcept { return *curve_; }
  const std::shared_ptr<const Curve>& curve_ptr() const noexcept { return curve_; }
  const Field& field() const noexcept { return curve_->field(); }
  const Element& t() const noexcept { return t_; }
  const Element& tj(int j) const noexcept { return tj_[j]; }
  const Element& tj_inv(int j) const noexcept { return tj_inv_[j]; }

  Affine encode(const Element& w) const {
    const Field& f = field();
    const Element c = f.square(w) ^ w ^ curve_->a();
    if (c.is_zero()) return Curve::x_zero_point();
    return finish(w, c, f.invert(c));
  }

  /// Same outputs as encode; one field inversion for the whole batch.
  void encode_batch(std::span<const Element> ws, std::span<Affine> out) const {
    if (ws.size() != out.size()) throw ParameterMismatch("encode_batch: output size differs from input size");
    const Field& f = field();
    std::vector<Element> cs;
    std::vector<std::size_t> slot;
    cs.reserve(ws.size());
    slot.reserve(ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const Element c = f.square(ws[i]) ^ ws[i] ^ curve_->a();
      if (c.is_zero()) {
        out[i] = Curve::x_zero_point();
      } else {
        cs.push_back(c);
        slot.push_back(i);
      }
    }
    if (cs.empty()) return;
    std::vector<Element> inv(cs.size());
    f.batch_invert(cs, inv);
    for (std::size_t k = 0; k < cs.size(); ++k) out[slot[k]] = finish(ws[slot[k]], cs[k], inv[k]);
  }

  std::vector<Affine> encode_batch(std::span<const Element> ws) const {
    std::vector<Affine> out(ws.size());
    encode_batch(ws, out);
    return out;
  }

  /// Same output as encode. Evaluates all three candidates and selects with
  /// masks; the inversion and the quadratic solve are blinded.
  Affine encode_blinded(const Element& w, RandomSource& rng) const {
    const Field& f = field();
    const Element c = f.square(w) ^ w ^ curve_->a();
    const std::uint64_t czero = ct_is_zero_mask(c);
    const Element c1 = ct_select(czero, f.one(), c);
    return finish_blinded(w, c1, czero, f.blinded_invert(c1, rng), rng);
  }

  /// Batch form of encode_blinded: zero c values are replaced by 1 before the
  /// shared inversion instead of being skipped.
  void encode_blinded_batch(std::span<const Element> ws, std::span<Affine> out, RandomSource& rng) const {
    if (ws.size() != out.size()) throw ParameterMismatch("encode_batch: output size differs from input size");
    const Field& f = field();
    const std::size_t n = ws.size();
    std::vector<Element> cs(n), inv(n);
    std::vector<std::uint64_t> czero(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Element c = f.square(ws[i]) ^ ws[i] ^ curve_->a();
      czero[i] = ct_is_zero_mask(c);
      cs[i] = ct_select(czero[i], f.one(), c);
    }
    f.blinded_batch_invert(cs, inv, rng);
    for (std::size_t i = 0; i < n; ++i) out[i] = finish_blinded(ws[i], cs[i], czero[i], inv[i], rng);
  }

  /// Every w with encode(w) = p (at most three).
  std::vector<Element> preimages(const Affine& p) const {
    const Field& f = field();
    const Element a = curve_->a();
    std::vector<Element> out;
    if (p.kind == PointKind::identity) return out;
    if (p.kind == PointKind::x_zero) {
      if (!f.trace(a)) {
        const Element r = f.qs(a);
        out.push_back(r);
        out.push_back(r ^ f.one());
      }
      return out;
    }
    if (!curve_->is_on_curve(p)) throw InvalidEncoding("preimages: point is not on the curve");
    const Element xi = f.invert(p.x);
    const Element h = f.mul(f.square(xi), curve_->b()) ^ p.x ^ a;
    const Element bit = p.lambda ^ p.x ^ f.qs(h);  // coeff0(w), as a field element in {0, 1}
    if (bit != f.zero() && bit != f.one()) throw InternalError("preimages: coefficient relation failed");
    for (int j = 0; j < 3; ++j) {
      const Element c = f.mul(tj_inv_[j], p.x);
      if (f.trace(c ^ a)) continue;
      // w must reach branch j: every earlier branch has to fail its trace test
      const Element ci = f.mul(tj_[j], xi);
      bool earlier_taken = false;
      for (int k = 0; k < j && !earlier_taken; ++k) {
        const Element xk = f.mul(tj_[k], c);
        const Element xki = f.mul(tj_inv_[k], ci);
        earlier_taken = !f.trace(f.mul(f.square(xki), curve_->b()) ^ xk ^ a);
      }
      if (earlier_taken) continue;
      Element w = f.qs(c ^ a);
      if (Field::coeff0(w) != Field::coeff0(bit)) w.flip_bit(0);
      out.push_back(w);
    }
    return out;
  }

  /// Samples w uniformly from the preimages of p, accepting with probability
  /// |preimages(p)| / 3. Over uniform p this yields uniform w.
  std::optional<Element> sample_preimage(const Affine& p, RandomSource& rng) const {
    const auto pre = preimages(p);
    const std::uint64_t j = rng.uniform(3);
    if (j >= pre.size()) return std::nullopt;
    return pre[rng.uniform(pre.size())];
  }

  /// Counts of points (identity excluded) with k = 0..3 preimages, by
  /// running the forward map over the whole field. Small fields only.
  std::array<std::uint64_t, 4> preimage_counts() const {
    const Field& f = field();
    const unsigned m = f.degree();
    if (m > 24) throw Unsupported("preimage histogram needs an exhaustible field (m <= 24)");
    const std::size_t q = std::size_t{1} << m;
    // index points as (compressed x | flag << m); x_zero lands on index 0
    std::vector<std::uint8_t> hits(2 * q, 0);
    for (std::uint64_t v = 0; v < q; ++v) {
      Element w{};
      w.limbs[0] = v;
      const Affine p = encode(w);
      std::size_t idx = 0;
      if (p.kind == PointKind::ordinary) idx = p.x.limbs[0] | (std::uint64_t{Field::coeff0(p.lambda)} << m);
      if (++hits[idx] > 3) throw InternalError("more than three preimages");
    }
    std::array<std::uint64_t, 4> counts{};
    const std::uint64_t points = static_cast<std::uint64_t>(curve_->order().get_ui()) - 1;
    std::uint64_t covered = 0;
    for (std::size_t i = 0; i < hits.size(); ++i) {
      if (hits[i] != 0) {
        ++counts[hits[i]];
        ++covered;
      }
    }
    counts[0] = points - covered;
    return counts;
  }

 private:
  Affine finish(const Element& w, const Element& c, const Element& ci) const {
    const Field& f = field();
    for (int j = 0; j < 3; ++j) {
      const Element x = f.mul(tj_[j], c);
      const Element xi = f.mul(tj_inv_[j], ci);
      const Element h = times_b(f.square(xi)) ^ x ^ curve_->a();
      if (!f.trace(h)) {
        Element lambda = f.qs_unchecked(h) ^ x;
        if (Field::coeff0(w)) lambda.flip_bit(0);
        return Affine{PointKind::ordinary, x, lambda};
      }
    }
    throw InternalError("SW encoding: no candidate has trace 0 (bad curve or encoder parameters)");
  }

  Affine finish_blinded(const Element& w, const Element& c, std::uint64_t czero, const Element& ci,
                        RandomSource& rng) const {
    const Field& f = field();
    std::array<Element, 3> xs, hs;
    std::array<std::uint64_t, 3> odd;
    for (int j = 0; j < 3; ++j) {
      xs[j] = f.mul(tj_[j], c);
      const Element xi = f.mul(tj_inv_[j], ci);
      hs[j] = times_b(f.square(xi)) ^ xs[j] ^ curve_->a();
      odd[j] = detail::ct_mask(f.trace(hs[j]));
    }
    const std::uint64_t pick0 = ~odd[0];
    const std::uint64_t pick1 = odd[0] & ~odd[1];
    Element x = ct_select(pick0, xs[0], ct_select(pick1, xs[1], xs[2]));
    Element h = ct_select(pick0, hs[0], ct_select(pick1, hs[1], hs[2]));
    const std::uint64_t none = odd[0] & odd[1] & odd[2] & ~czero;
    h = ct_select(czero, Element{}, h);
    x = ct_select(czero, Element{}, x);
    Element lambda = f.blinded_qs_unchecked(h, rng) ^ x;
    lambda.limbs[0] ^= w.limbs[0] & 1;
    lambda = ct_select(czero, Element{}, lambda);
    if (none != 0) throw InternalError("SW encoding: no candidate has trace 0 (bad curve or encoder parameters)");
    Affine r;
    r.kind = static_cast<PointKind>(static_cast<std::uint8_t>(PointKind::ordinary) ^
                                    (static_cast<std::uint8_t>(czero) &
                                     (static_cast<std::uint8_t>(PointKind::ordinary) ^
                                      static_cast<std::uint8_t>(PointKind::x_zero))));
    r.x = x;
    r.lambda = lambda;
    return r;
  }

  Element times_b(const Element& v) const noexcept { return b_is_one_ ? v : field().mul(v, curve_->b()); }

  std::shared_ptr<const Curve> curve_;
  Element t_;
  std::array<Element, 3> tj_, tj_inv_;
  bool b_is_one_ = false;
};

}  // namespace ecmh
