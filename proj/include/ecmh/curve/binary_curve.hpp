#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <string>

#include "ecmh/bytes.hpp"
#include "ecmh/error.hpp"
#include "ecmh/field/binary_field.hpp"
#include "ecmh/registry.hpp"

namespace ecmh {

/// The point (0, sqrt(b)) has no lambda coordinate and gets its own kind.
enum class PointKind : std::uint8_t { identity, x_zero, ordinary };

/// (x, lambda) with lambda = x + y/x.
template <std::size_t Limbs>
struct AffinePoint {
  using Element = FieldElement<Limbs>;
  PointKind kind = PointKind::identity;
  Element x{};
  Element lambda{};

  bool operator==(const AffinePoint&) const = default;
};

/// (X, L, Z) with x = X/Z and lambda = L/Z; Z != 0 for ordinary points.
template <std::size_t Limbs>
struct ProjectivePoint {
  using Element = FieldElement<Limbs>;
  PointKind kind = PointKind::identity;
  Element X{};
  Element L{};
  Element Z{};
};

/// y^2 + xy = x^3 + a x^2 + b over GF(2^m), b != 0, in lambda coordinates.
///
/// Group operations are variable-time; they run on public data only
/// (digest accumulators and public multiplicities).
template <std::size_t Limbs>
class BinaryCurve {
 public:
  using Field = BinaryField<Limbs>;
  using Element = FieldElement<Limbs>;
  using Affine = AffinePoint<Limbs>;
  using Projective = ProjectivePoint<Limbs>;

  BinaryCurve(std::string name, std::shared_ptr<const Field> field, const Element& a, const Element& b,
              mpz_class order, unsigned cofactor, mpz_class subgroup_order)
      : name_(std::move(name)),
        field_(std::move(field)),
        a_(a),
        b_(b),
        order_(std::move(order)),
        cofactor_(cofactor),
        subgroup_order_(std::move(subgroup_order)) {
    const Field& f = *field_;
    f.validate(a_);
    f.validate(b_);
    if (b_.is_zero()) throw ParameterError("curve " + name_ + ": b must be nonzero");
    if (order_ != subgroup_order_ * cofactor_) throw ParameterError("curve " + name_ + ": order != cofactor * subgroup order");
    if (mpz_probab_prime_p(subgroup_order_.get_mpz_t(), 40) == 0) {
      throw ParameterError("curve " + name_ + ": subgroup order is not prime");
    }
    sqrt_b_ = f.sqrt(b_);
    a_is_zero_ = a_.is_zero();
    a_is_one_ = a_ == f.one();
  }

  /// Builds the named registry curve; the field limb count must equal Limbs.
  static BinaryCurve from_registry(const std::string& name, const Registry& reg = Registry::instance()) {
    const CurveRecord& rec = reg.curve(name);
    const FieldParams& fp = reg.field(rec.field);
    if (limbs_for_degree(fp.degree) != Limbs) {
      throw ParameterMismatch("curve " + name + " needs " + std::to_string(limbs_for_degree(fp.degree)) + " limbs");
    }
    auto field = std::make_shared<const Field>(fp);
    const Element a = parse_coefficient(*field, rec.a);
    const Element b = parse_coefficient(*field, rec.b);
    return BinaryCurve(name, field, a, b, mpz_class(rec.order), rec.cofactor, mpz_class(rec.subgroup_order));
  }

  /// Hex coefficient of any width up to the field's, most significant digit first.
  static Element parse_coefficient(const Field& f, std::string hex) {
    if (hex.rfind("0x", 0) == 0) hex = hex.substr(2);
    const std::size_t width = 2 * f.byte_length();
    if (hex.size() > width) throw ParameterError("coefficient wider than the field: " + hex);
    return f.from_hex(std::string(width - hex.size(), '0') + hex);
  }

  const std::string& name() const noexcept { return name_; }
  const Field& field() const noexcept { return *field_; }
  const std::shared_ptr<const Field>& field_ptr() const noexcept { return field_; }
  const Element& a() const noexcept { return a_; }
  const Element& b() const noexcept { return b_; }
  const Element& sqrt_b() const noexcept { return sqrt_b_; }
  const mpz_class& order() const noexcept { return order_; }
  unsigned cofactor() const noexcept { return cofactor_; }
  const mpz_class& subgroup_order() const noexcept { return subgroup_order_; }

  static Affine identity() noexcept { return Affine{}; }
  static Affine x_zero_point() noexcept { return Affine{PointKind::x_zero, {}, {}}; }
  static Projective projective_identity() noexcept { return Projective{}; }

  Projective to_projective(const Affine& p) const noexcept {
    Projective r;
    r.kind = p.kind;
    if (p.kind == PointKind::ordinary) {
      r.X = p.x;
      r.L = p.lambda;
      r.Z = field_->one();
    }
    return r;
  }

  bool is_on_curve(const Affine& p) const noexcept {
    if (p.kind != PointKind::ordinary) return true;
    const Field& f = *field_;
    if (!f.is_valid(p.x) || !f.is_valid(p.lambda) || p.x.is_zero()) return false;
    // (lambda^2 + lambda + a) x^2 = x^4 + b
    const Element x2 = f.square(p.x);
    const Element lhs = f.mul(f.square(p.lambda) ^ p.lambda ^ a_, x2);
    return lhs == (f.square(x2) ^ b_);
  }

  bool is_on_curve(const Projective& p) const noexcept {
    if (p.kind != PointKind::ordinary) return true;
    const Field& f = *field_;
    if (p.Z.is_zero() || p.X.is_zero()) return false;
    // (L^2 + L Z + a Z^2) X^2 = X^4 + b Z^4
    const Element z2 = f.square(p.Z);
    const Element x2 = f.square(p.X);
    const Element lhs = f.mul(f.square(p.L) ^ f.mul(p.L, p.Z) ^ f.mul(a_, z2), x2);
    return lhs == (f.square(x2) ^ f.mul(b_, f.square(z2)));
  }

  Affine negate(const Affine& p) const noexcept {
    Affine r = p;
    if (p.kind == PointKind::ordinary) r.lambda.flip_bit(0);  // y -> x + y is lambda -> lambda + 1
    return r;
  }
  Projective negate(const Projective& p) const noexcept {
    Projective r = p;
    if (p.kind == PointKind::ordinary) r.L ^= p.Z;
    return r;
  }

  Projective dbl(const Projective& p) const noexcept {
    if (p.kind != PointKind::ordinary) return projective_identity();  // x_zero has order 2
    const Field& f = *field_;
    const Element z2 = f.square(p.Z);
    const Element lz = f.mul(p.L, p.Z);
    Element t = f.square(p.L) ^ lz;
    t ^= a_term(z2);
    if (t.is_zero()) return Projective{PointKind::x_zero, {}, {}, {}};
    Projective r;
    r.kind = PointKind::ordinary;
    r.X = f.square(t);
    r.Z = f.mul(t, z2);
    r.L = f.square(f.mul(p.X, p.Z)) ^ r.X ^ f.mul(t, lz) ^ r.Z;
    return r;
  }

  /// P + Q with Q affine.
  Projective add_mixed(const Projective& p, const Affine& q) const {
    if (q.kind == PointKind::identity) return p;
    if (p.kind == PointKind::identity) return to_projective(q);
    if (q.kind == PointKind::x_zero || p.kind == PointKind::x_zero) return add_via_affine(normalize(p), q);
    const Field& f = *field_;
    const Element a = p.L ^ f.mul(q.lambda, p.Z);
    const Element x2z1 = f.mul(q.x, p.Z);
    const Element u = p.X ^ x2z1;
    if (u.is_zero()) return a.is_zero() ? dbl(p) : projective_identity();
    if (a.is_zero()) return Projective{PointKind::x_zero, {}, {}, {}};
    const Element b = f.square(u);
    const Element ab = f.mul(a, b);
    Projective r;
    r.kind = PointKind::ordinary;
    r.X = f.mul(f.square(a), f.mul(p.X, x2z1));
    r.L = f.square(f.mul(a, x2z1) ^ b) ^ f.mul(ab, p.L ^ p.Z);
    r.Z = f.mul(ab, p.Z);
    return r;
  }

  Projective add_full(const Projective& p, const Projective& q) const {
    if (q.kind == PointKind::identity) return p;
    if (p.kind == PointKind::identity) return q;
    if (q.kind == PointKind::x_zero || p.kind == PointKind::x_zero) return add_via_affine(normalize(p), normalize(q));
    const Field& f = *field_;
    const Element a = f.mul(p.L, q.Z) ^ f.mul(q.L, p.Z);
    const Element x1z2 = f.mul(p.X, q.Z);
    const Element x2z1 = f.mul(q.X, p.Z);
    const Element u = x1z2 ^ x2z1;
    if (u.is_zero()) return a.is_zero() ? dbl(p) : projective_identity();
    if (a.is_zero()) return Projective{PointKind::x_zero, {}, {}, {}};
    const Element b = f.square(u);
    const Element abz2 = f.mul(f.mul(a, b), q.Z);
    Projective r;
    r.kind = PointKind::ordinary;
    r.X = f.mul(f.square(a), f.mul(x1z2, x2z1));
    r.L = f.square(f.mul(a, x2z1) ^ b) ^ f.mul(abz2, p.L ^ p.Z);
    r.Z = f.mul(abz2, p.Z);
    return r;
  }

  Projective add(const Projective& p, const Projective& q) const { return add_full(p, q); }

  /// k P by left-to-right double-and-add; negative k negates.
  Projective scalar_mul(const Projective& p, const mpz_class& k) const {
    if (k < 0) return scalar_mul(negate(p), mpz_class(-k));
    Projective r = projective_identity();
    for (long i = static_cast<long>(mpz_sizeinbase(k.get_mpz_t(), 2)) - 1; i >= 0; --i) {
      r = dbl(r);
      if (mpz_tstbit(k.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) r = add_full(r, p);
    }
    return r;
  }
  Projective scalar_mul(const Projective& p, std::int64_t k) const {
    if (k == 0 || p.kind == PointKind::identity) return projective_identity();
    mpz_class kk;
    mpz_set_si(kk.get_mpz_t(), static_cast<long>(k));
    return scalar_mul(p, kk);
  }

  /// Z = 1 representative (one inversion for ordinary points).
  Affine normalize(const Projective& p) const {
    if (p.kind != PointKind::ordinary) return Affine{p.kind, {}, {}};
    const Field& f = *field_;
    const Element zi = f.invert(p.Z);
    return Affine{PointKind::ordinary, f.mul(p.X, zi), f.mul(p.L, zi)};
  }

  /// Equality without inversion.
  bool equal(const Projective& p, const Projective& q) const noexcept {
    if (p.kind != q.kind) return false;
    if (p.kind != PointKind::ordinary) return true;
    const Field& f = *field_;
    return f.mul(p.X, q.Z) == f.mul(q.X, p.Z) && f.mul(p.L, q.Z) == f.mul(q.L, p.Z);
  }

  /// ceil((m+1)/8) bytes: x in bits 0..m-1, bit m = coeff0(lambda).
  /// The x_zero point is all zero; the identity is x = 0 with bit m set.
  std::size_t compressed_length() const noexcept { return (field_->degree() + 8) / 8; }

  Bytes compress(const Affine& p) const {
    const Field& f = *field_;
    Element x{};
    bool flag = false;
    if (p.kind == PointKind::ordinary) {
      x = p.x;
      flag = Field::coeff0(p.lambda);
    } else if (p.kind == PointKind::identity) {
      flag = true;
    }
    Bytes out(compressed_length(), 0);
    const std::size_t xb = f.byte_length();
    f.to_bytes(x, std::span<std::uint8_t>(out.data(), xb));
    const unsigned m = f.degree();
    if (flag) out[m / 8] |= static_cast<std::uint8_t>(1u << (m % 8));
    return out;
  }

  Affine decompress(ByteView in) const {
    const Field& f = *field_;
    if (in.size() != compressed_length()) {
      throw InvalidEncoding("compressed point must be " + std::to_string(compressed_length()) + " bytes, got " +
                            std::to_string(in.size()));
    }
    const unsigned m = f.degree();
    Bytes buf(in.begin(), in.end());
    const bool flag = (buf[m / 8] >> (m % 8)) & 1;
    // bits above m must be zero
    if ((buf[m / 8] >> (m % 8)) > 1) throw InvalidEncoding("compressed point has nonzero padding bits");
    for (std::size_t i = m / 8 + 1; i < buf.size(); ++i) {
      if (buf[i] != 0) throw InvalidEncoding("compressed point has nonzero padding bits");
    }
    buf[m / 8] &= static_cast<std::uint8_t>((1u << (m % 8)) - 1);
    buf.resize(f.byte_length());
    const Element x = f.from_bytes(buf);
    if (x.is_zero()) return flag ? identity() : x_zero_point();
    const Element xi = f.invert(x);
    const Element rhs = f.square(x) ^ a_ ^ f.mul(b_, f.square(xi));
    if (f.trace(rhs)) throw InvalidEncoding("compressed point: no curve point has this x");
    Element lambda = f.qs(rhs);
    if (Field::coeff0(lambda) != flag) lambda.flip_bit(0);
    return Affine{PointKind::ordinary, x, lambda};
  }

  Bytes compress(const Projective& p) const { return compress(normalize(p)); }

  /// Uniform point of the full group (for tests and benchmarks).
  Affine random_point(RandomSource& rng) const {
    const Field& f = *field_;
    for (;;) {
      const Element x = f.random(rng);
      if (x.is_zero()) continue;
      const Element rhs = f.square(x) ^ a_ ^ f.mul(b_, f.square(f.invert(x)));
      if (f.trace(rhs)) continue;
      Element lambda = f.qs(rhs);
      if (rng.next_u64() & 1) lambda.flip_bit(0);
      return Affine{PointKind::ordinary, x, lambda};
    }
  }

 private:
  Element a_term(const Element& z2) const noexcept {
    if (a_is_zero_) return Element{};
    if (a_is_one_) return z2;
    return field_->mul(a_, z2);
  }

  /// Chord rule in (x, y) coordinates; used when an operand is the x_zero point.
  Projective add_via_affine(const Affine& p, const Affine& q) const {
    if (p.kind == PointKind::identity) return to_projective(q);
    if (q.kind == PointKind::identity) return to_projective(p);
    if (p.kind == PointKind::x_zero && q.kind == PointKind::x_zero) return projective_identity();
    const Field& f = *field_;
    const Affine& o = p.kind == PointKind::x_zero ? q : p;
    // T + (x1, y1) with T = (0, sqrt b): slope s = (y1 + sqrt b) / x1 = lambda1 + x1 + sqrt(b)/x1.
    const Element xi = f.invert(o.x);
    const Element s = o.lambda ^ o.x ^ f.mul(sqrt_b_, xi);
    const Element x3 = f.square(s) ^ s ^ o.x ^ a_;
    const Element y1 = f.mul(o.lambda ^ o.x, o.x);
    const Element y3 = f.mul(s, o.x ^ x3) ^ x3 ^ y1;
    // x3 != 0: T + P = T would force P = identity.
    const Element l3 = x3 ^ f.mul(y3, f.invert(x3));
    return to_projective(Affine{PointKind::ordinary, x3, l3});
  }

  std::string name_;
  std::shared_ptr<const Field> field_;
  Element a_, b_, sqrt_b_;
  mpz_class order_;
  unsigned cofactor_;
  mpz_class subgroup_order_;
  bool a_is_zero_ = false;
  bool a_is_one_ = false;
};

}  // namespace ecmh
