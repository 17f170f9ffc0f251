#pragma once

#include <utility>

namespace ecmh {

/// Formal differences (pos, neg) over an insert-only multiset hash.
///
/// `Monoid` must provide: `Digest empty() const`, `void insert(Digest&, E) const`,
/// `Digest combine(const Digest&, const Digest&) const` and
/// `bool equal(const Digest&, const Digest&) const`, with combine commutative
/// and cancellative. Two wrapped values are equal iff pos_a + neg_b = neg_a + pos_b.
template <class Monoid>
class Grothendieck {
 public:
  using Inner = typename Monoid::Digest;
  struct Digest {
    Inner pos;
    Inner neg;
  };

  explicit Grothendieck(const Monoid& m) : m_(m) {}

  Digest empty() const { return Digest{m_.empty(), m_.empty()}; }

  template <class E>
  void insert(Digest& d, const E& e) const {
    m_.insert(d.pos, e);
  }
  template <class E>
  void remove(Digest& d, const E& e) const {
    m_.insert(d.neg, e);
  }

  Digest combine(const Digest& a, const Digest& b) const {
    return Digest{m_.combine(a.pos, b.pos), m_.combine(a.neg, b.neg)};
  }

  bool equal(const Digest& a, const Digest& b) const {
    return m_.equal(m_.combine(a.pos, b.neg), m_.combine(a.neg, b.pos));
  }

  const Monoid& inner() const noexcept { return m_; }

 private:
  const Monoid& m_;
};

/// ECMH with removal hidden: the insert-only restriction that the wrapper expects.
template <class Hash>
class InsertOnly {
 public:
  using Digest = typename Hash::Digest;
  explicit InsertOnly(const Hash& h) : h_(h) {}
  Digest empty() const { return h_.empty(); }
  template <class E>
  void insert(Digest& d, const E& e) const {
    h_.update(d, e, 1);
  }
  Digest combine(const Digest& a, const Digest& b) const { return h_.unite(a, b); }
  bool equal(const Digest& a, const Digest& b) const { return h_.equal(a, b); }

 private:
  const Hash& h_;
};

}  // namespace ecmh
