#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ecmh/encoding/sw_encoder.hpp"
#include "ecmh/error.hpp"
#include "ecmh/random.hpp"

namespace ecmh::analysis {

/// Hash oracle handed to a collision finder: query index -> field element.
template <std::size_t L>
using Oracle = std::function<FieldElement<L>(std::uint64_t)>;

/// A multiset over query indices: (index, multiplicity) pairs.
using KernelCandidate = std::vector<std::pair<std::uint64_t, std::int64_t>>;

/// Collision finder: given the oracle and the encoder, returns a nonempty
/// multiset whose hash is the identity, or nothing.
template <std::size_t L>
using Adversary = std::function<std::optional<KernelCandidate>(const Oracle<L>&, const SwEncoder<L>&)>;

/// Queries `budget` indices and matches +-f(x_i) and sums of two such
/// points against each other by compressed encoding (meet in the middle).
template <std::size_t L>
Adversary<L> brute_force_adversary(std::size_t budget = 256) {
  return [budget](const Oracle<L>& oracle, const SwEncoder<L>& enc) -> std::optional<KernelCandidate> {
    const auto& c = enc.curve();
    std::vector<ProjectivePoint<L>> pts;
    for (std::uint64_t i = 0; i < budget; ++i) pts.push_back(c.to_projective(enc.encode(oracle(i))));
    // singles: key = encoding of s * P_i
    std::map<Bytes, KernelCandidate> seen;
    auto offer = [&](const ProjectivePoint<L>& p, KernelCandidate terms) -> std::optional<KernelCandidate> {
      const Bytes key = c.compress(p);
      auto it = seen.find(key);
      if (it == seen.end()) {
        seen.emplace(key, std::move(terms));
        return std::nullopt;
      }
      // terms - it->second lies in the kernel
      std::map<std::uint64_t, std::int64_t> m;
      for (auto [i, k] : terms) m[i] += k;
      for (auto [i, k] : it->second) m[i] -= k;
      KernelCandidate out;
      for (auto [i, k] : m) {
        if (k != 0) out.emplace_back(i, k);
      }
      if (out.empty()) return std::nullopt;
      return out;
    };
    if (auto r = offer(c.projective_identity(), {})) return r;
    for (std::uint64_t i = 0; i < budget; ++i) {
      for (std::int64_t s : {1, -1}) {
        if (auto r = offer(s == 1 ? pts[i] : c.negate(pts[i]), {{i, s}})) return r;
      }
    }
    for (std::uint64_t i = 0; i < budget; ++i) {
      for (std::uint64_t j = i + 1; j < budget; ++j) {
        for (std::int64_t s : {1, -1}) {
          const auto pj = s == 1 ? pts[j] : c.negate(pts[j]);
          if (auto r = offer(c.add_full(pts[i], pj), {{i, 1}, {j, s}})) return r;
        }
      }
    }
    return std::nullopt;
  };
}

enum class ReductionOutcome { recovered, adversary_failed, r_zero };

struct ReductionResult {
  ReductionOutcome outcome = ReductionOutcome::adversary_failed;
  mpz_class log;                   // valid when recovered
  std::uint64_t oracle_queries = 0;
  std::uint64_t sampling_attempts = 0;  // rejection-sampling rounds over all queries
};

/// Simulates the random oracle from a discrete-log challenge Q in <P>:
/// each fresh query draws r in Z_rho, d in {0,1}, J in the cofactor part and
/// j in {0,1,2}, forms Q_i = r Q + d P + J and answers a uniform preimage
/// of Q_i when j < |f^-1(Q_i)|, redrawing otherwise.
template <std::size_t L>
class DlogReduction {
 public:
  using Curve = BinaryCurve<L>;
  using Element = FieldElement<L>;
  using Projective = ProjectivePoint<L>;

  /// `p` must have order rho (the prime subgroup order).
  DlogReduction(const SwEncoder<L>& enc, const Projective& p, RandomSource& rng)
      : enc_(enc), c_(enc.curve()), p_(p), rng_(rng) {
    const mpz_class& rho = c_.subgroup_order();
    if (!c_.is_on_curve(p) || c_.equal(p, Curve::projective_identity()) ||
        !c_.equal(c_.scalar_mul(p, rho), Curve::projective_identity())) {
      throw ParameterError("reduction base point must have prime order rho");
    }
    // cofactor part: rho * G, collected from random points
    for (int tries = 0; complement_.size() < c_.cofactor(); ++tries) {
      if (tries > 10000) throw InternalError("could not enumerate the cofactor subgroup");
      const Projective j = c_.scalar_mul(c_.to_projective(c_.random_point(rng_)), rho);
      bool fresh = true;
      for (const auto& k : complement_) fresh = fresh && !c_.equal(k, j);
      if (fresh) complement_.push_back(j);
    }
  }

  const std::vector<Projective>& complement() const noexcept { return complement_; }

  /// One oracle answer for challenge q, recording (r_i, d_i).
  Element answer(const Projective& q, mpz_class& r_out, unsigned& d_out, std::uint64_t& attempts) {
    const mpz_class& rho = c_.subgroup_order();
    for (;;) {
      ++attempts;
      const mpz_class r = random_below(rho);
      const unsigned d = static_cast<unsigned>(rng_.next_u64() & 1);
      const Projective& j = complement_[rng_.uniform(complement_.size())];
      Projective qi = c_.add_full(c_.scalar_mul(q, r), j);
      if (d == 1) qi = c_.add_full(qi, p_);
      const auto x = enc_.sample_preimage(c_.normalize(qi), rng_);
      if (!x) continue;
      r_out = r;
      d_out = d;
      return *x;
    }
  }

  /// Runs the adversary against the simulated oracle for challenge q and
  /// converts its kernel element into log_P(q). Every recovered value is
  /// checked by scalar multiplication; a non-kernel answer throws
  /// ContractViolation.
  ReductionResult run(const Projective& q, const Adversary<L>& adversary) {
    ReductionResult res;
    std::unordered_map<std::uint64_t, std::pair<mpz_class, unsigned>> coeffs;
    std::unordered_map<std::uint64_t, Element> answers;
    const Oracle<L> oracle = [&](std::uint64_t idx) {
      auto it = answers.find(idx);
      if (it != answers.end()) return it->second;
      mpz_class r;
      unsigned d = 0;
      const Element x = answer(q, r, d, res.sampling_attempts);
      ++res.oracle_queries;
      coeffs.emplace(idx, std::make_pair(r, d));
      answers.emplace(idx, x);
      return x;
    };
    const auto found = adversary(oracle, enc_);
    if (!found || found->empty()) return res;

    const mpz_class& rho = c_.subgroup_order();
    Projective sum = Curve::projective_identity();
    mpz_class r = 0, d = 0;
    for (auto [idx, mult] : *found) {
      auto it = coeffs.find(idx);
      if (it == coeffs.end() || mult == 0) throw ContractViolation("adversary output uses an unqueried or zero term");
      if (cmp(abs(mpz_class(static_cast<long>(mult))), rho) >= 0) {
        throw ContractViolation("adversary multiplicity is not below rho");
      }
      sum = c_.add_full(sum, c_.scalar_mul(c_.to_projective(enc_.encode(answers.at(idx))), mult));
      r += it->second.first * static_cast<long>(mult);
      d += static_cast<long>(it->second.second) * static_cast<long>(mult);
    }
    if (!c_.equal(sum, Curve::projective_identity())) throw ContractViolation("adversary output is not in the kernel");
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), rho.get_mpz_t());
    mpz_mod(d.get_mpz_t(), d.get_mpz_t(), rho.get_mpz_t());
    if (r == 0) {
      res.outcome = ReductionOutcome::r_zero;
      return res;
    }
    mpz_class n;
    mpz_invert(n.get_mpz_t(), r.get_mpz_t(), rho.get_mpz_t());
    n = -n * d;
    mpz_mod(n.get_mpz_t(), n.get_mpz_t(), rho.get_mpz_t());
    if (!c_.equal(c_.scalar_mul(p_, n), q)) throw InternalError("recovered logarithm fails verification");
    res.outcome = ReductionOutcome::recovered;
    res.log = n;
    return res;
  }

 private:
  mpz_class random_below(const mpz_class& bound) {
    // rejection on 64-bit words; bound fits in a few words for the intended curves
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    for (;;) {
      mpz_class v = 0;
      for (std::size_t got = 0; got < bits; got += 64) {
        v <<= 64;
        v += mpz_class(static_cast<unsigned long>(rng_.next_u64()));
      }
      mpz_fdiv_r_2exp(v.get_mpz_t(), v.get_mpz_t(), bits);
      if (v < bound) return v;
    }
  }

  const SwEncoder<L>& enc_;
  const Curve& c_;
  Projective p_;
  RandomSource& rng_;
  std::vector<Projective> complement_;
};

}  // namespace ecmh::analysis
