#include "ecmh/analysis/adhash_attack.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "ecmh/error.hpp"

namespace ecmh::analysis {

unsigned optimal_dimension(double log2_modulus, double hermite) {
  return static_cast<unsigned>(std::lround(std::sqrt(log2_modulus / std::log2(hermite))));
}

double predicted_log2_norm(double log2_modulus, unsigned q, double hermite) {
  return q * std::log2(hermite) + log2_modulus / q;
}

namespace {
double log2_mpz(const mpz_class& v) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return mant == 0 ? -std::numeric_limits<double>::infinity() : std::log2(mant) + static_cast<double>(exp);
}
}  // namespace

std::string CollisionReport::to_text() const {
  std::ostringstream s;
  s << "modulus_bits=" << modulus_bits << " q=" << q << " terms=" << multiset.size()
    << " max_multiplicity=" << max_multiplicity << " log2_norm=" << log2_euclidean_norm
    << " predicted_log2_norm=" << predicted_log2_norm << " lll_swaps=" << lll_swaps << " seconds=" << seconds;
  return s.str();
}

std::string CollisionReport::to_json() const {
  std::ostringstream s;
  s << "{\"modulus_bits\":" << modulus_bits << ",\"q\":" << q << ",\"terms\":" << multiset.size()
    << ",\"max_multiplicity\":" << max_multiplicity << ",\"log2_norm\":" << log2_euclidean_norm
    << ",\"predicted_log2_norm\":" << predicted_log2_norm << ",\"lll_swaps\":" << lll_swaps
    << ",\"seconds\":" << seconds << "}";
  return s.str();
}

CollisionReport find_adhash_collision(const AdHash& hash, unsigned q, ElementGenerator gen) {
  if (q < 2) throw ParameterError("collision search needs q >= 2");
  if (!gen) {
    gen = [](std::size_t i) {
      const std::string s = "adhash-query-" + std::to_string(i);
      return Bytes(s.begin(), s.end());
    };
  }
  const auto start = std::chrono::steady_clock::now();

  AttackInstance inst;
  inst.modulus = mpz_class(1) << hash.bits();
  std::vector<Bytes> elements;
  // Resample zero outputs; the first element must be odd to be invertible mod 2^n.
  for (std::size_t i = 0; elements.size() < q; ++i) {
    if (i > 64 * static_cast<std::size_t>(q) + 1024) throw InternalError("element generator yields too few usable hashes");
    Bytes e = gen(i);
    const mpz_class h = hash.element_value(e);
    if (h == 0) continue;
    if (elements.empty() && mpz_even_p(h.get_mpz_t())) continue;
    elements.push_back(std::move(e));
    inst.h.push_back(h);
  }

  IntMatrix basis = build_orthogonal_lattice(inst);
  const LllStats stats = lll_reduce(basis);

  const IntVector* best = nullptr;
  mpz_class best_norm;
  for (const auto& row : basis) {
    const mpz_class n2 = squared_norm(row);
    if (n2 == 0) continue;
    if (best == nullptr || n2 < best_norm) {
      best = &row;
      best_norm = n2;
    }
  }
  if (best == nullptr) throw InternalError("reduced basis has no nonzero row");

  CollisionReport rep;
  rep.modulus_bits = hash.bits();
  rep.q = q;
  rep.lll_swaps = stats.swaps;
  rep.log2_euclidean_norm = log2_mpz(best_norm) / 2;
  rep.predicted_log2_norm = predicted_log2_norm(hash.bits(), q);
  auto acc = hash.empty();
  for (std::size_t i = 0; i < q; ++i) {
    const mpz_class& v = (*best)[i];
    if (v == 0) continue;
    if (!v.fits_slong_p()) throw InternalError("collision multiplicity does not fit in 64 bits");
    const std::int64_t m = v.get_si();
    hash.update(acc, elements[i], m);
    rep.multiset.push_back({elements[i], m});
    rep.max_multiplicity = std::max<std::int64_t>(rep.max_multiplicity, m < 0 ? -m : m);
  }
  if (rep.multiset.empty() || acc != hash.empty()) throw InternalError("lattice row is not an AdHash collision");
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace ecmh::analysis
