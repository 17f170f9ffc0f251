#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ecmh/analysis/lattice.hpp"
#include "ecmh/baselines/muhash.hpp"

namespace ecmh::analysis {

/// Hermite factor constant of LLL used for predictions.
inline constexpr double kLllHermite = 1.021;

/// Lattice dimension minimizing c^q M^(1/q): round(sqrt(log2 M / log2 c)).
unsigned optimal_dimension(double log2_modulus, double hermite = kLllHermite);

/// log2 of c^q M^(1/q), the expected collision norm.
double predicted_log2_norm(double log2_modulus, unsigned q, double hermite = kLllHermite);

struct CollisionTerm {
  Bytes element;
  std::int64_t multiplicity;
};

struct CollisionReport {
  unsigned modulus_bits = 0;
  unsigned q = 0;
  std::vector<CollisionTerm> multiset;  // nonzero multiplicities only
  std::int64_t max_multiplicity = 0;    // infinity norm of the row
  double log2_euclidean_norm = 0;
  double predicted_log2_norm = 0;
  double seconds = 0;
  std::size_t lll_swaps = 0;

  /// Flat key=value line.
  std::string to_text() const;
  /// JSON object with the same fields (multiset omitted).
  std::string to_json() const;
};

/// Element for query i; the default is "adhash-query-<i>".
using ElementGenerator = std::function<Bytes(std::size_t)>;

/// Queries q elements, reduces the orthogonal lattice and returns the
/// shortest reduced row as a multiset. The result is re-hashed through
/// `hash` and checked to be a nonzero kernel element before returning;
/// any failure throws InternalError.
CollisionReport find_adhash_collision(const AdHash& hash, unsigned q, ElementGenerator gen = {});

}  // namespace ecmh::analysis
