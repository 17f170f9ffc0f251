#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

namespace ecmh::analysis {

using IntVector = std::vector<mpz_class>;
/// Row-major square integer matrix; rows are the basis vectors.
using IntMatrix = std::vector<IntVector>;

/// Modulus M and oracle outputs h_1..h_q in [0, M).
struct AttackInstance {
  mpz_class modulus;
  std::vector<mpz_class> h;
};

/// Basis of { v in Z^q : sum v_i h_i = 0 mod M }:
/// (M, 0, ..., 0) and (-h_i / h_1 mod M, e_i) for i >= 2.
/// Throws NotInvertible when gcd(h_1, M) != 1, ParameterError when q < 2.
IntMatrix build_orthogonal_lattice(const AttackInstance& inst);

struct LllStats {
  std::size_t swaps = 0;
  std::size_t size_reductions = 0;
};

/// In-place LLL with exact integer Gram-Schmidt data (Cohen, Algorithm 2.6.7),
/// for a basis of linearly independent rows. delta in (1/4, 1].
LllStats lll_reduce(IntMatrix& basis, const mpq_class& delta = mpq_class(99, 100));

/// Size-reduced and Lovasz conditions, checked with rational Gram-Schmidt.
bool is_lll_reduced(const IntMatrix& basis, const mpq_class& delta = mpq_class(99, 100));

/// |det| of a square integer matrix (fraction-free elimination).
mpz_class abs_determinant(const IntMatrix& m);

/// True when v is an integer combination of the rows of `basis` (nonsingular).
bool in_lattice(const IntMatrix& basis, const IntVector& v);

/// Both bases generate the same lattice: every row of each lies in the other.
bool same_lattice(const IntMatrix& a, const IntMatrix& b);

mpz_class squared_norm(const IntVector& v);
mpz_class max_abs(const IntVector& v);

}  // namespace ecmh::analysis
