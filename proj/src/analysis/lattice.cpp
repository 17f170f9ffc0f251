#include "ecmh/analysis/lattice.hpp"

#include "ecmh/error.hpp"

namespace ecmh::analysis {

IntMatrix build_orthogonal_lattice(const AttackInstance& inst) {
  const std::size_t q = inst.h.size();
  if (q < 2) throw ParameterError("orthogonal lattice needs q >= 2");
  if (inst.modulus < 2) throw ParameterError("orthogonal lattice needs M >= 2");
  mpz_class h1_inv;
  if (mpz_invert(h1_inv.get_mpz_t(), inst.h[0].get_mpz_t(), inst.modulus.get_mpz_t()) == 0) {
    throw NotInvertible("h_1 is not invertible modulo M");
  }
  IntMatrix b(q, IntVector(q, 0));
  b[0][0] = inst.modulus;
  for (std::size_t i = 1; i < q; ++i) {
    mpz_class c = -inst.h[i] * h1_inv;
    mpz_mod(c.get_mpz_t(), c.get_mpz_t(), inst.modulus.get_mpz_t());
    b[i][0] = c;
    b[i][i] = 1;
  }
  return b;
}

namespace {

mpz_class dot(const IntVector& a, const IntVector& b) {
  mpz_class s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) mpz_addmul(s.get_mpz_t(), a[i].get_mpz_t(), b[i].get_mpz_t());
  return s;
}

// round(n / d) for d > 0, ties away from zero
mpz_class round_div(const mpz_class& n, const mpz_class& d) {
  mpz_class r = 2 * n + d;
  mpz_class two_d = 2 * d;
  mpz_fdiv_q(r.get_mpz_t(), r.get_mpz_t(), two_d.get_mpz_t());
  return r;
}

// Cohen's notation, 1-based: b[1..n], d[0..n], lam[k][j] for j < k.
class IntegralLll {
 public:
  IntegralLll(IntMatrix& basis, const mpq_class& delta)
      : b_(basis), n_(basis.size()), d_(n_ + 1), lam_(n_ + 1, IntVector(n_ + 1)) {
    num_ = delta.get_num();
    den_ = delta.get_den();
  }

  LllStats run() {
    if (n_ < 2) return stats_;
    d_[0] = 1;
    d_[1] = dot(row(1), row(1));
    if (d_[1] == 0) throw ParameterError("LLL: basis rows are linearly dependent");
    std::size_t k = 2, kmax = 1;
    while (k <= n_) {
      if (k > kmax) {
        kmax = k;
        extend_gram_schmidt(k);
      }
      for (;;) {
        red(k, k - 1);
        // Lovasz fails: den * d_k d_{k-2} < num * d_{k-1}^2 - den * lam^2
        const mpz_class lhs = den_ * d_[k] * d_[k - 2];
        const mpz_class rhs = num_ * d_[k - 1] * d_[k - 1] - den_ * lam_[k][k - 1] * lam_[k][k - 1];
        if (lhs >= rhs) break;
        swap(k, kmax);
        if (k > 2) --k;
      }
      for (std::size_t l = k - 1; l-- > 1;) red(k, l);
      ++k;
    }
    return stats_;
  }

 private:
  IntVector& row(std::size_t i) { return b_[i - 1]; }

  void extend_gram_schmidt(std::size_t k) {
    for (std::size_t j = 1; j <= k; ++j) {
      mpz_class u = dot(row(k), row(j));
      for (std::size_t i = 1; i < j; ++i) {
        u = d_[i] * u - lam_[k][i] * lam_[j][i];
        mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), d_[i - 1].get_mpz_t());
      }
      if (j < k) {
        lam_[k][j] = u;
      } else {
        if (u == 0) throw ParameterError("LLL: basis rows are linearly dependent");
        d_[k] = u;
      }
    }
  }

  void red(std::size_t k, std::size_t l) {
    mpz_class twice = 2 * lam_[k][l];
    if (mpz_cmpabs(twice.get_mpz_t(), d_[l].get_mpz_t()) <= 0) return;
    const mpz_class q = round_div(lam_[k][l], d_[l]);
    ++stats_.size_reductions;
    IntVector& bk = row(k);
    const IntVector& bl = row(l);
    for (std::size_t i = 0; i < bk.size(); ++i) mpz_submul(bk[i].get_mpz_t(), q.get_mpz_t(), bl[i].get_mpz_t());
    mpz_submul(lam_[k][l].get_mpz_t(), q.get_mpz_t(), d_[l].get_mpz_t());
    for (std::size_t i = 1; i < l; ++i) mpz_submul(lam_[k][i].get_mpz_t(), q.get_mpz_t(), lam_[l][i].get_mpz_t());
  }

  void swap(std::size_t k, std::size_t kmax) {
    ++stats_.swaps;
    std::swap(row(k), row(k - 1));
    for (std::size_t j = 1; j + 1 < k; ++j) std::swap(lam_[k][j], lam_[k - 1][j]);
    const mpz_class lam = lam_[k][k - 1];
    mpz_class bb = d_[k - 2] * d_[k] + lam * lam;
    mpz_divexact(bb.get_mpz_t(), bb.get_mpz_t(), d_[k - 1].get_mpz_t());
    for (std::size_t i = k + 1; i <= kmax; ++i) {
      const mpz_class t = lam_[i][k];
      mpz_class nk = d_[k] * lam_[i][k - 1] - lam * t;
      mpz_divexact(nk.get_mpz_t(), nk.get_mpz_t(), d_[k - 1].get_mpz_t());
      mpz_class nk1 = bb * t + lam * nk;
      mpz_divexact(nk1.get_mpz_t(), nk1.get_mpz_t(), d_[k].get_mpz_t());
      lam_[i][k] = nk;
      lam_[i][k - 1] = nk1;
    }
    d_[k - 1] = bb;
  }

  IntMatrix& b_;
  std::size_t n_;
  IntVector d_;
  IntMatrix lam_;
  mpz_class num_, den_;
  LllStats stats_;
};

using RatVector = std::vector<mpq_class>;

RatVector to_rational(const IntVector& v) { return RatVector(v.begin(), v.end()); }

mpq_class dot(const RatVector& a, const RatVector& b) {
  mpq_class s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

LllStats lll_reduce(IntMatrix& basis, const mpq_class& delta) {
  if (delta <= mpq_class(1, 4) || delta > 1) throw ParameterError("LLL delta must lie in (1/4, 1]");
  return IntegralLll(basis, delta).run();
}

bool is_lll_reduced(const IntMatrix& basis, const mpq_class& delta) {
  const std::size_t n = basis.size();
  std::vector<RatVector> star;
  std::vector<mpq_class> norm;
  for (std::size_t i = 0; i < n; ++i) {
    RatVector bi = to_rational(basis[i]);
    RatVector s = bi;
    mpq_class mu_prev = 0;
    for (std::size_t j = 0; j < i; ++j) {
      const mpq_class mu = dot(bi, star[j]) / norm[j];
      if (abs(mu) > mpq_class(1, 2)) return false;
      for (std::size_t t = 0; t < s.size(); ++t) s[t] -= mu * star[j][t];
      if (j + 1 == i) mu_prev = mu;
    }
    const mpq_class ns = dot(s, s);
    if (ns == 0) return false;
    if (i > 0 && ns < (delta - mu_prev * mu_prev) * norm[i - 1]) return false;
    star.push_back(std::move(s));
    norm.push_back(ns);
  }
  return true;
}

mpz_class abs_determinant(const IntMatrix& m) {
  // Bareiss elimination
  IntMatrix a = m;
  const std::size_t n = a.size();
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a[p][k] == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return abs(a[n - 1][n - 1]);
}

bool in_lattice(const IntMatrix& basis, const IntVector& v) {
  // Solve x B = v, i.e. B^T x^T = v^T, over the rationals.
  const std::size_t n = basis.size();
  std::vector<RatVector> a(n, RatVector(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = basis[j][i];
    a[i][n] = v[i];
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a[p][k] == 0) ++p;
    if (p == n) throw ParameterError("in_lattice: basis is singular");
    std::swap(a[p], a[k]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a[i][k] == 0) continue;
      const mpq_class f = a[i][k] / a[k][k];
      for (std::size_t j = k; j <= n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const mpq_class x = a[i][n] / a[i][i];
    if (x.get_den() != 1) return false;
  }
  return true;
}

bool same_lattice(const IntMatrix& a, const IntMatrix& b) {
  for (const auto& r : b) {
    if (!in_lattice(a, r)) return false;
  }
  for (const auto& r : a) {
    if (!in_lattice(b, r)) return false;
  }
  return true;
}

mpz_class squared_norm(const IntVector& v) { return dot(v, v); }

mpz_class max_abs(const IntVector& v) {
  mpz_class m = 0;
  for (const auto& x : v) {
    if (mpz_cmpabs(x.get_mpz_t(), m.get_mpz_t()) > 0) m = abs(x);
  }
  return m;
}

}  // namespace ecmh::analysis
