/// @file linalg.hpp
/// @brief Exact dense linear algebra over GF(p^f): Gaussian elimination,
///        characteristic polynomials via Hessenberg reduction, rational
///        canonical forms via kernel chains, eigenvalue-order profiles, and
///        invariant-subspace dimension sets with witness bases.
///
/// Row-vector convention: vectors are rows and matrices act on the right,
/// v -> v * A. Subspaces are row spaces held as reduced row-echelon bases,
/// which makes every basis canonical and comparisons bit-exact.
///
/// The rational canonical form is computed by the kernel-chain method: for
/// each irreducible factor f of the characteristic polynomial the chain
/// ker f(A) <= ker f(A)^2 <= ... determines the block heights, and cyclic
/// generators are extracted greedily in descending height order. No Smith
/// normal form computation is involved.

#ifndef DERANGE_LINALG_HPP
#define DERANGE_LINALG_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "derange/gfpoly.hpp"

namespace derange {

/// Dense matrix of field-element codes, row-major.
struct Mat {
  const FieldCtx* ctx = nullptr;
  u32 rows = 0, cols = 0;
  std::vector<u32> a;

  u32& at(u32 i, u32 j) {
    DERANGE_CHECK(i < rows && j < cols, "Mat::at out of range");
    return a[size_t(i) * cols + j];
  }
  u32 at(u32 i, u32 j) const {
    DERANGE_CHECK(i < rows && j < cols, "Mat::at out of range");
    return a[size_t(i) * cols + j];
  }
  bool is_square() const { return rows == cols; }
  friend bool operator==(const Mat&, const Mat&) = default;
};

inline Mat mat_zero(const FieldCtx& F, u32 rows, u32 cols) {
  return {&F, rows, cols, std::vector<u32>(size_t(rows) * cols, 0)};
}

inline Mat mat_identity(const FieldCtx& F, u32 n) {
  Mat m = mat_zero(F, n, n);
  for (u32 i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

inline const FieldCtx& mat_ctx(const Mat& m) {
  DERANGE_CHECK(m.ctx != nullptr, "Mat without context");
  return *m.ctx;
}

inline Mat operator+(const Mat& x, const Mat& y) {
  DERANGE_CHECK(x.ctx == y.ctx && x.rows == y.rows && x.cols == y.cols,
                "matrix addition shape/context mismatch");
  const FieldCtx& F = mat_ctx(x);
  Mat r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = F.add(x.a[i], y.a[i]);
  return r;
}

inline Mat operator-(const Mat& x, const Mat& y) {
  DERANGE_CHECK(x.ctx == y.ctx && x.rows == y.rows && x.cols == y.cols,
                "matrix subtraction shape/context mismatch");
  const FieldCtx& F = mat_ctx(x);
  Mat r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = F.sub(x.a[i], y.a[i]);
  return r;
}

inline Mat operator*(const Mat& x, const Mat& y) {
  DERANGE_CHECK(x.ctx == y.ctx, "matrix product context mismatch");
  DERANGE_CHECK(x.cols == y.rows, "matrix product shape mismatch");
  const FieldCtx& F = mat_ctx(x);
  Mat r = mat_zero(F, x.rows, y.cols);
  for (u32 i = 0; i < x.rows; ++i) {
    for (u32 k = 0; k < x.cols; ++k) {
      const u32 v = x.at(i, k);
      if (v == 0) continue;
      for (u32 j = 0; j < y.cols; ++j) {
        const u32 w = y.at(k, j);
        if (w != 0) r.at(i, j) = F.add(r.at(i, j), F.mul(v, w));
      }
    }
  }
  return r;
}

inline Mat mat_scale(const Mat& x, u32 code) {
  const FieldCtx& F = mat_ctx(x);
  Mat r = x;
  for (auto& v : r.a) v = F.mul(v, code);
  return r;
}

inline Mat transpose(const Mat& x) {
  Mat r = mat_zero(mat_ctx(x), x.cols, x.rows);
  for (u32 i = 0; i < x.rows; ++i) {
    for (u32 j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
  }
  return r;
}

inline Mat mat_pow(Mat base, u64 e) {
  DERANGE_REQUIRE(base.is_square(), "mat_pow: square matrix required");
  const FieldCtx& F = mat_ctx(base);
  Mat r = mat_identity(F, base.rows);
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

/// Row vector times matrix.
inline std::vector<u32> rowvec_mul(const std::vector<u32>& v, const Mat& m) {
  DERANGE_CHECK(v.size() == m.rows, "rowvec_mul: length mismatch");
  const FieldCtx& F = mat_ctx(m);
  std::vector<u32> r(m.cols, 0);
  for (u32 i = 0; i < m.rows; ++i) {
    if (v[i] == 0) continue;
    for (u32 j = 0; j < m.cols; ++j) {
      if (m.at(i, j) != 0) r[j] = F.add(r[j], F.mul(v[i], m.at(i, j)));
    }
  }
  return r;
}

// ---- Gaussian elimination -----------------------------------------------

/// Reduced row echelon form with pivot column list.
struct Rref {
  Mat m;
  std::vector<u32> pivot_cols;
  u32 rank = 0;
};

inline Rref rref(Mat m) {
  const FieldCtx& F = mat_ctx(m);
  Rref out;
  u32 row = 0;
  for (u32 col = 0; col < m.cols && row < m.rows; ++col) {
    u32 piv = row;
    while (piv < m.rows && m.at(piv, col) == 0) ++piv;
    if (piv == m.rows) continue;
    if (piv != row) {
      for (u32 j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(row, j));
    }
    const u32 inv = F.inv(m.at(row, col));
    for (u32 j = 0; j < m.cols; ++j) m.at(row, j) = F.mul(m.at(row, j), inv);
    for (u32 i = 0; i < m.rows; ++i) {
      if (i == row || m.at(i, col) == 0) continue;
      const u32 c = m.at(i, col);
      for (u32 j = 0; j < m.cols; ++j) {
        m.at(i, j) = F.sub(m.at(i, j), F.mul(c, m.at(row, j)));
      }
    }
    out.pivot_cols.push_back(col);
    ++row;
  }
  out.rank = row;
  m.rows = row;  // drop zero rows; data beyond is ignored
  m.a.resize(size_t(row) * m.cols);
  out.m = std::move(m);
  return out;
}

inline u32 mat_rank(const Mat& m) { return rref(m).rank; }

/// Membership of a row vector in the row space given by an RREF basis.
inline bool rowspace_contains(const Rref& basis, std::vector<u32> v) {
  const FieldCtx& F = mat_ctx(basis.m);
  DERANGE_CHECK(v.size() == basis.m.cols, "rowspace_contains: length mismatch");
  for (u32 r = 0; r < basis.m.rows; ++r) {
    const u32 pc = basis.pivot_cols[r];
    if (v[pc] == 0) continue;
    const u32 c = v[pc];
    for (u32 j = 0; j < basis.m.cols; ++j) {
      v[j] = F.sub(v[j], F.mul(c, basis.m.at(r, j)));
    }
  }
  for (u32 x : v) {
    if (x != 0) return false;
  }
  return true;
}

/// One solution x of x * A = b (free variables set to zero), or nullopt
/// when the system is inconsistent.
inline std::optional<std::vector<u32>> solve_rowvec(const Mat& A,
                                                    const std::vector<u32>& b) {
  const FieldCtx& F = mat_ctx(A);
  DERANGE_REQUIRE(b.size() == A.cols, "solve_rowvec: length mismatch");
  // x A = b  <=>  A^T x^T = b^T: reduce the augmented matrix [A^T | b^T].
  Mat aug = mat_zero(F, A.cols, A.rows + 1);
  for (u32 i = 0; i < A.rows; ++i) {
    for (u32 j = 0; j < A.cols; ++j) aug.at(j, i) = A.at(i, j);
  }
  for (u32 j = 0; j < A.cols; ++j) aug.at(j, A.rows) = b[j];
  const Rref r = rref(aug);
  std::vector<u32> x(A.rows, 0);
  for (u32 i = 0; i < r.rank; ++i) {
    if (r.pivot_cols[i] == A.rows) return std::nullopt;  // pivot in b column
    x[r.pivot_cols[i]] = r.m.at(i, A.rows);
  }
  return x;
}

/// RREF basis of the left kernel {v : v * A = 0}.
inline Mat nullspace(const Mat& A) {
  const FieldCtx& F = mat_ctx(A);
  // Solve A^T x^T = 0 by RREF of A^T; free variables give the basis.
  const Rref r = rref(transpose(A));
  std::vector<bool> is_pivot(A.rows, false);
  for (u32 pc : r.pivot_cols) is_pivot[pc] = true;
  Mat basis = mat_zero(F, A.rows - r.rank, A.rows);
  u32 row = 0;
  for (u32 freec = 0; freec < A.rows; ++freec) {
    if (is_pivot[freec]) continue;
    basis.at(row, freec) = 1;
    for (u32 pr = 0; pr < r.rank; ++pr) {
      const u32 pc = r.pivot_cols[pr];
      basis.at(row, pc) = F.neg(r.m.at(pr, freec));
    }
    ++row;
  }
  DERANGE_CHECK(row == basis.rows, "nullspace: rank bookkeeping failed");
  return rref(std::move(basis)).m;
}

inline u32 det(Mat m) {
  DERANGE_REQUIRE(m.is_square(), "det: square matrix required");
  const FieldCtx& F = mat_ctx(m);
  u32 d = 1;
  bool negate = false;
  for (u32 col = 0; col < m.cols; ++col) {
    u32 piv = col;
    while (piv < m.rows && m.at(piv, col) == 0) ++piv;
    if (piv == m.rows) return 0;
    if (piv != col) {
      for (u32 j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(col, j));
      negate = !negate;
    }
    d = F.mul(d, m.at(col, col));
    const u32 inv = F.inv(m.at(col, col));
    for (u32 i = col + 1; i < m.rows; ++i) {
      if (m.at(i, col) == 0) continue;
      const u32 c = F.mul(m.at(i, col), inv);
      for (u32 j = col; j < m.cols; ++j) {
        m.at(i, j) = F.sub(m.at(i, j), F.mul(c, m.at(col, j)));
      }
    }
  }
  return negate ? F.neg(d) : d;
}

inline Mat mat_inv(const Mat& x) {
  DERANGE_REQUIRE(x.is_square(), "mat_inv: square matrix required");
  const FieldCtx& F = mat_ctx(x);
  const u32 n = x.rows;
  Mat aug = mat_zero(F, n, 2 * n);
  for (u32 i = 0; i < n; ++i) {
    for (u32 j = 0; j < n; ++j) aug.at(i, j) = x.at(i, j);
    aug.at(i, n + i) = 1;
  }
  const Rref r = rref(std::move(aug));
  // The augmented matrix always has rank n; x is invertible exactly when
  // all pivots land in the left block.
  for (u32 i = 0; i < n; ++i) {
    DERANGE_REQUIRE(i < r.pivot_cols.size() && r.pivot_cols[i] == i,
                    "mat_inv: singular matrix");
  }
  Mat out = mat_zero(F, n, n);
  for (u32 i = 0; i < n; ++i) {
    for (u32 j = 0; j < n; ++j) out.at(i, j) = r.m.at(i, n + j);
  }
  return out;
}

inline u32 trace(const Mat& m) {
  DERANGE_REQUIRE(m.is_square(), "trace: square matrix required");
  const FieldCtx& F = mat_ctx(m);
  u32 t = 0;
  for (u32 i = 0; i < m.rows; ++i) t = F.add(t, m.at(i, i));
  return t;
}

inline Mat direct_sum(const Mat& x, const Mat& y) {
  DERANGE_CHECK(x.ctx == y.ctx, "direct_sum: context mismatch");
  Mat r = mat_zero(mat_ctx(x), x.rows + y.rows, x.cols + y.cols);
  for (u32 i = 0; i < x.rows; ++i) {
    for (u32 j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j);
  }
  for (u32 i = 0; i < y.rows; ++i) {
    for (u32 j = 0; j < y.cols; ++j) r.at(x.rows + i, x.cols + j) = y.at(i, j);
  }
  return r;
}

/// Stacks two row-sets with equal column counts.
inline Mat vstack(const Mat& x, const Mat& y) {
  DERANGE_CHECK(x.ctx == y.ctx && x.cols == y.cols,
                "vstack: shape/context mismatch");
  Mat r = mat_zero(mat_ctx(x), x.rows + y.rows, x.cols);
  std::copy(x.a.begin(), x.a.end(), r.a.begin());
  std::copy(y.a.begin(), y.a.end(), r.a.begin() + x.a.size());
  return r;
}

/// Evaluates a polynomial at a square matrix (Horner).
inline Mat mat_poly_eval(const Poly& f, const Mat& A) {
  DERANGE_CHECK(f.ctx == A.ctx, "mat_poly_eval: context mismatch");
  DERANGE_REQUIRE(A.is_square(), "mat_poly_eval: square matrix required");
  const FieldCtx& F = mat_ctx(A);
  Mat acc = mat_zero(F, A.rows, A.rows);
  for (size_t i = f.c.size(); i-- > 0;) {
    acc = acc * A;
    if (f.c[i] != 0) {
      for (u32 d = 0; d < A.rows; ++d) acc.at(d, d) = F.add(acc.at(d, d), f.c[i]);
    }
  }
  return acc;
}

// ---- characteristic polynomial ------------------------------------------

/// det(tI - A), monic of degree n, via similarity reduction to upper
/// Hessenberg form followed by the leading-minor recurrence.
inline Poly char_poly(Mat A) {
  DERANGE_REQUIRE(A.is_square(), "char_poly: square matrix required");
  const FieldCtx& F = mat_ctx(A);
  const u32 n = A.rows;
  if (n == 0) return poly_one(F);

  // Hessenberg reduction by similarity transformations.
  for (u32 col = 0; col + 2 < n; ++col) {
    u32 piv = col + 1;
    while (piv < n && A.at(piv, col) == 0) ++piv;
    if (piv == n) continue;
    if (piv != col + 1) {
      for (u32 j = 0; j < n; ++j) std::swap(A.at(piv, j), A.at(col + 1, j));
      for (u32 i = 0; i < n; ++i) std::swap(A.at(i, piv), A.at(i, col + 1));
    }
    const u32 inv = F.inv(A.at(col + 1, col));
    for (u32 i = col + 2; i < n; ++i) {
      if (A.at(i, col) == 0) continue;
      const u32 c = F.mul(A.at(i, col), inv);
      for (u32 j = 0; j < n; ++j) {
        A.at(i, j) = F.sub(A.at(i, j), F.mul(c, A.at(col + 1, j)));
      }
      for (u32 i2 = 0; i2 < n; ++i2) {
        A.at(i2, col + 1) = F.add(A.at(i2, col + 1), F.mul(c, A.at(i2, i)));
      }
    }
  }

  // p_k = (t - A[k-1][k-1]) p_{k-1}
  //       - sum_i A[i][k-1] * (prod_{j=i..k-2} A[j+1][j]) * p_i.
  std::vector<Poly> p(n + 1, poly_one(F));
  for (u32 k = 1; k <= n; ++k) {
    Poly t_shift{&F, std::vector<u32>(p[k - 1].c.size() + 1, 0)};
    for (size_t i = 0; i < p[k - 1].c.size(); ++i) {
      t_shift.c[i + 1] = p[k - 1].c[i];
    }
    poly_trim(t_shift);
    Poly acc = t_shift - poly_scale(p[k - 1], A.at(k - 1, k - 1));
    u32 prod = 1;
    for (u32 i = k - 1; i-- > 0;) {
      prod = F.mul(prod, A.at(i + 1, i));  // subdiagonal product down to row i
      if (prod == 0) break;
      const u32 coeff = F.mul(A.at(i, k - 1), prod);
      if (coeff != 0) acc = acc - poly_scale(p[i], coeff);
    }
    p[k] = std::move(acc);
  }
  DERANGE_CHECK(p[n].degree() == int(n) && p[n].is_monic(),
                "char_poly: result not monic of degree n");
  return p[n];
}

/// Companion matrix of a monic polynomial in the row-vector convention:
/// e_i -> e_{i+1} for i < n-1 and e_{n-1} -> -(c_0 e_0 + ... + c_{n-1} e_{n-1}).
inline Mat companion(const Poly& f) {
  DERANGE_REQUIRE(f.is_monic() && f.degree() >= 1,
                  "companion: monic polynomial of positive degree required");
  const FieldCtx& F = poly_ctx(f);
  const u32 n = u32(f.degree());
  Mat m = mat_zero(F, n, n);
  for (u32 i = 0; i + 1 < n; ++i) m.at(i, i + 1) = 1;
  for (u32 j = 0; j < n; ++j) m.at(n - 1, j) = F.neg(f.c[j]);
  return m;
}

// ---- rational canonical form --------------------------------------------

/// One primary component of the module decomposition for an irreducible
/// factor f: block heights (descending), the kernel chain of f(A)^j, and a
/// cyclic generator per block.
struct PrimaryComponent {
  Poly f;
  int multiplicity = 0;                  // exponent of f in the char poly
  std::vector<int> heights;              // descending; sum = multiplicity
  std::vector<Rref> kernel_chain;        // kernel_chain[j] = ker f(A)^{j+1}
  std::vector<std::vector<u32>> gens;    // cyclic generator per block
};

struct RcfData {
  Poly charpoly;
  Poly minpoly;
  std::vector<PrimaryComponent> primaries;
  Mat form;  // block-diagonal companion matrices, canonically ordered
};

inline RcfData rcf_data(const Mat& A) {
  DERANGE_REQUIRE(A.is_square(), "rcf: square matrix required");
  const FieldCtx& F = mat_ctx(A);
  const u32 n = A.rows;
  RcfData out;
  out.charpoly = char_poly(A);
  out.minpoly = poly_one(F);
  out.form = mat_zero(F, 0, 0);

  for (const auto& [f, mult] : poly_factor(out.charpoly)) {
    PrimaryComponent pc;
    pc.f = f;
    pc.multiplicity = mult;
    const u32 d = u32(f.degree());

    // Kernel chain of B^j for B = f(A).
    const Mat B = mat_poly_eval(f, A);
    Mat Bj = mat_identity(F, n);
    std::vector<u32> kdims{0};
    for (int j = 1; j <= mult; ++j) {
      Bj = Bj * B;
      pc.kernel_chain.push_back(rref(nullspace(Bj)));
      kdims.push_back(pc.kernel_chain.back().rank);
    }
    DERANGE_CHECK(kdims.back() == d * u32(mult),
                  "rcf: primary component dimension mismatch");

    // Heights: n_j = #{blocks of height >= j} = (dim K_j - dim K_{j-1}) / d.
    std::vector<u32> nj(size_t(mult) + 2, 0);
    for (int j = 1; j <= mult; ++j) {
      const u32 diff = kdims[j] - kdims[j - 1];
      DERANGE_CHECK(diff % d == 0, "rcf: kernel step not divisible by deg f");
      nj[j] = diff / d;
    }
    for (int h = mult; h >= 1; --h) {
      for (u32 c = 0; c < nj[h] - nj[h + 1]; ++c) pc.heights.push_back(h);
    }
    std::sort(pc.heights.rbegin(), pc.heights.rend());

    // Greedy cyclic generators, tallest blocks first. The forbidden space
    // for a block of height h is K_{h-1} plus f(A)^{h_i - h} applied to the
    // modules already chosen.
    std::vector<Mat> chosen_modules;  // row bases {g A^t : t < d * h_i}
    for (size_t bi = 0; bi < pc.heights.size(); ++bi) {
      const int h = pc.heights[bi];
      Mat forb = (h >= 2) ? pc.kernel_chain[size_t(h) - 2].m : mat_zero(F, 0, n);
      for (size_t i = 0; i < bi; ++i) {
        const int hi = pc.heights[i];
        forb = vstack(forb, chosen_modules[i] * mat_pow(B, u64(hi - h)));
      }
      const Rref forbR = rref(forb);
      const Rref& Kh = pc.kernel_chain[size_t(h) - 1];
      std::vector<u32> g;
      for (u32 r = 0; r < Kh.m.rows; ++r) {
        std::vector<u32> cand(Kh.m.cols);
        for (u32 j = 0; j < Kh.m.cols; ++j) cand[j] = Kh.m.at(r, j);
        if (!rowspace_contains(forbR, cand)) {
          g = std::move(cand);
          break;
        }
      }
      DERANGE_CHECK(!g.empty(), "rcf: no generator outside forbidden space");
      // Module basis {g A^t : t = 0..d*h-1}.
      Mat mod = mat_zero(F, d * u32(h), n);
      std::vector<u32> v = g;
      for (u32 t = 0; t < d * u32(h); ++t) {
        for (u32 j = 0; j < n; ++j) mod.at(t, j) = v[j];
        v = rowvec_mul(v, A);
      }
      chosen_modules.push_back(std::move(mod));
      pc.gens.push_back(std::move(g));
    }

    // Integrity: the chosen modules span the primary component directly.
    Mat all = mat_zero(F, 0, n);
    u32 total = 0;
    for (const Mat& m : chosen_modules) {
      all = vstack(all, m);
      total += m.rows;
    }
    DERANGE_CHECK(mat_rank(all) == total && total == d * u32(mult),
                  "rcf: cyclic modules do not decompose the component");

    // Assemble this component's blocks into the form.
    for (int h : pc.heights) {
      Poly fh = poly_one(F);
      for (int i = 0; i < h; ++i) fh = fh * f;
      out.form = direct_sum(out.form, companion(fh));
    }
    // Minimal polynomial accumulates f^{max height}.
    for (int i = 0; i < pc.heights.front(); ++i) out.minpoly = out.minpoly * f;

    out.primaries.push_back(std::move(pc));
  }
  DERANGE_CHECK(out.form.rows == n, "rcf: assembled form has wrong size");
  return out;
}

/// The rational canonical form matrix alone.
inline Mat rcf(const Mat& A) { return rcf_data(A).form; }

// ---- eigenvalue order profile --------------------------------------------

/// Multiset of multiplicative orders of the eigenvalues in the algebraic
/// closure, each repeated with algebraic multiplicity. The order of a root
/// of an irreducible factor f (deg d) is the order of t in GF(q)[t]/(f);
/// the eigenvalue 0 is recorded with order 0.
struct EigenProfile {
  std::vector<std::pair<u64, u64>> entries;  // (order, count), sorted

  std::vector<u64> flatten() const {
    std::vector<u64> out;
    for (const auto& [ord, cnt] : entries) {
      for (u64 i = 0; i < cnt; ++i) out.push_back(ord);
    }
    return out;
  }
  friend bool operator==(const EigenProfile&, const EigenProfile&) = default;
};

inline EigenProfile eigen_profile(const Mat& A) {
  const FieldCtx& F = mat_ctx(A);
  std::map<u64, u64> acc;
  for (const auto& [f, mult] : poly_factor(char_poly(A))) {
    const u32 d = u32(f.degree());
    u64 ord = 0;
    if (!(d == 1 && f.c[0] == 0)) {  // skip the factor t (eigenvalue 0)
      u64 qd = 1;
      for (u32 i = 0; i < d; ++i) {
        qd = checked_mul(qd, F.q());
        DERANGE_REQUIRE(qd <= (u64(1) << 62),
                        "eigen_profile: splitting field exceeds 2^62 cap");
      }
      const Factorization qf = factorize(qd - 1);
      ord = qd - 1;
      const Poly x = poly_mod(poly_x(F), f);
      for (const auto& [r, e] : qf.factors) {
        (void)e;
        while (ord % r == 0 && poly_pow_mod(x, ord / r, f) == poly_one(F)) {
          ord /= r;
        }
      }
      DERANGE_CHECK(poly_pow_mod(x, ord, f) == poly_one(F),
                    "eigen_profile: order computation failed");
    }
    acc[ord] += u64(d) * u64(mult);
  }
  EigenProfile out;
  for (const auto& [o, c] : acc) out.entries.emplace_back(o, c);
  return out;
}

// ---- invariant subspaces --------------------------------------------------

/// Sorted dimensions of A-invariant subspaces with one RREF witness basis
/// per achievable dimension.
struct InvariantSubspaces {
  std::vector<u32> dims;
  std::vector<Mat> witnesses;  // witnesses[i] has dims[i] rows
};

inline InvariantSubspaces invariant_subspace_dims(const Mat& A) {
  DERANGE_REQUIRE(A.is_square() && A.rows <= 16,
                  "invariant_subspace_dims: n <= 16 required");
  const FieldCtx& F = mat_ctx(A);
  const u32 n = A.rows;
  const RcfData R = rcf_data(A);

  // Witness for k "copies of f" inside one primary component: greedy
  // subpartition mu <= heights, submodule sum_i f(A)^{h_i - mu_i} M_i.
  auto primary_witness = [&](const PrimaryComponent& pc, u32 k) -> Mat {
    const u32 d = u32(pc.f.degree());
    const Mat B = mat_poly_eval(pc.f, A);
    std::vector<u32> mu(pc.heights.size(), 0);
    u32 rem = k;
    for (size_t i = 0; i < pc.heights.size() && rem > 0; ++i) {
      mu[i] = std::min<u32>(u32(pc.heights[i]), rem);
      rem -= mu[i];
    }
    DERANGE_CHECK(rem == 0, "invariant witness: dimension not achievable");
    Mat rows = mat_zero(F, 0, n);
    for (size_t i = 0; i < mu.size(); ++i) {
      if (mu[i] == 0) continue;
      std::vector<u32> v = pc.gens[i];
      v = rowvec_mul(v, mat_pow(B, u64(pc.heights[i]) - mu[i]));
      Mat blockrows = mat_zero(F, d * mu[i], n);
      for (u32 t = 0; t < d * mu[i]; ++t) {
        for (u32 j = 0; j < n; ++j) blockrows.at(t, j) = v[j];
        v = rowvec_mul(v, A);
      }
      rows = vstack(rows, blockrows);
    }
    const Rref red = rref(rows);
    DERANGE_CHECK(red.rank == d * k, "invariant witness: wrong dimension");
    return red.m;
  };

  // Minkowski sum over primaries with back-pointers for witnesses.
  // state: achievable dim -> per-primary copy counts.
  std::map<u32, std::vector<u32>> reach;
  reach[0] = {};
  for (const auto& pc : R.primaries) {
    const u32 d = u32(pc.f.degree());
    const u32 maxk = u32(pc.multiplicity);
    std::map<u32, std::vector<u32>> next;
    for (const auto& [dim, picks] : reach) {
      for (u32 k = 0; k <= maxk; ++k) {
        const u32 nd = dim + d * k;
        if (next.count(nd)) continue;
        auto np = picks;
        np.push_back(k);
        next[nd] = std::move(np);
      }
    }
    reach = std::move(next);
  }

  InvariantSubspaces out;
  for (const auto& [dim, picks] : reach) {
    Mat w = mat_zero(F, 0, n);
    for (size_t pi = 0; pi < R.primaries.size(); ++pi) {
      if (picks[pi] == 0) continue;
      w = vstack(w, primary_witness(R.primaries[pi], picks[pi]));
    }
    const Rref red = rref(w);
    DERANGE_CHECK(red.rank == dim, "invariant subspace: dimension mismatch");
    // Invariance self-check: each basis row stays in the subspace under A.
    for (u32 r2 = 0; r2 < red.m.rows; ++r2) {
      std::vector<u32> v(n);
      for (u32 j = 0; j < n; ++j) v[j] = red.m.at(r2, j);
      DERANGE_CHECK(rowspace_contains(red, rowvec_mul(v, A)),
                    "invariant subspace: witness not invariant");
    }
    out.dims.push_back(dim);
    out.witnesses.push_back(red.m);
  }
  return out;
}

// ---- textual format -------------------------------------------------------

/// Canonical square-matrix text: "n;e00,e01,...,e(n-1)(n-1)" with each
/// entry in the element format (entry-internal commas sit inside brackets).
inline std::string format_mat(const Mat& m) {
  DERANGE_REQUIRE(m.is_square(), "format_mat: square matrix required");
  const FieldCtx& F = mat_ctx(m);
  std::string s = std::to_string(m.rows) + ";";
  for (size_t i = 0; i < m.a.size(); ++i) {
    if (i) s.push_back(',');
    s += format_elem(F.elem(m.a[i]));
  }
  return s;
}

inline Mat parse_mat(const FieldCtx& F, const std::string& text) {
  const auto semi = text.find(';');
  DERANGE_REQUIRE(semi != std::string::npos, "parse_mat: missing ';'");
  u64 n = 0;
  try {
    n = std::stoull(text.substr(0, semi));
  } catch (const std::exception&) {
    throw invalid_argument_error("parse_mat: bad dimension prefix");
  }
  DERANGE_REQUIRE(n >= 1 && n <= 64, "parse_mat: dimension out of range");
  // Split the entry list at bracket-depth-zero commas.
  std::vector<std::string> toks;
  std::string cur;
  int depth = 0;
  for (size_t i = semi + 1; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
    if (ch == ',' && depth == 0) {
      toks.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) toks.push_back(cur);
  DERANGE_REQUIRE(toks.size() == n * n,
                  "parse_mat: expected n^2 entries");
  Mat m = mat_zero(F, u32(n), u32(n));
  for (size_t i = 0; i < toks.size(); ++i) {
    m.a[i] = parse_elem(F, toks[i]).code;
  }
  return m;
}

}  // namespace derange

#endif  // DERANGE_LINALG_HPP
