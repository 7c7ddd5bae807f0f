/// @file grpmat.hpp
/// @brief Classical matrix groups over GF(p^f): reference bilinear and
///        quadratic forms, form-preservation tests, standard generating
///        sets, Singer-power semisimple elements and commuting J2-type
///        unipotents, multiplicative Jordan decomposition, Dickson
///        invariant and Wall spinor norm, and the exceptional graph-field
///        automorphism of Sp4 in characteristic 2 built from the exterior
///        square.
///
/// Reference forms (fixed once, everywhere):
///  - symplectic Gram on F^(2m): antidiagonal with entries 1 (top half)
///    and -1 (bottom half); in characteristic 2 that is the all-ones
///    antidiagonal;
///  - plus-type quadratic on F^(2m): Q(x) = x_0 x_1 + x_2 x_3 + ...,
///    consecutive hyperbolic pairs, stored as an upper-triangular matrix.
///
/// Row-vector convention throughout: v -> v g, forms evaluate as
/// B(x, y) = x G y^T and Q(x) = x U x^T.

#ifndef DERANGE_GRPMAT_HPP
#define DERANGE_GRPMAT_HPP

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "derange/arith.hpp"
#include "derange/linalg.hpp"

namespace derange {

// ---- small utilities --------------------------------------------------------

/// Entrywise application of the field automorphism a -> a^(p^j).
inline Mat frobenius_mat(const Mat& x, u32 j) {
  const FieldCtx& F = mat_ctx(x);
  Mat r = x;
  for (u32& c : r.a) c = F.frobenius_code(c, j);
  return r;
}

/// All vectors of F^n as code rows, in mixed-radix (lexicographic) order.
/// Guarded: q^n must stay at desk scale.
inline std::vector<std::vector<u32>> enumerate_vectors(const FieldCtx& F,
                                                       u32 n,
                                                       bool include_zero) {
  DERANGE_REQUIRE(n >= 1 && n <= 24, "enumerate_vectors: bad dimension");
  u64 total = 1;
  for (u32 i = 0; i < n; ++i) {
    total = checked_mul(total, F.q());
    DERANGE_REQUIRE(total <= (u64(1) << 24),
                    "enumerate_vectors: q^n above the 2^24 cap");
  }
  std::vector<std::vector<u32>> out;
  out.reserve(size_t(total) - (include_zero ? 0 : 1));
  std::vector<u32> v(n, 0);
  for (u64 it = 0; it < total; ++it) {
    if (it != 0 || include_zero) out.push_back(v);
    // Advance the odometer over element codes 0..q-1.
    for (u32 i = n; i-- > 0;) {
      if (v[i] + 1 < F.q()) {
        ++v[i];
        break;
      }
      v[i] = 0;
    }
  }
  return out;
}

/// Order of an invertible matrix: semisimple part from eigenvalue orders,
/// unipotent part by repeated p-th powering.
inline u64 mat_order(const Mat& A) {
  DERANGE_REQUIRE(A.is_square() && A.rows >= 1, "mat_order: square required");
  const FieldCtx& F = mat_ctx(A);
  const EigenProfile ep = eigen_profile(A);
  u64 t = 1;
  for (const auto& [ord, mult] : ep.entries) {
    (void)mult;
    DERANGE_REQUIRE(ord != 0, "mat_order: singular matrix");
    t = checked_mul(t / std::gcd(t, ord), ord);
  }
  Mat B = mat_pow(A, t);
  const Mat I = mat_identity(F, A.rows);
  u64 pa = 1;
  int steps = 0;
  while (!(B == I)) {
    B = mat_pow(B, F.p());
    pa = checked_mul(pa, F.p());
    DERANGE_CHECK(++steps <= 64, "mat_order: unipotent part does not resolve");
  }
  return checked_mul(t, pa);
}

// ---- reference forms --------------------------------------------------------

/// A bilinear alternating form (Gram matrix) or a quadratic form
/// (upper-triangular representative); evaluation follows the row-vector
/// convention.
struct FormSpec {
  enum class Kind { alternating, quadratic };
  Kind kind;
  Mat gram;

  u32 dim() const { return gram.rows; }
  const FieldCtx& field() const { return mat_ctx(gram); }

  /// Polar (bilinear) form: the Gram itself, or U + U^T for quadratics.
  Mat polar() const {
    return kind == Kind::alternating ? gram : gram + transpose(gram);
  }

  /// B(x, y) against the polar form.
  u32 b(const std::vector<u32>& x, const std::vector<u32>& y) const {
    const FieldCtx& F = field();
    const Mat P = polar();
    DERANGE_REQUIRE(x.size() == P.rows && y.size() == P.rows,
                    "FormSpec::b: length mismatch");
    u32 acc = 0;
    for (u32 i = 0; i < P.rows; ++i) {
      if (x[i] == 0) continue;
      u32 row = 0;
      for (u32 j = 0; j < P.cols; ++j) row = F.add(row, F.mul(P.at(i, j), y[j]));
      acc = F.add(acc, F.mul(x[i], row));
    }
    return acc;
  }

  /// Q(x); quadratic kind only.
  u32 q(const std::vector<u32>& x) const {
    DERANGE_REQUIRE(kind == Kind::quadratic, "FormSpec::q: not a quadratic");
    const FieldCtx& F = field();
    DERANGE_REQUIRE(x.size() == gram.rows, "FormSpec::q: length mismatch");
    u32 acc = 0;
    for (u32 i = 0; i < gram.rows; ++i) {
      if (x[i] == 0) continue;
      u32 row = 0;
      for (u32 j = 0; j < gram.cols; ++j) {
        row = F.add(row, F.mul(gram.at(i, j), x[j]));
      }
      acc = F.add(acc, F.mul(x[i], row));
    }
    return acc;
  }

  bool operator==(const FormSpec&) const = default;
};

/// Reference symplectic form on F^n (n even): antidiagonal Gram with
/// entries 1 in the top half and -1 in the bottom half.
inline FormSpec symplectic_form(const FieldCtx& F, u32 n) {
  DERANGE_REQUIRE(n >= 2 && n % 2 == 0, "symplectic_form: even dim >= 2");
  Mat j = mat_zero(F, n, n);
  for (u32 i = 0; i < n / 2; ++i) j.at(i, n - 1 - i) = 1;
  for (u32 i = n / 2; i < n; ++i) j.at(i, n - 1 - i) = F.neg(1);
  return FormSpec{FormSpec::Kind::alternating, std::move(j)};
}

/// Reference plus-type quadratic form on F^n (n even):
/// Q(x) = x_0 x_1 + x_2 x_3 + ... (consecutive hyperbolic pairs).
inline FormSpec quadratic_plus_form(const FieldCtx& F, u32 n) {
  DERANGE_REQUIRE(n >= 2 && n % 2 == 0, "quadratic_plus_form: even dim >= 2");
  Mat u = mat_zero(F, n, n);
  for (u32 i = 0; i < n; i += 2) u.at(i, i + 1) = 1;
  return FormSpec{FormSpec::Kind::quadratic, std::move(u)};
}

/// Quadratic refinement of an alternating Gram in characteristic 2: the
/// strict upper part of the Gram plus the given diagonal. Every quadratic
/// form with the given polar arises this way.
inline FormSpec quadratic_refinement(const FormSpec& alt,
                                     const std::vector<u32>& diagonal) {
  DERANGE_REQUIRE(alt.kind == FormSpec::Kind::alternating,
                  "quadratic_refinement: alternating form required");
  const FieldCtx& F = alt.field();
  DERANGE_REQUIRE(F.p() == 2, "quadratic_refinement: characteristic 2 only");
  DERANGE_REQUIRE(diagonal.size() == alt.dim(),
                  "quadratic_refinement: diagonal length mismatch");
  Mat u = mat_zero(F, alt.dim(), alt.dim());
  for (u32 i = 0; i < alt.dim(); ++i) {
    u.at(i, i) = diagonal[i];
    for (u32 j = i + 1; j < alt.dim(); ++j) u.at(i, j) = alt.gram.at(i, j);
  }
  FormSpec out{FormSpec::Kind::quadratic, std::move(u)};
  DERANGE_CHECK(out.polar() == alt.gram,
                "quadratic_refinement: polar form mismatch");
  return out;
}

/// Number of singular vectors of a quadratic form, zero included.
/// Exhaustive; guarded by the enumerate_vectors cap.
inline u64 count_singular_vectors(const FormSpec& spec) {
  DERANGE_REQUIRE(spec.kind == FormSpec::Kind::quadratic,
                  "count_singular_vectors: quadratic form required");
  u64 count = 0;
  for (const auto& v : enumerate_vectors(spec.field(), spec.dim(), true)) {
    if (spec.q(v) == 0) ++count;
  }
  return count;
}

/// Type of a nondegenerate quadratic form in even dimension, decided by
/// the exact singular-vector count: '+' or '-'.
inline char quadratic_type(const FormSpec& spec) {
  DERANGE_REQUIRE(spec.kind == FormSpec::Kind::quadratic &&
                      spec.dim() % 2 == 0,
                  "quadratic_type: even-dimensional quadratic required");
  const u64 q = spec.field().q();
  const u32 m = spec.dim() / 2;
  const u64 half = checked_pow(q, m);
  const u64 plus = checked_pow(q, 2 * m - 1) + half - half / q;
  const u64 minus = checked_pow(q, 2 * m - 1) - half + half / q;
  const u64 got = count_singular_vectors(spec);
  if (got == plus) return '+';
  if (got == minus) return '-';
  throw invalid_argument_error(
      "quadratic_type: form is degenerate (singular count " +
      std::to_string(got) + " matches neither type)");
}

/// Form preservation under v -> v g. For a quadratic form the defect
/// g U g^T - U must be alternating (skew with zero diagonal), which states
/// exactly Q(v g) = Q(v) for all v in every characteristic.
inline bool preserves_form(const Mat& g, const FormSpec& spec) {
  DERANGE_REQUIRE(g.is_square() && g.rows == spec.dim() &&
                      g.ctx == spec.gram.ctx,
                  "preserves_form: shape or field mismatch");
  const FieldCtx& F = mat_ctx(g);
  if (spec.kind == FormSpec::Kind::alternating) {
    return g * spec.gram * transpose(g) == spec.gram;
  }
  const Mat d = g * spec.gram * transpose(g) + mat_scale(spec.gram, F.neg(1));
  for (u32 i = 0; i < d.rows; ++i) {
    if (d.at(i, i) != 0) return false;
    for (u32 j = i + 1; j < d.cols; ++j) {
      if (d.at(i, j) != F.neg(d.at(j, i))) return false;
    }
  }
  return true;
}

// ---- reflections and Eichler maps --------------------------------------------

/// Reflection (characteristic 2: orthogonal transvection) in a
/// nonsingular vector: x -> x - (B(x,u)/Q(u)) u.
inline Mat reflection(const FormSpec& spec, const std::vector<u32>& u) {
  DERANGE_REQUIRE(spec.kind == FormSpec::Kind::quadratic,
                  "reflection: quadratic form required");
  const FieldCtx& F = spec.field();
  const u32 qu = spec.q(u);
  DERANGE_REQUIRE(qu != 0, "reflection: vector must be nonsingular");
  const u32 n = spec.dim();
  Mat r = mat_identity(F, n);
  std::vector<u32> e(n, 0);
  for (u32 i = 0; i < n; ++i) {
    e[i] = 1;
    const u32 c = F.div(spec.b(e, u), qu);
    e[i] = 0;
    for (u32 j = 0; j < n; ++j) {
      r.at(i, j) = F.sub(r.at(i, j), F.mul(c, u[j]));
    }
  }
  DERANGE_CHECK(preserves_form(r, spec), "reflection: form not preserved");
  return r;
}

/// Eichler (Siegel) transformation for a singular u and v in the
/// perpendicular of u: x -> x - B(x,v) u + B(x,u) v - Q(v) B(x,u) u.
/// Lies in the kernel of both the Dickson invariant and the spinor norm.
inline Mat eichler(const FormSpec& spec, const std::vector<u32>& u,
                   const std::vector<u32>& v) {
  DERANGE_REQUIRE(spec.kind == FormSpec::Kind::quadratic,
                  "eichler: quadratic form required");
  const FieldCtx& F = spec.field();
  DERANGE_REQUIRE(spec.q(u) == 0, "eichler: u must be singular");
  DERANGE_REQUIRE(spec.b(u, v) == 0, "eichler: v must be perpendicular to u");
  const u32 n = spec.dim();
  const u32 qv = spec.q(v);
  Mat r = mat_identity(F, n);
  std::vector<u32> e(n, 0);
  for (u32 i = 0; i < n; ++i) {
    e[i] = 1;
    const u32 bu = spec.b(e, u);
    const u32 bv = spec.b(e, v);
    e[i] = 0;
    for (u32 j = 0; j < n; ++j) {
      u32 x = r.at(i, j);
      x = F.sub(x, F.mul(bv, u[j]));
      x = F.add(x, F.mul(bu, v[j]));
      x = F.sub(x, F.mul(F.mul(qv, bu), u[j]));
      r.at(i, j) = x;
    }
  }
  DERANGE_CHECK(preserves_form(r, spec), "eichler: form not preserved");
  return r;
}

// ---- Dickson invariant and spinor norm ----------------------------------------

/// Dickson invariant of an isometry of a quadratic form: in
/// characteristic 2 this is rank(g - 1) mod 2; in odd characteristic it
/// is 0 exactly on SO (determinant 1).
inline u32 dickson_invariant(const Mat& g, const FormSpec& spec) {
  DERANGE_REQUIRE(spec.kind == FormSpec::Kind::quadratic,
                  "dickson_invariant: quadratic form required");
  DERANGE_REQUIRE(preserves_form(g, spec),
                  "dickson_invariant: not an isometry");
  const FieldCtx& F = mat_ctx(g);
  if (F.p() == 2) {
    return mat_rank(g - mat_identity(F, g.rows)) % 2;
  }
  const u32 dg = det(g);
  DERANGE_CHECK(dg == 1 || dg == F.neg(1),
                "dickson_invariant: determinant not +-1");
  return dg == 1 ? 0 : 1;
}

/// Spinor norm (odd characteristic) via the Wall form: the discriminant
/// of chi(u, v) = B(x, v) on W = Im(1 - g), where u = x (1 - g). Returns
/// 0 for the square class, 1 for the nonsquare class. Reflections map to
/// the class of Q(u); the map is a homomorphism onto F_q* / squares.
inline u32 spinor_norm(const Mat& g, const FormSpec& spec) {
  DERANGE_REQUIRE(spec.kind == FormSpec::Kind::quadratic,
                  "spinor_norm: quadratic form required");
  const FieldCtx& F = mat_ctx(g);
  DERANGE_REQUIRE(F.p() != 2,
                  "spinor_norm: odd characteristic only (use "
                  "dickson_invariant in characteristic 2)");
  DERANGE_REQUIRE(preserves_form(g, spec), "spinor_norm: not an isometry");
  const u32 n = spec.dim();
  const Mat one_minus_g = mat_identity(F, n) - g;
  const Rref w = rref(one_minus_g);
  if (w.rank == 0) return 0;  // identity
  // x_i with x_i (1 - g) = basis row u_i; Gram of the Wall form.
  Mat gram = mat_zero(F, w.rank, w.rank);
  std::vector<std::vector<u32>> xs;
  for (u32 i = 0; i < w.rank; ++i) {
    std::vector<u32> ui(n);
    for (u32 j = 0; j < n; ++j) ui[j] = w.m.at(i, j);
    auto xi = solve_rowvec(one_minus_g, ui);
    DERANGE_CHECK(xi.has_value(), "spinor_norm: image row not solvable");
    xs.push_back(std::move(*xi));
  }
  for (u32 i = 0; i < w.rank; ++i) {
    for (u32 j = 0; j < w.rank; ++j) {
      std::vector<u32> uj(n);
      for (u32 k = 0; k < n; ++k) uj[k] = w.m.at(j, k);
      gram.at(i, j) = spec.b(xs[i], uj);
    }
  }
  const u32 disc = det(gram);
  DERANGE_CHECK(disc != 0, "spinor_norm: Wall form degenerate");
  return F.pow(disc, (F.q() - 1) / 2) == 1 ? 0 : 1;
}

// ---- standard generators ------------------------------------------------------

namespace detail {

inline Mat elem_transvection(const FieldCtx& F, u32 n, u32 i, u32 j, u32 lam) {
  Mat m = mat_identity(F, n);
  m.at(i, j) = lam;
  return m;
}

inline Mat reversal_mat(const FieldCtx& F, u32 m) {
  Mat r = mat_zero(F, m, m);
  for (u32 i = 0; i < m; ++i) r.at(i, m - 1 - i) = 1;
  return r;
}

/// Levi embedding GL_m -> Sp_2m for the reference symplectic form:
/// A -> diag(A, R A^{-T} R).
inline Mat sp_levi(const Mat& A) {
  const FieldCtx& F = mat_ctx(A);
  const Mat R = reversal_mat(F, A.rows);
  return direct_sum(A, R * transpose(mat_inv(A)) * R);
}

/// Coordinate interleaving (e_0, .., e_{m-1}, f_0, .., f_{m-1}) ->
/// (e_0, f_0, e_1, f_1, ...): split-basis matrices conjugate into the
/// consecutive-pairs reference frame as P^T M P.
inline Mat interleave_mat(const FieldCtx& F, u32 m) {
  Mat p = mat_zero(F, 2 * m, 2 * m);
  for (u32 i = 0; i < m; ++i) {
    p.at(i, 2 * i) = 1;
    p.at(m + i, 2 * i + 1) = 1;
  }
  return p;
}

/// Levi embedding GL_m -> O+_2m for the reference plus-type quadratic:
/// split-basis diag(A, A^{-T}), interleaved into reference coordinates.
inline Mat oplus_levi(const Mat& A) {
  const FieldCtx& F = mat_ctx(A);
  const Mat P = interleave_mat(F, A.rows);
  return transpose(P) * direct_sum(A, transpose(mat_inv(A))) * P;
}

}  // namespace detail

/// Standard generating sets. Families: "SL", "GL" (natural), "Sp" and
/// "OmegaPlus" (reference forms above). Generation is by root elements:
/// adjacent transvections for SL/GL, a GL_m Levi plus long-root
/// transvections for Sp, Eichler transformations on basis vectors for
/// OmegaPlus. Anything else is rejected.
inline std::vector<Mat> standard_generators(const std::string& family,
                                            const FieldCtx& F, u32 n) {
  std::vector<Mat> out;
  const u32 g = F.gen().code;
  auto gl_gens = [&](u32 m) {
    std::vector<Mat> v;
    u32 lam = 1;
    for (u32 t = 0; t < F.f(); ++t) {
      for (u32 i = 0; i + 1 < m; ++i) {
        v.push_back(detail::elem_transvection(F, m, i, i + 1, lam));
        v.push_back(detail::elem_transvection(F, m, i + 1, i, lam));
      }
      lam = F.mul(lam, g);
    }
    if (F.q() > 2) {
      Mat d = mat_identity(F, m);
      d.at(0, 0) = g;
      v.push_back(std::move(d));
    }
    return v;
  };

  if (family == "SL" || family == "GL") {
    DERANGE_REQUIRE(n >= 2, "standard_generators: dimension >= 2 required");
    u32 lam = 1;
    for (u32 t = 0; t < F.f(); ++t) {
      for (u32 i = 0; i + 1 < n; ++i) {
        out.push_back(detail::elem_transvection(F, n, i, i + 1, lam));
        out.push_back(detail::elem_transvection(F, n, i + 1, i, lam));
      }
      lam = F.mul(lam, g);
    }
    if (family == "GL" && F.q() > 2) {
      Mat d = mat_identity(F, n);
      d.at(0, 0) = g;
      out.push_back(std::move(d));
    }
    return out;
  }

  if (family == "Sp") {
    DERANGE_REQUIRE(n >= 2 && n % 2 == 0,
                    "standard_generators: Sp needs even dimension");
    const u32 m = n / 2;
    const FormSpec sp = symplectic_form(F, n);
    if (m >= 2) {
      for (const Mat& A : gl_gens(m)) out.push_back(detail::sp_levi(A));
    } else if (F.q() > 2) {
      Mat d = mat_identity(F, 1);
      d.at(0, 0) = g;
      out.push_back(detail::sp_levi(d));
    }
    u32 lam = 1;
    for (u32 t = 0; t < F.f(); ++t) {
      out.push_back(detail::elem_transvection(F, n, m - 1, m, lam));
      out.push_back(detail::elem_transvection(F, n, m, m - 1, lam));
      lam = F.mul(lam, g);
    }
    for (const Mat& x : out) {
      DERANGE_CHECK(preserves_form(x, sp),
                    "standard_generators: Sp generator breaks the form");
    }
    return out;
  }

  if (family == "OmegaPlus") {
    DERANGE_REQUIRE(n >= 4 && n % 2 == 0,
                    "standard_generators: OmegaPlus needs even dimension >= 4");
    const FormSpec qp = quadratic_plus_form(F, n);
    for (u32 i = 0; i < n; ++i) {
      std::vector<u32> u(n, 0);
      u[i] = 1;
      for (u32 j = 0; j < n; ++j) {
        if (j == i || j == (i ^ 1)) continue;  // self and hyperbolic partner
        u32 lam = 1;
        for (u32 t = 0; t < F.f(); ++t) {
          std::vector<u32> v(n, 0);
          v[j] = lam;
          out.push_back(eichler(qp, u, v));
          lam = F.mul(lam, g);
        }
      }
    }
    return out;
  }

  throw invalid_argument_error("standard_generators: unknown family '" +
                               family + "' (use SL, GL, Sp, OmegaPlus)");
}

// ---- Singer-power semisimple elements ----------------------------------------

/// Companion matrix of the minimal polynomial over GF(q) of the canonical
/// generator of GF(q^m): the full Singer element of GL_m(q).
inline Mat singer_full_companion(const FieldCtx& F, u32 m) {
  DERANGE_REQUIRE(m >= 1, "singer_full_companion: m >= 1");
  DERANGE_REQUIRE(&F == &field_cached(F.p(), F.f()),
                  "singer_full_companion: use the cached field context");
  const FieldCtx& K = field_cached(F.p(), F.f() * m);
  const Poly mu = minimal_polynomial(K.gen(), F.f());
  DERANGE_CHECK(mu.degree() == int(m) && mu.ctx == &F,
                "singer_full_companion: generator orbit is not full");
  return companion(mu);
}

namespace detail {

/// The GL_m(q) part shared by singer_semisimple and unipotent_j2m:
/// y = y_full^((q^m - 1)/r), with the required eigenvalue orbit checks.
inline Mat singer_gl_part(const FieldCtx& F, u32 m, u64 r) {
  DERANGE_REQUIRE(r >= 2, "singer element: order r >= 2 required");
  u64 qm1 = 1;
  for (u32 i = 0; i < m; ++i) qm1 = checked_mul(qm1, F.q());
  qm1 -= 1;
  DERANGE_REQUIRE(qm1 % r == 0,
                  "singer element: r must divide q^m - 1");
  DERANGE_REQUIRE(mult_order(F.q() % r, r) == m,
                  "singer element: eigenvalue Frobenius orbit must have size "
                  "m (order of q mod r)");
  const Mat yfull = singer_full_companion(F, m);
  Mat y = mat_pow(yfull, qm1 / r);
  DERANGE_CHECK(mat_order(y) == r, "singer element: wrong order");
  const Poly cp = char_poly(y);
  DERANGE_CHECK(poly_is_irreducible(cp),
                "singer element: reducible characteristic polynomial");
  return y;
}

}  // namespace detail

enum class ClassicalFamily { Sp, OmegaPlus };

/// Semisimple torus element of order r inside Sp_2m(q) or Omega+_2m(q)
/// (reference forms), built as a Levi image of a canonical Singer power.
/// Eigenvalues are zeta^(q^i) and their inverses for a fixed r-th root
/// zeta; r must divide q^m - 1 and q must have order exactly m mod r.
inline Mat singer_semisimple(ClassicalFamily fam, const FieldCtx& F, u32 m,
                             u64 r) {
  const Mat y = detail::singer_gl_part(F, m, r);
  Mat s = fam == ClassicalFamily::Sp ? detail::sp_levi(y)
                                     : detail::oplus_levi(y);
  if (fam == ClassicalFamily::Sp) {
    DERANGE_CHECK(preserves_form(s, symplectic_form(F, 2 * m)),
                  "singer_semisimple: symplectic form not preserved");
  } else {
    DERANGE_CHECK(preserves_form(s, quadratic_plus_form(F, 2 * m)),
                  "singer_semisimple: quadratic form not preserved");
  }
  DERANGE_CHECK(mat_order(s) == r, "singer_semisimple: wrong order");
  for (const auto& [ord, mult] : eigen_profile(s).entries) {
    (void)mult;
    DERANGE_CHECK(ord == r, "singer_semisimple: eigenvalue order defect");
  }
  if (fam == ClassicalFamily::OmegaPlus) {
    const FormSpec qp = quadratic_plus_form(F, 2 * m);
    if (F.p() == 2) {
      DERANGE_CHECK(dickson_invariant(s, qp) == 0,
                    "singer_semisimple: Dickson invariant nonzero");
    } else {
      DERANGE_CHECK(det(s) == 1, "singer_semisimple: determinant not 1");
      if (r % 2 == 1) {
        DERANGE_CHECK(spinor_norm(s, qp) == 0,
                      "singer_semisimple: odd-order element with nonzero "
                      "spinor norm");
      }
    }
  }
  return s;
}

/// Unipotent element of Jordan type J2^m (m blocks of size 2) commuting
/// with singer_semisimple(fam, F, m, r), as a block [[I, B], [0, I]] with
/// B solved linearly. Exists iff the inverse eigenvalue zeta^-1 lies in
/// the Frobenius orbit of zeta and the shape constraint admits a nonzero
/// solution; otherwise throws invalid_argument_error. Any nonzero
/// solution is automatically invertible (the blocks intertwine
/// irreducible modules), giving rank(u - 1) = m.
inline Mat unipotent_j2m(ClassicalFamily fam, const FieldCtx& F, u32 m,
                         u64 r) {
  const Mat y = detail::singer_gl_part(F, m, r);
  const u32 n = 2 * m;
  const Mat R = detail::reversal_mat(F, m);
  // Intertwine target: y B = B ybar.
  const Mat ybar = fam == ClassicalFamily::Sp
                       ? R * transpose(mat_inv(y)) * R
                       : transpose(mat_inv(y));
  // Unknowns b[k][l], flattened k*m + l. Equations as columns.
  std::vector<std::vector<u32>> eqs;  // each: length m^2 coefficient column
  auto eq_col = [&]() { return std::vector<u32>(size_t(m) * m, 0); };
  // (y B - B ybar)[i][j] = sum_k y[i][k] b[k][j] - b[i][k] ybar[k][j].
  for (u32 i = 0; i < m; ++i) {
    for (u32 j = 0; j < m; ++j) {
      auto col = eq_col();
      for (u32 k = 0; k < m; ++k) {
        col[size_t(k) * m + j] = F.add(col[size_t(k) * m + j], y.at(i, k));
        col[size_t(i) * m + k] =
            F.sub(col[size_t(i) * m + k], ybar.at(k, j));
      }
      eqs.push_back(std::move(col));
    }
  }
  // Shape: Sp needs B R symmetric; OmegaPlus needs B alternating.
  for (u32 i = 0; i < m; ++i) {
    for (u32 j = 0; j < m; ++j) {
      auto col = eq_col();
      if (fam == ClassicalFamily::Sp) {
        // (B R)[i][j] - (B R)[j][i] = b[i][m-1-j] - b[j][m-1-i].
        col[size_t(i) * m + (m - 1 - j)] =
            F.add(col[size_t(i) * m + (m - 1 - j)], 1);
        col[size_t(j) * m + (m - 1 - i)] =
            F.sub(col[size_t(j) * m + (m - 1 - i)], 1);
      } else {
        if (i == j) {
          col[size_t(i) * m + i] = 1;  // zero diagonal
        } else {
          // b[i][j] + b[j][i] = 0 (skew; characteristic 2: symmetric).
          col[size_t(i) * m + j] = F.add(col[size_t(i) * m + j], 1);
          col[size_t(j) * m + i] = F.add(col[size_t(j) * m + i], 1);
        }
      }
      eqs.push_back(std::move(col));
    }
  }
  Mat N = mat_zero(F, m * m, u32(eqs.size()));
  for (u32 c = 0; c < eqs.size(); ++c) {
    for (u32 rix = 0; rix < m * m; ++rix) N.at(rix, c) = eqs[c][rix];
  }
  const Mat sol = nullspace(N);
  if (sol.rows == 0) {
    throw invalid_argument_error(
        "unipotent_j2m: no unipotent of type J2^m commutes with this "
        "semisimple element (inverse eigenvalue outside the Frobenius "
        "orbit, or no invertible solution shape)");
  }
  Mat B = mat_zero(F, m, m);
  for (u32 i = 0; i < m; ++i) {
    for (u32 j = 0; j < m; ++j) B.at(i, j) = sol.at(0, size_t(i) * m + j);
  }
  DERANGE_CHECK(mat_rank(B) == m,
                "unipotent_j2m: intertwiner unexpectedly singular");
  Mat u_split = mat_identity(F, n);
  for (u32 i = 0; i < m; ++i) {
    for (u32 j = 0; j < m; ++j) u_split.at(i, m + j) = B.at(i, j);
  }
  Mat u = u_split;
  if (fam == ClassicalFamily::OmegaPlus) {
    const Mat P = detail::interleave_mat(F, m);
    u = transpose(P) * u_split * P;
    DERANGE_CHECK(preserves_form(u, quadratic_plus_form(F, n)),
                  "unipotent_j2m: quadratic form not preserved");
  } else {
    DERANGE_CHECK(preserves_form(u, symplectic_form(F, n)),
                  "unipotent_j2m: symplectic form not preserved");
  }
  const Mat I = mat_identity(F, n);
  DERANGE_CHECK(mat_rank(u - I) == m, "unipotent_j2m: rank(u - 1) != m");
  DERANGE_CHECK(mat_pow(u, F.p()) == I, "unipotent_j2m: order is not p");
  const Mat s = singer_semisimple(fam, F, m, r);
  DERANGE_CHECK(s * u == u * s, "unipotent_j2m: does not commute with s");
  return u;
}

// ---- multiplicative Jordan decomposition --------------------------------------

/// A = s u = u s with s semisimple (order t, p coprime) and u unipotent
/// (order p^a), both powers of A with explicit exponents:
/// s = A^(p^a * alpha) with p^a alpha = 1 mod t, u = A^(t * beta) with
/// t beta = 1 mod p^a.
struct JordanParts {
  Mat s, u;
  u64 semi_order = 1;   // t
  u64 unip_order = 1;   // p^a
  u64 order = 1;        // t * p^a
  u64 exp_s = 0, exp_u = 0;
};

inline JordanParts jordan_decomposition(const Mat& A) {
  DERANGE_REQUIRE(A.is_square() && A.rows >= 1,
                  "jordan_decomposition: square matrix required");
  const FieldCtx& F = mat_ctx(A);
  u64 t = 1;
  for (const auto& [ord, mult] : eigen_profile(A).entries) {
    (void)mult;
    DERANGE_REQUIRE(ord != 0, "jordan_decomposition: singular matrix");
    t = checked_mul(t / std::gcd(t, ord), ord);
  }
  DERANGE_CHECK(t % F.p() != 0,
                "jordan_decomposition: semisimple order divisible by p");
  const Mat I = mat_identity(F, A.rows);
  Mat B = mat_pow(A, t);
  u64 pa = 1;
  int steps = 0;
  while (!(B == I)) {
    B = mat_pow(B, F.p());
    pa = checked_mul(pa, F.p());
    DERANGE_CHECK(++steps <= 64, "jordan_decomposition: unipotent runaway");
  }
  JordanParts out;
  out.semi_order = t;
  out.unip_order = pa;
  out.order = checked_mul(t, pa);
  out.exp_s = checked_mul(pa, modinv(pa, t));
  out.exp_u = checked_mul(t, modinv(t, pa));
  out.s = mat_pow(A, out.exp_s);
  out.u = mat_pow(A, out.exp_u);
  DERANGE_CHECK(out.s * out.u == A && out.u * out.s == A,
                "jordan_decomposition: parts do not recompose");
  DERANGE_CHECK(mat_pow(out.s, t) == I, "jordan_decomposition: s order");
  DERANGE_CHECK(mat_pow(out.u, pa) == I, "jordan_decomposition: u order");
  return out;
}

// ---- the Sp4 graph-field automorphism -----------------------------------------

/// Exterior square of g on Lambda^2 F^4 with the wedge basis
/// e0^e1, e0^e2, e0^e3, e1^e2, e1^e3, e2^e3 (lexicographic).
inline Mat exterior_square(const Mat& g) {
  DERANGE_REQUIRE(g.is_square() && g.rows == 4,
                  "exterior_square: 4x4 matrix required");
  const FieldCtx& F = mat_ctx(g);
  static const u32 pairs[6][2] = {{0, 1}, {0, 2}, {0, 3},
                                  {1, 2}, {1, 3}, {2, 3}};
  Mat r = mat_zero(F, 6, 6);
  for (u32 a = 0; a < 6; ++a) {
    const u32 i = pairs[a][0], j = pairs[a][1];
    for (u32 b = 0; b < 6; ++b) {
      const u32 k = pairs[b][0], l = pairs[b][1];
      r.at(a, b) = F.sub(F.mul(g.at(i, k), g.at(j, l)),
                         F.mul(g.at(i, l), g.at(j, k)));
    }
  }
  return r;
}

/// The exceptional graph automorphism rho of Sp4(2^f), realized on the
/// quotient w-perp / <w> of the exterior square, where w is the invariant
/// form vector (a nonsingular point of the Klein quadric, so only the
/// symplectic polar form descends). rho swaps the two conjugacy families
/// the field automorphism fixes; rho^2 agrees with the field automorphism
/// phi up to the stored inner twist: rho^2(g) = c^-1 phi(g) c.
class GraphFieldAutoSp4 {
 public:
  explicit GraphFieldAutoSp4(const FieldCtx& F) : F_(&F) {
    DERANGE_REQUIRE(F.p() == 2,
                    "graph automorphism: characteristic 2 only");
    // Klein quadric Q(a) = a_05 a_5.. : pairs (01|23), (02|13), (03|12).
    Mat uq = mat_zero(F, 6, 6);
    uq.at(0, 5) = 1;
    uq.at(1, 4) = 1;
    uq.at(2, 3) = 1;
    plk_ = FormSpec{FormSpec::Kind::quadratic, std::move(uq)};
    // Invariant vector of the reference symplectic form:
    // w = e0^e3 + e1^e2 -> wedge coordinates indices 2 and 3.
    w_ = std::vector<u32>{0, 0, 1, 1, 0, 0};
    DERANGE_CHECK(plk_.q(w_) == 1, "graph automorphism: w must be "
                                   "nonsingular for the Klein quadric");
    // w-perp: 5-dimensional, contains w (char 2).
    const Mat polar = plk_.polar();
    Mat col = mat_zero(F, 6, 1);
    for (u32 i = 0; i < 6; ++i) {
      u32 acc = 0;
      for (u32 j = 0; j < 6; ++j) acc = F.add(acc, F.mul(polar.at(i, j), w_[j]));
      col.at(i, 0) = acc;
    }
    const Rref wperp = rref(nullspace(col));
    DERANGE_CHECK(wperp.rank == 5, "graph automorphism: w-perp dimension");
    DERANGE_CHECK(rowspace_contains(wperp, w_),
                  "graph automorphism: w outside its own perp");
    // Coordinates of w in the RREF basis of w-perp; drop one basis row
    // carrying w to get a complement.
    std::vector<u32> kappa(wperp.rank, 0);
    {
      std::vector<u32> tmp = w_;
      for (u32 i = 0; i < wperp.rank; ++i) {
        const u32 c = tmp[wperp.pivot_cols[i]];
        kappa[i] = c;
        if (c == 0) continue;
        for (u32 j = 0; j < 6; ++j) {
          tmp[j] = F.sub(tmp[j], F.mul(c, wperp.m.at(i, j)));
        }
      }
    }
    u32 drop = 0;
    while (drop < kappa.size() && kappa[drop] == 0) ++drop;
    DERANGE_CHECK(drop < kappa.size(), "graph automorphism: w coordinates");
    basis5_ = mat_zero(F, 5, 6);
    u32 row = 0;
    for (u32 i = 0; i < wperp.rank; ++i) {
      if (i == drop) continue;
      for (u32 j = 0; j < 6; ++j) basis5_.at(row, j) = wperp.m.at(i, j);
      ++row;
    }
    for (u32 j = 0; j < 6; ++j) basis5_.at(4, j) = w_[j];
    // Quotient Gram on the four complement rows.
    Mat gq = mat_zero(F, 4, 4);
    for (u32 i = 0; i < 4; ++i) {
      for (u32 j = 0; j < 4; ++j) {
        std::vector<u32> ci(6), cj(6);
        for (u32 k = 0; k < 6; ++k) {
          ci[k] = basis5_.at(i, k);
          cj[k] = basis5_.at(j, k);
        }
        gq.at(i, j) = plk_.b(ci, cj);
      }
    }
    DERANGE_CHECK(det(gq) != 0, "graph automorphism: degenerate quotient");
    // Symplectic frame for the quotient Gram (characteristic 2).
    auto bq = [&](const std::vector<u32>& x, const std::vector<u32>& y) {
      u32 acc = 0;
      for (u32 i = 0; i < 4; ++i) {
        if (x[i] == 0) continue;
        u32 rowv = 0;
        for (u32 j = 0; j < 4; ++j) rowv = F.add(rowv, F.mul(gq.at(i, j), y[j]));
        acc = F.add(acc, F.mul(x[i], rowv));
      }
      return acc;
    };
    std::vector<std::vector<u32>> basis;
    for (u32 i = 0; i < 4; ++i) {
      std::vector<u32> e(4, 0);
      e[i] = 1;
      basis.push_back(std::move(e));
    }
    auto extract_pair = [&](std::vector<std::vector<u32>>& list)
        -> std::pair<std::vector<u32>, std::vector<u32>> {
      const std::vector<u32> a = list[0];
      u32 pick = 0, beta = 0;
      for (u32 j = 1; j < list.size(); ++j) {
        beta = bq(a, list[j]);
        if (beta != 0) {
          pick = j;
          break;
        }
      }
      DERANGE_CHECK(beta != 0, "graph automorphism: no hyperbolic partner");
      std::vector<u32> b = list[pick];
      for (u32 k = 0; k < 4; ++k) b[k] = F.div(b[k], beta);
      std::vector<std::vector<u32>> rest;
      for (u32 j = 1; j < list.size(); ++j) {
        if (j == pick) continue;
        std::vector<u32> d = list[j];
        const u32 da = bq(d, a);
        const u32 db = bq(d, b);
        for (u32 k = 0; k < 4; ++k) {
          d[k] = F.add(d[k], F.add(F.mul(db, a[k]), F.mul(da, b[k])));
        }
        rest.push_back(std::move(d));
      }
      list = std::move(rest);
      return {a, b};
    };
    auto [a1, b1] = extract_pair(basis);
    auto [a2, b2] = extract_pair(basis);
    DERANGE_CHECK(basis.empty(), "graph automorphism: frame bookkeeping");
    S_ = mat_zero(F, 4, 4);
    const std::vector<u32>* frame[4] = {&a1, &a2, &b2, &b1};
    for (u32 i = 0; i < 4; ++i) {
      for (u32 j = 0; j < 4; ++j) S_.at(i, j) = (*frame[i])[j];
    }
    const FormSpec ref = symplectic_form(F, 4);
    DERANGE_CHECK(S_ * gq * transpose(S_) == ref.gram,
                  "graph automorphism: frame does not reach the reference "
                  "Gram");
    Sinv_ = mat_inv(S_);
    // Integrity on the standard generators, then the inner twist.
    const std::vector<Mat> gens = standard_generators("Sp", F, 4);
    for (const Mat& x : gens) {
      const Mat rx = apply(x);
      DERANGE_CHECK(preserves_form(rx, ref),
                    "graph automorphism: image breaks the form");
    }
    for (size_t i = 0; i + 1 < gens.size(); i += 2) {
      DERANGE_CHECK(apply(gens[i] * gens[i + 1]) ==
                        apply(gens[i]) * apply(gens[i + 1]),
                    "graph automorphism: homomorphism defect");
    }
    compute_twist(gens);
  }

  const FieldCtx& field() const { return *F_; }

  /// rho(g); g must lie in Sp4 for the reference form.
  Mat apply(const Mat& g) const {
    const FieldCtx& F = *F_;
    DERANGE_REQUIRE(g.is_square() && g.rows == 4 && g.ctx == &F,
                    "graph automorphism: 4x4 matrix over the right field "
                    "required");
    DERANGE_REQUIRE(preserves_form(g, symplectic_form(F, 4)),
                    "graph automorphism: input not symplectic");
    const Mat g2 = exterior_square(g);
    {
      const std::vector<u32> wim = rowvec_mul(w_, g2);
      DERANGE_CHECK(wim == w_, "graph automorphism: w not invariant");
    }
    Mat m = mat_zero(F, 4, 4);
    for (u32 i = 0; i < 4; ++i) {
      std::vector<u32> ci(6);
      for (u32 k = 0; k < 6; ++k) ci[k] = basis5_.at(i, k);
      const std::vector<u32> im = rowvec_mul(ci, g2);
      const auto coords = solve_rowvec(basis5_, im);
      DERANGE_CHECK(coords.has_value(),
                    "graph automorphism: image escapes w-perp");
      for (u32 j = 0; j < 4; ++j) m.at(i, j) = (*coords)[j];
    }
    return S_ * m * Sinv_;
  }

  /// Inner twist c: rho^2(g) = c^-1 phi(g) c with phi the entrywise
  /// p-th-power field automorphism; c is symplectic.
  const Mat& twist() const { return twist_; }

 private:
  void compute_twist(const std::vector<Mat>& gens) {
    const FieldCtx& F = *F_;
    // Solve phi(g) c = c rho2(g) for all generators g; unknown c is 4x4.
    std::vector<std::pair<Mat, Mat>> pairs;
    for (const Mat& g : gens) {
      pairs.emplace_back(frobenius_mat(g, 1), apply(apply(g)));
    }
    Mat N = mat_zero(F, 16, u32(16 * pairs.size()));
    for (u32 pidx = 0; pidx < pairs.size(); ++pidx) {
      const Mat& fg = pairs[pidx].first;
      const Mat& r2 = pairs[pidx].second;
      for (u32 i = 0; i < 4; ++i) {
        for (u32 j = 0; j < 4; ++j) {
          const u32 col = pidx * 16 + i * 4 + j;
          // sum_k fg[i][k] c[k][j] - c[i][k] r2[k][j] = 0.
          for (u32 k = 0; k < 4; ++k) {
            N.at(k * 4 + j, col) = F.add(N.at(k * 4 + j, col), fg.at(i, k));
            N.at(i * 4 + k, col) = F.sub(N.at(i * 4 + k, col), r2.at(k, j));
          }
        }
      }
    }
    const Mat sol = nullspace(N);
    DERANGE_CHECK(sol.rows == 1,
                  "graph automorphism: twist space dimension != 1");
    Mat c = mat_zero(F, 4, 4);
    for (u32 i = 0; i < 4; ++i) {
      for (u32 j = 0; j < 4; ++j) c.at(i, j) = sol.at(0, i * 4 + j);
    }
    const FormSpec ref = symplectic_form(F, 4);
    const Mat gram = c * ref.gram * transpose(c);
    const u32 mu = F.div(gram.at(0, 3), ref.gram.at(0, 3));
    DERANGE_CHECK(mu != 0 && gram == mat_scale(ref.gram, mu),
                  "graph automorphism: twist not a form similarity");
    // Characteristic 2: every scalar has a square root, mu^(q/2).
    const u32 lam = F.pow(mu, F.q() / 2);
    c = mat_scale(c, F.inv(lam));
    DERANGE_CHECK(preserves_form(c, ref),
                  "graph automorphism: twist not symplectic");
    const Mat cinv = mat_inv(c);
    for (const Mat& g : gens) {
      DERANGE_CHECK(apply(apply(g)) == cinv * frobenius_mat(g, 1) * c,
                    "graph automorphism: twist identity fails");
    }
    twist_ = std::move(c);
  }

  const FieldCtx* F_;
  FormSpec plk_{FormSpec::Kind::quadratic, Mat{}};
  std::vector<u32> w_;
  Mat basis5_, S_, Sinv_, twist_;
};

}  // namespace derange

#endif  // DERANGE_GRPMAT_HPP
